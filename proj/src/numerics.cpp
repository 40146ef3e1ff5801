#include "magswim/numerics.hpp"

#include <algorithm>
#include <stdexcept>

namespace magswim::numerics {

std::vector<double> log_space(double lo, double hi, std::size_t n) {
  if (n < 2 || !(lo > 0.0) || !(hi > lo)) {
    throw std::invalid_argument("log_space requires 0 < lo < hi and n >= 2");
  }
  std::vector<double> out(n);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

GoldenSectionResult golden_section_maximize(const std::function<double(double)>& f, double lo,
                                            double hi, double width_tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  GoldenSectionResult res;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  res.argmax = fc >= fd ? c : d;
  res.max = std::max(fc, fd);
  res.best_history.push_back(res.max);
  while ((b - a) > width_tol && res.iterations < 200) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++res.iterations;
    const double cand = std::max(fc, fd);
    if (cand > res.max) {
      res.max = cand;
      res.argmax = fc >= fd ? c : d;
    }
    res.best_history.push_back(res.max);
  }
  return res;
}

}  // namespace magswim::numerics
