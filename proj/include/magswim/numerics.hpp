#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace magswim::numerics {

/// One classical fourth-order Runge-Kutta step of y' = f(t, y).
template <class State, class Rhs>
State rk4_step(Rhs&& f, double t, const State& y, double h) {
  const State k1 = f(t, y);
  const State k2 = f(t + 0.5 * h, State(y + 0.5 * h * k1));
  const State k3 = f(t + 0.5 * h, State(y + 0.5 * h * k2));
  const State k4 = f(t + h, State(y + h * k3));
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Central-difference Jacobian of f : R^N -> R^M with per-coordinate step
/// rel_step * max(1, |x_i|).
template <int M, int N, class F>
Eigen::Matrix<double, M, N> central_jacobian(F&& f, const Eigen::Matrix<double, N, 1>& x,
                                             double rel_step) {
  Eigen::Matrix<double, M, N> jac;
  for (int k = 0; k < N; ++k) {
    const double h = rel_step * std::max(1.0, std::abs(x[k]));
    Eigen::Matrix<double, N, 1> xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    jac.col(k) = (f(xp) - f(xm)) / (xp[k] - xm[k]);
  }
  return jac;
}

/// n log-spaced points from lo to hi inclusive.
std::vector<double> log_space(double lo, double hi, std::size_t n);

struct GoldenSectionResult {
  double argmax = 0.0;
  double max = 0.0;
  std::vector<double> best_history;  // best value after each iteration
  int iterations = 0;
};

/// Maximizes a unimodal f on [lo, hi] until the bracket is narrower than width_tol.
GoldenSectionResult golden_section_maximize(const std::function<double(double)>& f, double lo,
                                            double hi, double width_tol);

}  // namespace magswim::numerics
