#include "magswim/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "magswim/errors.hpp"

namespace magswim {
namespace {

struct Entry {
  std::string value;
  int line = 0;
};

struct Section {
  int line = 0;
  std::map<std::string, Entry> keys;
  std::vector<Entry> samples;  // repeated `sample` lines of field.tabulated
};

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"params", {"L", "K", "M", "xi", "eta"}},
      {"field.constant", {"hx", "hy"}},
      {"field.sinusoidal", {"hx0", "epsilon", "omega"}},
      {"field.tabulated", {"sample"}},
      {"initial", {"x", "y", "theta", "alpha2", "alpha3"}},
      {"solver", {"dt", "t_final", "burn_in_periods", "measure_periods"}},
      {"analysis", {"omega_min", "omega_max", "n_grid", "bracket_depth"}},
      {"output", {"directory", "formats"}},
  };
  return s;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

class Parser {
 public:
  explicit Parser(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(int line, const std::string& key, const std::string& what) const {
    std::ostringstream msg;
    msg << source_;
    if (line > 0) msg << ":" << line;
    if (!key.empty()) msg << ": key '" << key << "'";
    msg << ": " << what;
    throw ConfigError(msg.str(), line, key);
  }

  double number(const std::string& section, const std::string& key, const Entry& e) const {
    double v = 0.0;
    const char* begin = e.value.data();
    const char* end = begin + e.value.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end) {
      fail(e.line, section + "." + key, "expected a number, got '" + e.value + "'");
    }
    if (!std::isfinite(v)) fail(e.line, section + "." + key, "value must be finite");
    return v;
  }

  int integer(const std::string& section, const std::string& key, const Entry& e) const {
    int v = 0;
    const char* begin = e.value.data();
    const char* end = begin + e.value.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end) {
      fail(e.line, section + "." + key, "expected an integer, got '" + e.value + "'");
    }
    return v;
  }

  std::map<std::string, Section> read(const std::string& text) const {
    std::map<std::string, Section> sections;
    std::istringstream in(text);
    std::string raw;
    std::string current;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      const auto hash = raw.find('#');
      const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']') fail(line, "", "malformed section header '" + s + "'");
        current = trim(s.substr(1, s.size() - 2));
        if (!schema().count(current)) fail(line, current, "unknown section");
        if (sections.count(current)) fail(line, current, "duplicate section");
        sections[current].line = line;
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string::npos) fail(line, "", "expected 'key = value', got '" + s + "'");
      if (current.empty()) fail(line, "", "key outside of any section");
      const std::string key = trim(s.substr(0, eq));
      const std::string value = trim(s.substr(eq + 1));
      if (!schema().at(current).count(key)) fail(line, current + "." + key, "unknown key");
      if (value.empty()) fail(line, current + "." + key, "empty value");
      Section& sec = sections[current];
      if (current == "field.tabulated" && key == "sample") {
        sec.samples.push_back({value, line});
        continue;
      }
      if (sec.keys.count(key)) fail(line, current + "." + key, "duplicate key");
      sec.keys[key] = {value, line};
    }
    return sections;
  }

 private:
  std::string source_;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  const Parser p(source);
  const auto sections = p.read(text);
  RunConfig cfg;
  auto note_default = [&](const std::string& key, const std::string& value) {
    cfg.defaults_applied.push_back(key + " = " + value);
  };
  auto find = [&](const std::string& sec, const std::string& key) -> const Entry* {
    auto it = sections.find(sec);
    if (it == sections.end()) return nullptr;
    auto k = it->second.keys.find(key);
    return k == it->second.keys.end() ? nullptr : &k->second;
  };
  auto num_or = [&](const std::string& sec, const std::string& key, double fallback) {
    if (const Entry* e = find(sec, key)) return p.number(sec, key, *e);
    note_default(sec + "." + key, fmt(fallback));
    return fallback;
  };
  auto int_or = [&](const std::string& sec, const std::string& key, int fallback) {
    if (const Entry* e = find(sec, key)) return p.integer(sec, key, *e);
    note_default(sec + "." + key, std::to_string(fallback));
    return fallback;
  };

  // params
  if (!sections.count("params")) p.fail(0, "params", "missing required section [params]");
  const int params_line = sections.at("params").line;
  cfg.params.length = num_or("params", "L", 1.0);
  cfg.params.spring = num_or("params", "K", 1.0);
  cfg.params.magnetization = num_or("params", "M", 1.0);
  auto triple = [&](const std::string& key, double fallback) -> std::array<double, 3> {
    const Entry* e = find("params", key);
    if (!e) {
      note_default("params." + key, fmt(fallback) + " " + fmt(fallback) + " " + fmt(fallback));
      return {fallback, fallback, fallback};
    }
    const auto toks = split_ws(e->value);
    if (toks.size() != 1 && toks.size() != 3) {
      p.fail(e->line, "params." + key, "expected one value or three (link 1 first)");
    }
    std::array<double, 3> out{};
    for (std::size_t i = 0; i < 3; ++i) {
      out[i] = p.number("params", key, {toks[toks.size() == 1 ? 0 : i], e->line});
    }
    return out;
  };
  cfg.params.xi = triple("xi", 0.5);
  cfg.params.eta = triple("eta", 1.0);
  try {
    cfg.params.validate();
  } catch (const PreconditionError& e) {
    p.fail(params_line, "params", e.what());
  }
  cfg.warnings = cfg.params.warnings();

  // field
  std::vector<std::string> field_sections;
  for (const char* s : {"field.constant", "field.sinusoidal", "field.tabulated"}) {
    if (sections.count(s)) field_sections.push_back(s);
  }
  if (field_sections.size() > 1) {
    p.fail(sections.at(field_sections[1]).line, field_sections[1],
           "ambiguous field: more than one [field.*] section");
  }
  const std::string field_kind = field_sections.empty() ? "" : field_sections.front();
  if (field_kind.empty()) {
    note_default("field", "sinusoidal hx0 = 1, epsilon = 0.1, omega = 1");
    cfg.field = FieldProgram::sinusoidal(1.0, 0.1, 1.0);
  } else if (field_kind == "field.constant") {
    cfg.field = FieldProgram::constant(num_or(field_kind, "hx", 1.0), num_or(field_kind, "hy", 0.0));
  } else if (field_kind == "field.sinusoidal") {
    const double hx0 = num_or(field_kind, "hx0", 1.0);
    const double eps = num_or(field_kind, "epsilon", 0.1);
    const double omega = num_or(field_kind, "omega", 1.0);
    if (!(omega > 0.0)) {
      const Entry* e = find(field_kind, "omega");
      p.fail(e ? e->line : 0, field_kind + ".omega", "omega > 0 violated");
    }
    cfg.field = FieldProgram::sinusoidal(hx0, eps, omega);
  } else {
    const Section& sec = sections.at(field_kind);
    if (sec.samples.empty()) p.fail(sec.line, field_kind, "at least one sample is required");
    std::vector<TabulatedPoint> pts;
    for (const Entry& e : sec.samples) {
      const auto toks = split_ws(e.value);
      if (toks.size() != 3) p.fail(e.line, field_kind + ".sample", "expected 't hx hy'");
      TabulatedPoint pt{p.number(field_kind, "sample", {toks[0], e.line}),
                        p.number(field_kind, "sample", {toks[1], e.line}),
                        p.number(field_kind, "sample", {toks[2], e.line})};
      if (!pts.empty() && !(pt.t > pts.back().t)) {
        p.fail(e.line, field_kind + ".sample", "samples must be strictly increasing in t");
      }
      pts.push_back(pt);
    }
    cfg.field = FieldProgram::tabulated(std::move(pts));
  }

  // initial
  cfg.initial.x = num_or("initial", "x", 0.0);
  cfg.initial.y = num_or("initial", "y", 0.0);
  cfg.initial.theta = num_or("initial", "theta", 0.0);
  cfg.initial.alpha2 = num_or("initial", "alpha2", 0.0);
  cfg.initial.alpha3 = num_or("initial", "alpha3", 0.0);

  // solver
  const auto period = cfg.field.period();
  double t_final_default = 10.0;
  if (period) t_final_default = 10.0 * *period;
  cfg.solver.t_final = num_or("solver", "t_final", t_final_default);
  if (!(cfg.solver.t_final > 0.0)) {
    p.fail(find("solver", "t_final")->line, "solver.t_final", "t_final > 0 violated");
  }
  const double dt_default = period ? *period / 2000.0 : cfg.solver.t_final / 1e4;
  cfg.solver.dt = num_or("solver", "dt", dt_default);
  if (!(cfg.solver.dt > 0.0)) p.fail(find("solver", "dt")->line, "solver.dt", "dt > 0 violated");
  cfg.solver.burn_in_periods = int_or("solver", "burn_in_periods", 20);
  cfg.solver.measure_periods = int_or("solver", "measure_periods", 1);
  if (cfg.solver.burn_in_periods < 1) {
    p.fail(find("solver", "burn_in_periods")->line, "solver.burn_in_periods",
           "burn_in_periods >= 1 violated");
  }
  if (cfg.solver.measure_periods < 1) {
    p.fail(find("solver", "measure_periods")->line, "solver.measure_periods",
           "measure_periods >= 1 violated");
  }

  // analysis
  cfg.analysis.omega_min = num_or("analysis", "omega_min", 1e-2);
  cfg.analysis.omega_max = num_or("analysis", "omega_max", 1e3);
  cfg.analysis.n_grid = int_or("analysis", "n_grid", 64);
  cfg.analysis.bracket_depth = int_or("analysis", "bracket_depth", 3);
  if (!(cfg.analysis.omega_min > 0.0) || !(cfg.analysis.omega_max > cfg.analysis.omega_min)) {
    p.fail(sections.count("analysis") ? sections.at("analysis").line : 0, "analysis",
           "0 < omega_min < omega_max violated");
  }
  if (cfg.analysis.n_grid < 16) {
    p.fail(find("analysis", "n_grid")->line, "analysis.n_grid", "n_grid >= 16 violated");
  }
  if (cfg.analysis.bracket_depth < 2) {
    p.fail(find("analysis", "bracket_depth")->line, "analysis.bracket_depth",
           "bracket_depth >= 2 violated");
  }

  // output
  if (const Entry* e = find("output", "directory")) {
    cfg.output.directory = e->value;
  } else {
    note_default("output.directory", ".");
  }
  if (const Entry* e = find("output", "formats")) {
    std::string list = e->value;
    for (char& c : list) {
      if (c == ',') c = ' ';
    }
    cfg.output.formats = split_ws(list);
    for (const auto& f : cfg.output.formats) {
      if (f != "csv" && f != "jsonl") {
        p.fail(e->line, "output.formats", "unknown format '" + f + "' (expected csv or jsonl)");
      }
    }
  } else {
    note_default("output.formats", "csv");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'", 0, "");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

}  // namespace magswim
