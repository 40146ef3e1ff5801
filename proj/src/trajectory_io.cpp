#include "magswim/trajectory_io.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace magswim {

using nlohmann::ordered_json;

TrajectoryFormat parse_trajectory_format(const std::string& name) {
  if (name == "csv") return TrajectoryFormat::kCsv;
  if (name == "jsonl") return TrajectoryFormat::kJsonLines;
  throw std::invalid_argument("unknown trajectory format '" + name + "'");
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const int n = std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return std::string(buf.data(), static_cast<std::size_t>(n));
}

ordered_json params_json(const SwimmerParams& p) {
  return {{"L", p.length},
          {"xi", p.xi},
          {"eta", p.eta},
          {"K", p.spring},
          {"M", p.magnetization}};
}

ordered_json field_json(const FieldProgram& f) {
  ordered_json j{{"kind", to_string(f.kind())}};
  switch (f.kind()) {
    case FieldProgram::Kind::kConstant:
      j["hx"] = f.hx0();
      j["hy"] = f.hy0();
      break;
    case FieldProgram::Kind::kSinusoidal:
      j["hx0"] = f.hx0();
      j["epsilon"] = f.epsilon();
      j["omega"] = f.omega();
      break;
    case FieldProgram::Kind::kTabulated: {
      ordered_json samples = ordered_json::array();
      for (const auto& s : f.samples()) samples.push_back({s.t, s.hx, s.hy});
      j["samples"] = samples;
      break;
    }
  }
  return j;
}

ordered_json run_metadata(const RunConfig& c) {
  return {{"version", kArtifactVersion},
          {"params", params_json(c.params)},
          {"field", field_json(c.field)},
          {"initial",
           {c.initial.x, c.initial.y, c.initial.theta, c.initial.alpha2, c.initial.alpha3}},
          {"solver",
           {{"dt", c.solver.dt},
            {"t_final", c.solver.t_final},
            {"burn_in_periods", c.solver.burn_in_periods},
            {"measure_periods", c.solver.measure_periods}}},
          {"analysis",
           {{"omega_min", c.analysis.omega_min},
            {"omega_max", c.analysis.omega_max},
            {"n_grid", c.analysis.n_grid},
            {"bracket_depth", c.analysis.bracket_depth}}},
          {"defaults_applied", c.defaults_applied}};
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

double parse_field(std::string_view tok, const std::filesystem::path& path, int line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": bad number '" +
                             std::string(tok) + "'");
  }
  return v;
}

}  // namespace

void export_trajectory(const Trajectory& traj, const std::filesystem::path& path,
                       TrajectoryFormat format, const ordered_json& metadata) {
  std::ofstream out = open_for_write(path);
  if (format == TrajectoryFormat::kCsv) {
    out << kTrajectoryCsvHeader << '\n';
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const Configuration& s = traj.states[i];
      const FieldSample& h = traj.field_samples[i];
      out << format_double(traj.times[i]) << ',' << format_double(s.x) << ','
          << format_double(s.y) << ',' << format_double(s.theta) << ','
          << format_double(s.alpha2) << ',' << format_double(s.alpha3) << ','
          << format_double(h.hx) << ',' << format_double(h.hy) << '\n';
    }
  } else {
    ordered_json meta{{"record", "metadata"}, {"version", kArtifactVersion}};
    meta["run"] = metadata;
    out << meta.dump() << '\n';
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const Configuration& s = traj.states[i];
      const FieldSample& h = traj.field_samples[i];
      const ordered_json rec{{"record", "sample"}, {"t", traj.times[i]}, {"x", s.x},
                             {"y", s.y},           {"theta", s.theta},  {"alpha2", s.alpha2},
                             {"alpha3", s.alpha3}, {"Hx", h.hx},        {"Hy", h.hy}};
      out << rec.dump() << '\n';
    }
  }
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryCsvHeader) {
    throw std::runtime_error(path.string() + ": missing trajectory header");
  }
  Trajectory traj;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::array<double, 8> v{};
    std::size_t start = 0;
    for (std::size_t k = 0; k < 8; ++k) {
      const std::size_t comma = k < 7 ? line.find(',', start) : line.size();
      if (comma == std::string::npos) {
        throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                 ": expected 8 columns");
      }
      v[k] = parse_field(std::string_view(line).substr(start, comma - start), path, line_no);
      start = comma + 1;
    }
    traj.times.push_back(v[0]);
    traj.states.push_back({v[1], v[2], v[3], v[4], v[5]});
    traj.field_samples.push_back({v[6], v[7]});
  }
  return traj;
}

Trajectory read_trajectory_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  Trajectory traj;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto rec = nlohmann::json::parse(line);
    if (rec.value("record", "") != "sample") continue;
    traj.times.push_back(rec.at("t").get<double>());
    traj.states.push_back({rec.at("x").get<double>(), rec.at("y").get<double>(),
                           rec.at("theta").get<double>(), rec.at("alpha2").get<double>(),
                           rec.at("alpha3").get<double>()});
    traj.field_samples.push_back({rec.at("Hx").get<double>(), rec.at("Hy").get<double>()});
  }
  return traj;
}

}  // namespace magswim
