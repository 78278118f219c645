#pragma once

// Config-driven experiment pipeline: for every ka, far fields for each incidence,
// the sensitivity Jacobian, its SVD and the figure set.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <regex>
#include <string>
#include <vector>

#include "json.hpp"

#include "wavesense/errors.hpp"
#include "wavesense/geometry.hpp"
#include "wavesense/io.hpp"
#include "wavesense/scattering.hpp"
#include "wavesense/sensitivity.hpp"
#include "wavesense/shape_derivative.hpp"
#include "wavesense/svg.hpp"

namespace wavesense {

inline constexpr int kConfigSchemaVersion = 1;

struct ExperimentConfig {
  /// shape JSON, already resolved against the config file's directory
  std::filesystem::path scatterer;
  std::vector<double> ka_list;
  std::vector<double> incident_angles;
  std::size_t n_obs = 0;
  /// empty selects auto_resolution
  std::optional<std::size_t> n_half;
  std::size_t modes_to_report = 3;
  std::filesystem::path output_dir = "wavesense_output";
  bool emit_svg = true;
  /// normalisation notices produced while parsing
  std::vector<std::string> notices;
};

/// Half node count n = max(16, ceil(3 ka) + 2 N_spline), rounded up to a multiple of 8.
inline std::size_t auto_resolution(const Scatterer& sc, double ka) {
  if (!(ka > 0.0) || !std::isfinite(ka)) throw std::invalid_argument("auto_resolution: ka must be positive");
  const std::size_t raw =
      std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(3.0 * ka)) + 2 * sc.n_spline());
  return (raw + 7) / 8 * 8;
}

namespace detail {

inline double parse_ka(const nlohmann::json& v, const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    // "2pi", "4*pi", "pi", "1.5 pi"
    static const std::regex pattern(R"(^\s*([0-9]*\.?[0-9]+)?\s*\*?\s*pi\s*$)");
    std::smatch match;
    const std::string s = v.get<std::string>();
    if (std::regex_match(s, match, pattern)) {
      const double factor = match[1].matched ? std::stod(match[1].str()) : 1.0;
      return factor * std::numbers::pi;
    }
  }
  throw ConfigError(field, "expected a number or a multiple of pi such as \"2pi\"");
}

inline std::vector<double> number_list(const nlohmann::json& j, const std::string& field,
                                       bool allow_pi) {
  if (!j.is_array() || j.empty()) throw ConfigError(field, "expected a nonempty array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string name = field + "[" + std::to_string(i) + "]";
    const double v = allow_pi ? parse_ka(j[i], name)
                              : (j[i].is_number() ? j[i].get<double>()
                                                  : throw ConfigError(name, "expected a number"));
    if (!std::isfinite(v)) throw ConfigError(name, "must be finite");
    out.push_back(v);
  }
  return out;
}

inline std::size_t positive_integer(const nlohmann::json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() <= 0) {
    throw ConfigError(field, "expected a positive integer");
  }
  return static_cast<std::size_t>(j.get<long long>());
}

}  // namespace detail

/// Validates a parsed config. Relative paths are resolved against base_dir.
inline ExperimentConfig parse_experiment_config(const nlohmann::json& j,
                                                const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
  static const std::vector<std::string> known = {
      "schema_version", "description", "scatterer",       "ka_list",    "incident_angles",
      "n_obs",          "n_half",      "n_nodes",         "modes_to_report", "output_dir",
      "emit_svg"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError(key, "unknown key");
    }
  }
  if (!j.contains("schema_version")) throw ConfigError("schema_version", "missing");
  if (!j["schema_version"].is_number_integer() ||
      j["schema_version"].get<int>() != kConfigSchemaVersion) {
    throw ConfigError("schema_version", "unsupported version (expected " +
                                            std::to_string(kConfigSchemaVersion) + ")");
  }
  for (const char* required : {"scatterer", "ka_list", "incident_angles", "n_obs"}) {
    if (!j.contains(required)) throw ConfigError(required, "missing");
  }

  ExperimentConfig cfg;
  if (!j["scatterer"].is_string()) throw ConfigError("scatterer", "expected a path string");
  cfg.scatterer = base_dir / j["scatterer"].get<std::string>();

  cfg.ka_list = detail::number_list(j["ka_list"], "ka_list", true);
  for (std::size_t i = 0; i < cfg.ka_list.size(); ++i) {
    if (!(cfg.ka_list[i] > 0.0)) throw ConfigError("ka_list[" + std::to_string(i) + "]", "must be positive");
  }
  cfg.incident_angles = detail::number_list(j["incident_angles"], "incident_angles", true);

  cfg.n_obs = detail::positive_integer(j["n_obs"], "n_obs");
  if (cfg.n_obs < 8) throw ConfigError("n_obs", "must be at least 8");

  if (j.contains("n_half") && j.contains("n_nodes")) {
    throw ConfigError("n_nodes", "give either n_half or n_nodes, not both");
  }
  if (j.contains("n_half")) {
    const auto& v = j["n_half"];
    if (v.is_string()) {
      if (v.get<std::string>() != "auto") throw ConfigError("n_half", "expected a positive integer or \"auto\"");
    } else {
      cfg.n_half = detail::positive_integer(v, "n_half");
      if (*cfg.n_half < 2) throw ConfigError("n_half", "must be at least 2");
    }
  }
  if (j.contains("n_nodes")) {
    std::size_t nodes = detail::positive_integer(j["n_nodes"], "n_nodes");
    if (nodes < 4) throw ConfigError("n_nodes", "must be at least 4");
    if (nodes % 2 != 0) {
      cfg.notices.push_back("n_nodes = " + std::to_string(nodes) +
                            " is odd; the trapezoidal grid needs an even count, using " +
                            std::to_string(nodes + 1));
      ++nodes;
    }
    cfg.n_half = nodes / 2;
  }
  if (j.contains("modes_to_report")) {
    cfg.modes_to_report = detail::positive_integer(j["modes_to_report"], "modes_to_report");
  }
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) throw ConfigError("output_dir", "expected a path string");
    cfg.output_dir = base_dir / j["output_dir"].get<std::string>();
  } else {
    cfg.output_dir = base_dir / cfg.output_dir;
  }
  if (j.contains("emit_svg")) {
    if (!j["emit_svg"].is_boolean()) throw ConfigError("emit_svg", "expected true or false");
    cfg.emit_svg = j["emit_svg"].get<bool>();
  }
  if (j.contains("description") && !j["description"].is_string()) {
    throw ConfigError("description", "expected a string");
  }
  return cfg;
}

inline ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config", path.string() + ": " + e.what());
  }
  return parse_experiment_config(j, path.parent_path());
}

struct RunOptions {
  bool check_convergence = false;
  /// progress and summary lines; nullptr silences them
  std::ostream* log = nullptr;
};

struct KaSummary {
  double ka = 0.0;
  double k = 0.0;
  double a = 0.0;
  std::size_t n_half = 0;
  std::vector<double> sigma;
  std::vector<double> decay;
  /// max |u(n) - u(2n)| / max |u(2n)| over all incidences, when requested
  std::optional<double> self_convergence;
};

struct ExperimentReport {
  std::filesystem::path output_dir;
  std::vector<KaSummary> runs;
  /// written files, relative to output_dir, in write order
  std::vector<std::string> files;
  std::vector<std::string> notices;
};

namespace detail {

inline double relative_difference(const FarFieldPattern& coarse, const FarFieldPattern& fine) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t m = 0; m < fine.values.size(); ++m) {
    diff = std::max(diff, std::abs(coarse.values[m] - fine.values[m]));
    scale = std::max(scale, std::abs(fine.values[m]));
  }
  return scale > 0.0 ? diff / scale : diff;
}

inline std::string format_list(const std::vector<double>& v, std::size_t count) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < std::min(count, v.size()); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.6g", i ? " " : "", v[i]);
    out += buf;
  }
  return out;
}

inline std::string angle_label(double angle) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "d = (%.3f, %.3f)", std::cos(angle) + 0.0, std::sin(angle) + 0.0);
  return buf;
}

}  // namespace detail

/// Runs every ka of the config, writing CSV/JSON (and optionally SVG) files into
/// cfg.output_dir. Throws ConfigError/IoError for bad inputs and NumericalError when a
/// stage produces non-finite values.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {}) {
  namespace fs = std::filesystem;
  const Scatterer sc = io::load_scatterer(cfg.scatterer);
  ExperimentReport report;
  report.output_dir = cfg.output_dir.lexically_normal();
  report.notices = cfg.notices;
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError(cfg.output_dir.string(), "cannot create output directory");

  auto log = [&](const std::string& line) {
    if (opts.log) *opts.log << line << '\n';
  };
  auto emit = [&](const std::string& name, const std::string& content) {
    io::write_text(cfg.output_dir / name, content);
    report.files.push_back(name);
  };
  for (const auto& n : cfg.notices) log("notice: " + n);

  std::vector<IncidentWave> waves;
  std::vector<std::string> labels;
  for (double angle : cfg.incident_angles) {
    waves.push_back(IncidentWave::from_angle(angle));
    labels.push_back(detail::angle_label(angle));
  }
  const std::vector<double> obs = equispaced_angles(cfg.n_obs);
  const std::size_t n_modes = std::min(cfg.modes_to_report, sc.n_spline());
  if (n_modes < cfg.modes_to_report) {
    report.notices.push_back("modes_to_report capped at n_spline = " + std::to_string(n_modes));
    log("notice: " + report.notices.back());
  }

  nlohmann::json summary = nlohmann::json::array();
  for (std::size_t r = 0; r < cfg.ka_list.size(); ++r) {
    const double ka = cfg.ka_list[r];
    const std::string tag = "ka" + std::to_string(r + 1);
    const WaveContext ctx = WaveContext::from_ka(sc, ka);
    KaSummary run;
    run.ka = ka;
    run.k = ctx.k;
    run.a = ctx.a;
    run.n_half = cfg.n_half.value_or(auto_resolution(sc, ka));
    {
      char buf[160];
      std::snprintf(buf, sizeof buf, "[%s] ka = %.6g, k = %.6g, a = %.6g, 2n = %zu", tag.c_str(), ka,
                    ctx.k, ctx.a, 2 * run.n_half);
      log(buf);
    }

    const ForwardSolver forward(make_grid(sc, run.n_half), ctx);
    std::optional<ForwardSolver> fine;
    if (opts.check_convergence) fine.emplace(make_grid(sc, 2 * run.n_half), ctx);
    double worst = 0.0;
    for (std::size_t l = 0; l < waves.size(); ++l) {
      const FarFieldPattern ff = far_field_single_layer(forward.solve(waves[l]), ctx.k, obs);
      for (const auto& v : ff.values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
          throw NumericalError("non-finite far field at " + tag);
        }
      }
      emit("farfield_" + tag + "_inc" + std::to_string(l + 1) + ".csv", io::far_field_csv(ff));
      if (fine) {
        const FarFieldPattern ref = far_field_single_layer(fine->solve(waves[l]), ctx.k, obs);
        worst = std::max(worst, detail::relative_difference(ff, ref));
      }
    }
    if (fine) {
      run.self_convergence = worst;
      char buf[160];
      std::snprintf(buf, sizeof buf, "[%s] self-convergence (2n vs 4n): %.3g", tag.c_str(), worst);
      log(buf);
      if (worst > 1e-6) log("warning: far field not converged to 1e-6 at " + tag + "; increase n_half");
    }

    const JacobianMatrix jac = assemble_jacobian(sc, ctx, waves, obs, run.n_half);
    if (!jac.entries.all_finite()) throw NumericalError("non-finite Jacobian at " + tag);
    const DenseRealMatrix modulus = modulus_matrix(jac);
    emit("jacobian_abs_" + tag + ".csv", io::real_matrix_csv(modulus));
    emit("jacobian_" + tag + ".csv", io::complex_matrix_csv(jac.entries));
    emit("jacobian_" + tag + ".json", io::jacobian_sidecar(jac, ctx.a, run.n_half).dump(2) + "\n");

    const SvdModes modes = svd(modulus);
    run.sigma = modes.singular_values;
    run.decay = modes.size() >= 2 ? decay_metrics(modes) : std::vector<double>{};
    emit("modes_" + tag + ".json",
         io::modes_json(modes, ka, jac.directions, cfg.n_obs).dump(2) + "\n");
    log("[" + tag + "] sigma: " + detail::format_list(run.sigma, n_modes));
    log("[" + tag + "] sigma_k/sigma_1: " + detail::format_list(run.decay, run.decay.size()));

    if (cfg.emit_svg) {
      char title[128];
      std::snprintf(title, sizeof title, "|J|, ka = %.4g, rows = knots, %zu incidences x %zu observations",
                    ka, waves.size(), cfg.n_obs);
      emit("heatmap_" + tag + ".svg", svg::heatmap(modulus, cfg.n_obs, title));
      std::vector<IncidenceBlocks> blocks;
      double polar_max = 0.0;
      for (std::size_t i = 0; i < n_modes; ++i) {
        blocks.push_back(incidence_blocks(modes, i, waves.size(), cfg.n_obs, true));
        for (const auto& b : blocks.back().squared)
          for (double v : b) polar_max = std::max(polar_max, v);
      }
      for (std::size_t i = 0; i < n_modes; ++i) {
        svg::ModePanel panel;
        std::snprintf(title, sizeof title, "mode %zu, ka = %.4g, sigma = %.4g", i + 1, ka,
                      modes.singular_values[i]);
        panel.title = title;
        for (double u : modes.shape_vectors[i]) panel.knot_weights.push_back(std::abs(u));
        panel.cross_sections = blocks[i].squared;
        panel.incidence_labels = labels;
        panel.polar_max = polar_max;
        emit("mode" + std::to_string(i + 1) + "_" + tag + ".svg", svg::mode_figure(sc, panel));
      }
    }

    nlohmann::json entry = {{"ka", run.ka},         {"k", run.k},
                            {"a", run.a},           {"n_half", run.n_half},
                            {"sigma", run.sigma},   {"decay", run.decay},
                            {"tag", tag}};
    if (run.self_convergence) entry["self_convergence"] = *run.self_convergence;
    summary.push_back(entry);
    report.runs.push_back(std::move(run));
  }
  emit("summary.json", nlohmann::json{{"scatterer", io::scatterer_to_json(sc)},
                                      {"n_obs", cfg.n_obs},
                                      {"incident_angles", cfg.incident_angles},
                                      {"notices", report.notices},
                                      {"runs", summary}}
                           .dump(2) + "\n");
  return report;
}

}  // namespace wavesense
