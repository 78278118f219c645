#pragma once

// On-disk formats: shape JSON, far-field / matrix CSV dumps, Jacobian sidecar and
// modes JSON. Floating point values are written with 17 significant digits so that
// every dump reads back bit-exactly.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "wavesense/errors.hpp"
#include "wavesense/geometry.hpp"
#include "wavesense/linalg.hpp"
#include "wavesense/scattering.hpp"
#include "wavesense/sensitivity.hpp"
#include "wavesense/shape_derivative.hpp"

namespace wavesense::io {

using nlohmann::json;

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open file for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open file for writing");
  out << text;
  if (!out) throw IoError(path.string(), "write failed");
}

// ---- shapes -------------------------------------------------------------

inline json scatterer_to_json(const Scatterer& sc) {
  return json{{"n_spline", sc.n_spline()},
              {"omega", std::vector<double>(sc.omega().begin(), sc.omega().end())}};
}

/// Parses {"n_spline": N, "omega": [...]}; an optional "description" string is ignored.
inline Scatterer scatterer_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("shape", "expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "n_spline" && key != "omega" && key != "description") {
      throw ConfigError("shape." + key, "unknown key");
    }
  }
  if (!j.contains("n_spline") || !j["n_spline"].is_number_integer()) {
    throw ConfigError("shape.n_spline", "missing or not an integer");
  }
  if (!j.contains("omega") || !j["omega"].is_array()) {
    throw ConfigError("shape.omega", "missing or not an array");
  }
  std::vector<double> omega;
  for (const auto& v : j["omega"]) {
    if (!v.is_number()) throw ConfigError("shape.omega", "entries must be numbers");
    omega.push_back(v.get<double>());
  }
  if (j["n_spline"].get<long>() != static_cast<long>(omega.size())) {
    throw ConfigError("shape.n_spline", "does not match the length of omega");
  }
  try {
    return Scatterer(std::move(omega));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("shape.omega", e.what());
  }
}

inline Scatterer load_scatterer(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("shape", path.string() + ": " + e.what());
  }
  return scatterer_from_json(j);
}

inline void save_scatterer(const std::filesystem::path& path, const Scatterer& sc,
                           const std::string& description = {}) {
  json j = scatterer_to_json(sc);
  if (!description.empty()) j["description"] = description;
  write_text(path, j.dump(2) + "\n");
}

// ---- CSV ----------------------------------------------------------------

/// Header "theta_obs,re,im,abs", one row per observation angle.
inline std::string far_field_csv(const FarFieldPattern& ff) {
  std::string out = "theta_obs,re,im,abs\n";
  for (std::size_t m = 0; m < ff.values.size(); ++m) {
    const auto v = ff.values[m];
    out += format_double(ff.obs_angles[m]) + "," + format_double(v.real()) + "," +
           format_double(v.imag()) + "," + format_double(std::abs(v)) + "\n";
  }
  return out;
}

inline FarFieldPattern parse_far_field_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (line != "theta_obs,re,im,abs") throw std::runtime_error("far-field CSV: unexpected header");
  FarFieldPattern ff;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double t, re, im, ab;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &t, &re, &im, &ab) != 4) {
      throw std::runtime_error("far-field CSV: malformed row");
    }
    ff.obs_angles.push_back(t);
    ff.values.emplace_back(re, im);
  }
  return ff;
}

inline std::string real_matrix_csv(const DenseRealMatrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

/// Row-major "re,im" pairs; each text row holds 2 * cols fields.
inline std::string complex_matrix_csv(const DenseComplexMatrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(m(i, j).real()) + "," + format_double(m(i, j).imag());
    }
    out += '\n';
  }
  return out;
}

namespace detail {

inline std::vector<std::vector<double>> parse_csv_numbers(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) row.push_back(std::stod(field));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error("matrix CSV: ragged rows");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

inline DenseRealMatrix parse_real_matrix_csv(const std::string& text) {
  const auto rows = detail::parse_csv_numbers(text);
  DenseRealMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

inline DenseComplexMatrix parse_complex_matrix_csv(const std::string& text) {
  const auto rows = detail::parse_csv_numbers(text);
  const std::size_t fields = rows.empty() ? 0 : rows.front().size();
  if (fields % 2 != 0) throw std::runtime_error("complex matrix CSV: odd field count");
  DenseComplexMatrix m(rows.size(), fields / 2);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = {rows[i][2 * j], rows[i][2 * j + 1]};
  return m;
}

// ---- JSON reports -------------------------------------------------------

inline json incidences_json(const std::vector<Vec2>& directions) {
  json arr = json::array();
  for (const Vec2& d : directions) {
    arr.push_back({{"angle", std::atan2(d.y, d.x)}, {"direction", {d.x, d.y}}});
  }
  return arr;
}

/// Metadata accompanying a |J| dump.
inline json jacobian_sidecar(const JacobianMatrix& jac, double a, std::size_t n_half) {
  return json{{"ka", jac.ka},
              {"k", jac.k},
              {"a", a},
              {"n_half", n_half},
              {"n_nodes", 2 * n_half},
              {"n_spline", jac.n_spline()},
              {"n_inc", jac.n_inc()},
              {"n_obs", jac.n_obs()},
              {"column_order", "incidence-major"},
              {"incidences", incidences_json(jac.directions)},
              {"obs_angles", jac.obs_angles}};
}

inline json modes_json(const SvdModes& modes, double ka, const std::vector<Vec2>& directions,
                       std::size_t n_obs) {
  json shape_abs = json::array();
  for (const auto& u : modes.shape_vectors) {
    std::vector<double> a(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) a[i] = std::abs(u[i]);
    shape_abs.push_back(a);
  }
  json cross_sections = json::array();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    cross_sections.push_back(incidence_blocks(modes, i, directions.size(), n_obs, true).squared);
  }
  return json{{"ka", ka},
              {"sigma", modes.singular_values},
              {"decay", modes.size() >= 2 ? json(decay_metrics(modes)) : json::array()},
              {"shape_vectors", modes.shape_vectors},
              {"shape_vectors_abs", shape_abs},
              {"farfield_vectors", modes.farfield_vectors},
              {"farfield_vectors_scaled", modes.scaled_farfield},
              {"cross_sections_scaled", cross_sections},
              {"n_obs", n_obs},
              {"incidences", incidences_json(directions)}};
}

}  // namespace wavesense::io
