#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "wavesense/experiment.hpp"
#include "wavesense/io.hpp"
#include "wavesense/oracles.hpp"
#include "wavesense/shapes.hpp"

using namespace wavesense;
using nlohmann::json;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

json base_config(const fs::path& out) {
  return {{"schema_version", 1},
          {"scatterer", (testsupport::source_dir() / "data" / "standin_12.json").string()},
          {"ka_list", {"2pi"}},
          {"incident_angles", {0.0, pi / 2}},
          {"n_obs", 64},
          {"n_half", 16},
          {"output_dir", out.string()}};
}

std::string config_error_field(const json& j) {
  try {
    parse_experiment_config(j, ".");
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

std::vector<std::string> sorted_listing(const fs::path& dir) {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace

TEST(Config, ParsesSensitivityConfigs) {
  const auto cfg = load_experiment_config(testsupport::source_dir() / "configs" / "sensitivity_n12.json");
  ASSERT_EQ(cfg.ka_list.size(), 3u);
  EXPECT_DOUBLE_EQ(cfg.ka_list[0], 2 * pi);
  EXPECT_DOUBLE_EQ(cfg.ka_list[1], 4 * pi);
  EXPECT_DOUBLE_EQ(cfg.ka_list[2], 6 * pi);
  EXPECT_EQ(cfg.incident_angles.size(), 4u);
  EXPECT_EQ(cfg.n_obs, 1000u);
  // 27 nodes rounds up to an even trapezoidal grid
  EXPECT_EQ(cfg.n_half, std::optional<std::size_t>(14));
  ASSERT_EQ(cfg.notices.size(), 1u);
  EXPECT_NE(cfg.notices[0].find("28"), std::string::npos);
  EXPECT_EQ(io::load_scatterer(cfg.scatterer).n_spline(), 12u);
}

TEST(Config, ErrorsNameTheField) {
  const auto base = base_config("unused");
  auto with = [&](const std::string& key, const json& v) {
    json j = base;
    j[key] = v;
    return j;
  };
  EXPECT_EQ(config_error_field(with("colour", "red")), "colour");
  EXPECT_EQ(config_error_field(with("schema_version", 2)), "schema_version");
  EXPECT_EQ(config_error_field(with("n_obs", 4)), "n_obs");
  EXPECT_EQ(config_error_field(with("n_obs", -3)), "n_obs");
  EXPECT_EQ(config_error_field(with("ka_list", {"tau"})), "ka_list[0]");
  EXPECT_EQ(config_error_field(with("ka_list", {-1.0})), "ka_list[0]");
  EXPECT_EQ(config_error_field(with("ka_list", json::array())), "ka_list");
  EXPECT_EQ(config_error_field(with("n_nodes", 30)), "n_nodes");
  EXPECT_EQ(config_error_field(with("n_half", "many")), "n_half");
  EXPECT_EQ(config_error_field(with("emit_svg", "yes")), "emit_svg");
  json missing = base;
  missing.erase("incident_angles");
  EXPECT_EQ(config_error_field(missing), "incident_angles");
  missing = base;
  missing.erase("schema_version");
  EXPECT_EQ(config_error_field(missing), "schema_version");
  EXPECT_EQ(config_error_field(base), "");
}

TEST(Config, MissingFilesRaiseIoError) {
  EXPECT_THROW(load_experiment_config("/nonexistent/config.json"), IoError);
  EXPECT_THROW(io::load_scatterer("/nonexistent/shape.json"), IoError);
  const auto dir = testsupport::scratch_dir("broken");
  io::write_text(dir / "bad.json", "{ not json");
  try {
    load_experiment_config(dir / "bad.json");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "config");
  }
}

TEST(Config, ShapeFileValidation) {
  json shape = io::scatterer_to_json(shapes::standin(12));
  EXPECT_EQ(io::scatterer_from_json(shape).n_spline(), 12u);
  json extra = shape;
  extra["colour"] = 1;
  EXPECT_THROW(io::scatterer_from_json(extra), ConfigError);
  json mismatch = shape;
  mismatch["n_spline"] = 10;
  EXPECT_THROW(io::scatterer_from_json(mismatch), ConfigError);
  json tiny = {{"n_spline", 3}, {"omega", {0.0, 0.0, 0.0}}};
  EXPECT_THROW(io::scatterer_from_json(tiny), ConfigError);
}

TEST(AutoResolution, ExamplesAndMonotonicity) {
  EXPECT_EQ(2 * auto_resolution(shapes::circle(4), 2 * pi), 64u);
  EXPECT_EQ(2 * auto_resolution(shapes::standin(48), 2 * pi), 240u);
  std::size_t prev = 0;
  for (double ka = 1.0; ka < 60.0; ka += 0.7) {
    const std::size_t n = auto_resolution(shapes::standin(12), ka);
    EXPECT_GE(n, prev);
    EXPECT_EQ(n % 8, 0u);
    prev = n;
  }
  EXPECT_THROW(auto_resolution(shapes::circle(4), 0.0), std::invalid_argument);
}

TEST(Csv, RoundTripIsExact) {
  const Scatterer sc = shapes::standin(12);
  const auto ctx = WaveContext::from_ka(sc, 2 * pi);
  const std::vector<IncidentWave> waves{IncidentWave::from_angle(0.5)};
  const auto obs = equispaced_angles(20);
  const auto jac = assemble_jacobian(sc, ctx, waves, obs, 16);
  EXPECT_TRUE(io::parse_complex_matrix_csv(io::complex_matrix_csv(jac.entries)) == jac.entries);
  const auto mod = modulus_matrix(jac);
  EXPECT_TRUE(io::parse_real_matrix_csv(io::real_matrix_csv(mod)) == mod);
  const auto ff = far_field_single_layer(solve_forward(sc, ctx, waves[0], 16), ctx.k, obs);
  const auto back = io::parse_far_field_csv(io::far_field_csv(ff));
  EXPECT_EQ(back.obs_angles, ff.obs_angles);
  EXPECT_EQ(back.values, ff.values);
  const Scatterer again = io::scatterer_from_json(io::scatterer_to_json(sc));
  EXPECT_TRUE(std::equal(again.omega().begin(), again.omega().end(), sc.omega().begin()));
}

TEST(Run, CircleConfigMatchesMie) {
  const auto out = testsupport::scratch_dir("circle_mie");
  json j = json::parse(io::read_text(testsupport::source_dir() / "configs" / "circle_mie.json"));
  j["output_dir"] = out.string();
  const auto cfg = parse_experiment_config(j, testsupport::source_dir() / "configs");
  const auto report = run_experiment(cfg);
  ASSERT_EQ(report.runs.size(), 1u);
  EXPECT_EQ(2 * report.runs[0].n_half, 64u);
  const auto ff = io::parse_far_field_csv(io::read_text(out / "farfield_ka1_inc1.csv"));
  ASSERT_EQ(ff.values.size(), 360u);
  const auto mie = mie_far_field({.radius = 1.0, .k = report.runs[0].k}, {1.0, 0.0}, ff.obs_angles);
  EXPECT_LE(testsupport::max_abs_diff(ff.values, mie.values), 1e-8);
  EXPECT_NEAR(report.runs[0].k, pi, 1e-12);
}

TEST(Run, SvgSwitchOnlyAffectsFigures) {
  const auto with_svg = testsupport::scratch_dir("svg_on"), without = testsupport::scratch_dir("svg_off");
  json a = base_config(with_svg), b = base_config(without);
  b["emit_svg"] = false;
  run_experiment(parse_experiment_config(a, "."));
  run_experiment(parse_experiment_config(b, "."));
  const auto la = sorted_listing(with_svg), lb = sorted_listing(without);
  for (const auto& name : lb) {
    EXPECT_FALSE(name.ends_with(".svg")) << name;
    EXPECT_EQ(io::read_text(with_svg / name), io::read_text(without / name)) << name;
  }
  std::vector<std::string> svgs;
  for (const auto& name : la)
    if (name.ends_with(".svg")) svgs.push_back(name);
  EXPECT_EQ(svgs.size(), 4u);  // one heatmap and three modes
  EXPECT_EQ(la.size(), lb.size() + svgs.size());
}

TEST(Run, ModesCappedAtSplineCount) {
  const auto out = testsupport::scratch_dir("capped");
  json j = base_config(out);
  j["scatterer"] = (testsupport::source_dir() / "data" / "circle.json").string();
  j["modes_to_report"] = 9;
  const auto report = run_experiment(parse_experiment_config(j, "."));
  ASSERT_FALSE(report.notices.empty());
  EXPECT_NE(report.notices.back().find("capped"), std::string::npos);
  EXPECT_TRUE(fs::exists(out / "mode4_ka1.svg"));
  EXPECT_FALSE(fs::exists(out / "mode5_ka1.svg"));
}

TEST(Run, SidecarAndModesDescribeTheMatrix) {
  const auto out = testsupport::scratch_dir("sidecar");
  const auto report = run_experiment(parse_experiment_config(base_config(out), "."));
  const json side = json::parse(io::read_text(out / "jacobian_ka1.json"));
  EXPECT_EQ(side["n_spline"], 12);
  EXPECT_EQ(side["n_inc"], 2);
  EXPECT_EQ(side["n_obs"], 64);
  EXPECT_EQ(side["n_half"], 16);
  const auto mod = io::parse_real_matrix_csv(io::read_text(out / "jacobian_abs_ka1.csv"));
  EXPECT_EQ(mod.rows(), 12u);
  EXPECT_EQ(mod.cols(), 128u);
  const json modes = json::parse(io::read_text(out / "modes_ka1.json"));
  ASSERT_EQ(modes["sigma"].size(), 12u);
  EXPECT_DOUBLE_EQ(modes["sigma"][0].get<double>(), report.runs[0].sigma[0]);
  const json summary = json::parse(io::read_text(out / "summary.json"));
  EXPECT_EQ(summary["runs"].size(), 1u);
}

TEST(Run, ConvergenceCheckWarnsWhenUnderResolved) {
  const auto out = testsupport::scratch_dir("convergence");
  std::ostringstream log;
  const auto report = run_experiment(parse_experiment_config(base_config(out), "."),
                                     {.check_convergence = true, .log = &log});
  ASSERT_TRUE(report.runs[0].self_convergence.has_value());
  EXPECT_GT(*report.runs[0].self_convergence, 1e-6);
  EXPECT_NE(log.str().find("warning"), std::string::npos);
}

TEST(Run, SensitivityConfigEmitsAllFiguresAndIsDeterministic) {
  const auto cfg_path = testsupport::source_dir() / "configs" / "sensitivity_n12.json";
  json j = json::parse(io::read_text(cfg_path));
  const auto first = testsupport::scratch_dir("run_a"), second = testsupport::scratch_dir("run_b");
  j["output_dir"] = first.string();
  run_experiment(parse_experiment_config(j, cfg_path.parent_path()));
  j["output_dir"] = second.string();
  run_experiment(parse_experiment_config(j, cfg_path.parent_path()));
  const auto names = sorted_listing(first);
  EXPECT_EQ(names, sorted_listing(second));
  std::size_t modes = 0, heatmaps = 0;
  for (const auto& name : names) {
    if (name.starts_with("mode") && name.ends_with(".svg")) ++modes;
    if (name.starts_with("heatmap")) ++heatmaps;
    EXPECT_EQ(io::read_text(first / name), io::read_text(second / name)) << name;
  }
  EXPECT_EQ(modes, 9u);
  EXPECT_EQ(heatmaps, 3u);
}
