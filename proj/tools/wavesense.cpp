#include <cstdio>
#include <functional>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "wavesense/errors.hpp"
#include "wavesense/experiment.hpp"
#include "wavesense/io.hpp"
#include "wavesense/shapes.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int guarded(const std::function<void()>& body) {
  using namespace wavesense;
  try {
    body();
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SingularMatrixError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const TruncationError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wavesense: far-field shape sensitivity for 2D sound-soft scatterers"};
  app.require_subcommand(1);

  std::string config_path, output_dir;
  bool no_svg = false, check_convergence = false;
  auto* run = app.add_subcommand("run", "run an experiment configuration");
  run->add_option("--config", config_path, "experiment JSON")->required();
  run->add_option("--output", output_dir, "override output_dir");
  run->add_flag("--no-svg", no_svg, "skip SVG figures");
  run->add_flag("--check-convergence", check_convergence,
                "compare far fields against a doubled grid and warn above 1e-6");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a configuration without running it");
  validate->add_option("--config", validate_path, "experiment JSON")->required();

  std::string shape_kind = "standin", shape_out;
  std::size_t shape_n = 12;
  double shape_param = 0.0;
  auto* make_shape = app.add_subcommand("make-shape", "write a built-in shape as JSON");
  make_shape->add_option("--kind", shape_kind, "circle | ellipse | standin")
      ->check(CLI::IsMember({"circle", "ellipse", "standin"}));
  make_shape->add_option("--n", shape_n, "number of spline knots")->check(CLI::Range(4, 4096));
  make_shape->add_option("--param", shape_param, "log radius (circle) or eps (ellipse)");
  make_shape->add_option("--out", shape_out, "output path")->required();

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    return guarded([&] {
      auto cfg = wavesense::load_experiment_config(config_path);
      if (!output_dir.empty()) cfg.output_dir = output_dir;
      if (no_svg) cfg.emit_svg = false;
      wavesense::RunOptions opts;
      opts.check_convergence = check_convergence;
      opts.log = &std::cout;
      const auto report = wavesense::run_experiment(cfg, opts);
      std::cout << "wrote " << report.files.size() << " files to " << report.output_dir.string()
                << '\n';
    });
  }
  if (*validate) {
    return guarded([&] {
      const auto cfg = wavesense::load_experiment_config(validate_path);
      const auto sc = wavesense::io::load_scatterer(cfg.scatterer);
      for (const auto& n : cfg.notices) std::cout << "notice: " << n << '\n';
      std::cout << "ok: " << cfg.ka_list.size() << " ka values, " << cfg.incident_angles.size()
                << " incidences, n_obs = " << cfg.n_obs << ", n_spline = " << sc.n_spline() << '\n';
    });
  }
  return guarded([&] {
    using namespace wavesense;
    if (shape_kind == "circle") {
      io::save_scatterer(shape_out, shapes::circle(shape_n, shape_param), "circle");
    } else if (shape_kind == "ellipse") {
      const double eps = shape_param == 0.0 ? 0.3 : shape_param;
      io::save_scatterer(shape_out, shapes::ellipse_like(shape_n, eps),
                         "log radius ln(1 + eps cos 2 theta) at the knots");
    } else {
      io::save_scatterer(shape_out, shapes::standin(shape_n),
                         "irregular continent-like outline with a concave southern bay at theta = 3pi/2");
    }
  });
}
