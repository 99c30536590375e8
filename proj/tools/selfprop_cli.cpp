#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "selfprop/config.hpp"
#include "selfprop/errors.hpp"
#include "selfprop/experiment.hpp"
#include "selfprop/parallel.hpp"

namespace {

selfprop::RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw selfprop::ConfigError("cannot read config file " + path);
  std::stringstream text;
  text << in.rdbuf();
  return selfprop::parse_config(text.str(), overrides);
}

void print_report(const selfprop::SweepReport& rep) {
  std::cout << rep.parameter << "  radius_err  hausdorff  max_drift  stilde_l2\n";
  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    const auto& e = rep.entries[i];
    std::cout << e.value << "  " << e.radius_error << "  " << e.hausdorff << "  " << e.max_drift << "  " << e.stilde_l2
              << '\n';
  }
  std::cout << "EOC:";
  for (double o : rep.eoc) std::cout << ' ' << o;
  std::cout << '\n';
  for (const auto& v : rep.verdicts) std::cout << (v.pass ? "pass  " : "FAIL  ") << v.name << ' ' << v.detail << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-field simulator for self-propelled interfaces with a surfactant field"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::vector<std::string> overrides;
  int threads = 0;
  std::vector<double> values;
  std::string vtk_path, field = "phi";
  double level = 0.5;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", out_dir, "output directory (default: output.directory)");
    cmd->add_option("--override", overrides, "section.key=value, repeatable")->take_all();
    cmd->add_option("--threads", threads, "worker threads (results do not depend on it)")->check(CLI::NonNegativeNumber);
  };

  auto* run = app.add_subcommand("run", "run one simulation");
  add_common(run);
  auto* sweep_eps = app.add_subcommand("sweep-eps", "epsilon convergence sweep against the sharp-interface oracle");
  add_common(sweep_eps);
  sweep_eps->add_option("--values", values, "epsilon values (default: sweep.values)");
  auto* sweep_alpha = app.add_subcommand("sweep-alpha", "volume drift sweep over the penalty strength");
  add_common(sweep_alpha);
  sweep_alpha->add_option("--values", values, "alpha values (default: sweep.values)");
  auto* compare = app.add_subcommand("compare-oracle", "radius comparison against the sharp-interface oracle");
  add_common(compare);
  auto* extract = app.add_subcommand("extract", "1/2-level contour of a VTK snapshot");
  extract->add_option("vtk", vtk_path, "snapshot file")->required()->check(CLI::ExistingFile);
  extract->add_option("--out", out_dir, "contour CSV path")->required();
  extract->add_option("--field", field, "scalar field name");
  extract->add_option("--level", level, "contour level");

  CLI11_PARSE(app, argc, argv);

  try {
    if (threads > 0) selfprop::set_thread_count(threads);
    if (extract->parsed()) {
      const auto curve = selfprop::cmd_extract(vtk_path, out_dir, field, level);
      std::cout << "loops " << curve.loops.size() << " area " << curve.area << " perimeter " << curve.perimeter
                << " centroid " << curve.centroid[0] << ' ' << curve.centroid[1] << '\n';
      return 0;
    }
    const auto cfg = load_config(config_path, overrides);
    const std::string out = out_dir.empty() ? cfg.output.directory : out_dir;
    if (run->parsed()) {
      const auto res = selfprop::cmd_run(cfg, out);
      std::cout << "ok: " << res.steps << " steps, dt " << res.dt << ", " << res.rows.size() << " records in " << out
                << "/series.csv\n";
      return 0;
    }
    if (sweep_eps->parsed() || sweep_alpha->parsed()) {
      const auto& list = values.empty() ? cfg.sweep_values : values;
      const auto rep = sweep_eps->parsed() ? selfprop::cmd_sweep_epsilon(cfg, list, out)
                                           : selfprop::cmd_sweep_alpha(cfg, list, out);
      print_report(rep);
      return rep.pass() ? 0 : static_cast<int>(selfprop::ExitCode::kComparison);
    }
    const auto res = selfprop::cmd_compare_oracle(cfg, out);
    std::cout << "pass: max deviation " << res.max_deviation << ", terminal deviation " << res.terminal_deviation << '\n';
    return 0;
  } catch (const selfprop::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
