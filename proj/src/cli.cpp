#include "imcf/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <iostream>

#include "imcf/errors.hpp"

namespace imcf::cli {

namespace fs = std::filesystem;

std::string horosphere_demo_config() {
  return "# horosphere y = 1 in H^3\n"
         "grid.dimension = 2\n"
         "grid.points = 64\n"
         "grid.length = 2pi\n"
         "initial.family = constant\n"
         "initial.c = 1\n"
         "flow.t_end = 2\n"
         "output.stride = 10\n";
}

std::string perturbed_demo_config() {
  return "# perturbed horosphere y = 1 + 0.1 sin x in H^2\n"
         "grid.dimension = 1\n"
         "grid.points = 256\n"
         "grid.length = 2pi\n"
         "initial.family = sine\n"
         "initial.c = 1\n"
         "initial.a = 0.1\n"
         "initial.k = 1\n"
         "flow.t_end = 4\n"
         "output.stride = 1\n";
}

namespace {

struct Loaded {
  Trajectory trajectory;
  InitialStats stats;
};

Loaded load_run_dir(const fs::path& dir) {
  const GraphState initial = read_snapshot(dir / "initial.snap");
  Loaded l;
  l.trajectory.grid = initial.grid;
  l.trajectory.samples = parse_monitors_csv(read_text_file(dir / "monitors.csv"));
  l.stats = initial_stats(initial);
  return l;
}

int verify_dir(const fs::path& dir, std::ostream& out) {
  const Loaded l = load_run_dir(dir);
  const auto report = check(l.trajectory, l.stats, default_tolerance(l.trajectory.grid));
  out << certificates_text(report);
  return report.all_passed() ? ok : certificate_failure;
}

int fit_dir(const fs::path& dir, std::ostream& out) {
  const Loaded l = load_run_dir(dir);
  const auto rates = verify_rates(l.trajectory, l.stats);
  const std::string text = rates_text(rates);
  write_text_file(dir / "rates.txt", text);
  out << text;
  return ok;
}

}  // namespace

int run_simulation(const RunConfig& config, const fs::path& out_dir, const GraphState* initial_override,
                   std::ostream& log) {
  GraphState initial;
  if (initial_override) {
    initial = *initial_override;
    initial.t = 0.0;
  } else {
    initial = make_initial(config);
  }

  const Trajectory traj = evolve(initial, config.flow);
  log << "termination: " << to_string(traj.termination) << " after " << traj.steps << " steps";
  if (!traj.samples.empty()) log << ", t=" << traj.samples.back().t;
  log << '\n';
  if (!traj.diagnostic.empty()) log << "  " << traj.diagnostic << '\n';

  CertificateReport report;
  RateReport rates;
  try {
    const InitialStats stats = initial_stats(initial);
    report = check(traj, stats, default_tolerance(initial.grid));
    rates = verify_rates(traj, stats);
  } catch (const Error& e) {
    log << "certificates unavailable: " << e.what() << '\n';
    report = check(traj, InitialStats{}, default_tolerance(initial.grid));
  }
  write_outputs(traj, report, rates, out_dir, &initial);
  log << certificates_text(report);

  if (traj.termination != Termination::completed) return flow_breakdown;
  return report.all_passed() ? ok : certificate_failure;
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inverse mean curvature flow of graphs in hyperbolic upper half-space", "imcf"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "imcf-out", initial_path, dir;
  auto* run = app.add_subcommand("run", "integrate a configured flow and evaluate certificates");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--initial", initial_path, "start from a snapshot instead of the configured family");

  auto* verify = app.add_subcommand("verify", "re-evaluate certificates of a run directory");
  verify->add_option("dir", dir, "run directory")->required();

  auto* fit = app.add_subcommand("fit", "fit decay rates of a run directory into rates.txt");
  fit->add_option("dir", dir, "run directory")->required();

  std::string demo_dir = "imcf-demo";
  auto* demo = app.add_subcommand("demo", "run the built-in horosphere and perturbed-horosphere cases");
  demo->add_option("--out", demo_dir, "output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << app.help();
    return config_error;
  }

  try {
    if (run->parsed()) {
      const RunConfig cfg = load_config(config_path);
      if (initial_path.empty()) return run_simulation(cfg, out_dir, nullptr, out);
      const GraphState snap = read_snapshot(initial_path);
      return run_simulation(cfg, out_dir, &snap, out);
    }
    if (verify->parsed()) return verify_dir(dir, out);
    if (fit->parsed()) return fit_dir(dir, out);
    if (demo->parsed()) {
      int worst = ok;
      const std::pair<const char*, std::string> cases[] = {{"horosphere", horosphere_demo_config()},
                                                           {"perturbed", perturbed_demo_config()}};
      for (const auto& [name, text] : cases) {
        out << "== " << name << " ==\n";
        const int code = run_simulation(parse_config(text), fs::path(demo_dir) / name, nullptr, out);
        fit_dir(fs::path(demo_dir) / name, out);
        worst = std::max(worst, code);
      }
      return worst;
    }
  } catch (const ParseError& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const ValidationError& e) {
    err << e.what() << '\n';
    return config_error;
  } catch (const InadmissibleInitialData& e) {
    err << e.what() << '\n';
    return config_error;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return config_error;
  }
  return ok;
}

}  // namespace imcf::cli
