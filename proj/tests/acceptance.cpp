// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
// Usage: imcf_acceptance <path-to-imcf-binary>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "imcf/certificates.hpp"
#include "imcf/decay.hpp"
#include "imcf/errors.hpp"
#include "imcf/flow.hpp"
#include "imcf/geometry.hpp"
#include "imcf/io.hpp"

using namespace imcf;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

GraphState perturbed(int N) {
  return sample_state(Grid{1, N, 2.0 * kPi}, 0.0, [](const Vec2& x) { return 1.0 + 0.1 * std::sin(x[0]); });
}

Trajectory run(const GraphState& s, double t_end, int stride = 1) {
  FlowConfig c;
  c.t_end = t_end;
  c.sample_stride = stride;
  return evolve(s, c);
}

// Shared long runs, computed once.
const Trajectory& run3() {
  static const Trajectory t = run(perturbed(256), 3.0);
  return t;
}
const Trajectory& run4() {
  static const Trajectory t = run(perturbed(256), 4.0);
  return t;
}

double order(double coarse, double fine) { return std::log2(coarse / fine); }

Outcome horosphere_exactness() {
  const auto start = std::chrono::steady_clock::now();
  const auto traj = run(sample_state(Grid{2, 64, 2.0 * kPi}, 0.0, [](const Vec2&) { return 1.0; }), 2.0);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  double err = 0.0;
  for (const auto& m : traj.samples) err = std::max(err, std::abs(m.y_sup - std::exp(-m.t / 2.0)));
  const bool ok = traj.termination == Termination::completed && traj.samples.back().t == 2.0 && err <= 1e-8 &&
                  secs < 10.0;
  return {ok, "max|y_sup - e^{-t/2}| = " + fmt(err) + ", runtime " + fmt(secs) + " s"};
}

Outcome geometry_order() {
  std::vector<double> errs;
  for (int N : {64, 128, 256}) {
    const auto geo = geometry(perturbed(N));
    double sup = 0.0;
    for (std::size_t i = 0; i < geo.points.size(); ++i) {
      const double x = geo.grid.position(i)[0];
      const double y = 1.0 + 0.1 * std::sin(x), y1 = 0.1 * std::cos(x), y2 = -0.1 * std::sin(x);
      const double v2 = 1.0 + y1 * y1;
      const double H = (1.0 + y * y2 / v2) / std::sqrt(v2);
      sup = std::max(sup, std::abs(geo.points[i].H - H));
    }
    errs.push_back(sup);
  }
  const double o1 = order(errs[0], errs[1]), o2 = order(errs[1], errs[2]);
  return {std::min(o1, o2) >= 1.9, "errors " + fmt(errs[0]) + ", " + fmt(errs[1]) + ", " + fmt(errs[2]) +
                                       "; orders " + fmt(o1) + ", " + fmt(o2)};
}

Outcome geodesic_null() {
  std::vector<double> sups, hs;
  for (int m : {64, 128, 256}) {
    const double h = 1.0 / m;
    std::vector<double> y;
    for (int i = 0; i <= m; ++i) {
      const double x = -0.5 + i * h;
      y.push_back(std::sqrt(1.0 - x * x));
    }
    double sup = 0.0;
    for (const auto& p : geometry_interior_1d(y, h)) sup = std::max(sup, std::abs(p.H));
    sups.push_back(sup);
    hs.push_back(h);
  }
  const double K = sups[0] / (hs[0] * hs[0]);
  bool ok = true;
  for (std::size_t i = 0; i < sups.size(); ++i) ok = ok && sups[i] <= 5.0 * hs[i] * hs[i] * K;
  const double o1 = order(sups[0], sups[1]), o2 = order(sups[1], sups[2]);
  ok = ok && std::min(o1, o2) >= 1.9;
  return {ok, "sup|H| " + fmt(sups[0]) + ", " + fmt(sups[1]) + ", " + fmt(sups[2]) + "; K = " + fmt(K) +
                  "; orders " + fmt(o1) + ", " + fmt(o2)};
}

Outcome barrier_certificates() {
  const auto& traj = run3();
  const auto report = check(traj, initial_stats(perturbed(256)), default_tolerance(traj.grid));
  bool ok = traj.termination == Termination::completed;
  std::string detail;
  for (const char* name : {"y_barriers", "w_lower", "v_upper", "H_upper", "H_lower"}) {
    const auto& r = report.at(name);
    ok = ok && r.passed;
    detail += std::string(detail.empty() ? "" : ", ") + name + " " + (r.passed ? "ok" : "FAIL") + " (" +
              fmt(r.worst_margin) + ")";
  }
  return {ok, detail};
}

Outcome ode_comparison() {
  const auto& traj = run3();
  const double tol = default_tolerance(traj.grid);
  std::vector<double> t;
  for (const auto& m : traj.samples) t.push_back(m.t);
  const auto rhs = [](int n) { return [n](double p) { return (n * n - p * p) / (n * p); }; };
  const auto phi = ode_compare(rhs(1), traj.samples.front().H_sup, t);
  double margin = 1e300;
  for (std::size_t k = 0; k < t.size(); ++k) margin = std::min(margin, phi[k] + tol - traj.samples[k].H_sup);

  const std::vector<double> grid{0.0, 1.0, 2.0, 3.0, 4.0, 5.0};
  const double phi5 = ode_compare(rhs(2), 3.0, grid).back();
  const double exact = std::sqrt(4.0 + 5.0 * std::exp(-5.0));
  const bool ok = margin >= 0.0 && std::abs(phi5 - exact) <= 1e-6;
  return {ok, "min(phi + tol - H_sup) = " + fmt(margin) + "; phi(5) = " + fmt(phi5) + " vs " + fmt(exact)};
}

Outcome decay_rates() {
  const auto& traj = run4();
  const auto grad = extract_series(traj, "grad_sup2");
  const auto G = extract_series(traj, "G_sup");
  bool ok = traj.termination == Termination::completed;
  try {
    const auto fg = fit_rate(grad), fG = fit_rate(G);
    ok = ok && fg.rate >= 1.6 && fg.rate <= 2.4 && fg.r_squared >= 0.98;
    ok = ok && fG.rate >= 3.2 && fG.rate <= 4.8 && fG.r_squared >= 0.98;
    ok = ok && fG.rate >= 0.9 * fg.rate;
    std::string robust;
    for (double wf : {0.5, 0.75}) {
      const auto f = fit_rate(grad, wf);
      ok = ok && f.rate >= 1.6 && f.rate <= 2.4;
      robust += " " + fmt(f.rate);
    }
    return {ok, "grad_sup2 rate " + fmt(fg.rate) + " (r2 " + fmt(fg.r_squared) + "), G_sup rate " + fmt(fG.rate) +
                    " (r2 " + fmt(fG.r_squared) + "), later windows grad:" + robust};
  } catch (const Error& e) {
    return {false, e.what()};
  }
}

double w_residual(int N, double tau) {
  FlowConfig c;
  c.t_end = 0.2 + tau;
  c.sample_stride = 1000;
  c.snapshot_times = {0.2 - tau, 0.2, 0.2 + tau};
  return evolution_residual(evolve(perturbed(N), c), EvolvedQuantity::w).at(0).sup_residual;
}

Outcome evolution_residuals() {
  const double coarse = w_residual(64, 0.01), fine = w_residual(128, 0.005);
  Trajectory fake;
  fake.grid = Grid{1, 64, 2.0 * kPi};
  for (int k = 0; k < 3; ++k) {
    auto s = perturbed(64);
    s.t = 0.01 * k;
    fake.snapshots.push_back(s);
  }
  const double control = evolution_residual(fake, EvolvedQuantity::w).at(0).sup_residual;
  const bool ok = coarse / fine >= 3.0 && control > 0.1;
  return {ok, "residuals " + fmt(coarse) + " -> " + fmt(fine) + " (factor " + fmt(coarse / fine) +
                  "); static control " + fmt(control)};
}

Outcome p_boundedness() {
  const auto& traj = run3();
  const auto stats = initial_stats(perturbed(256));
  double inf_Hw = 1e300, sup_P = 0.0;
  for (const auto& m : traj.samples) {
    inf_Hw = std::min(inf_Hw, m.H_inf * m.w_inf);
    sup_P = std::max(sup_P, m.P_max_sup);
  }
  const double c0 = (stats.n + 8.0 * stats.D * stats.D) / (2.0 * inf_Hw);
  const double bound = std::max(stats.P_max0, c0) * 1.1;
  return {sup_P <= bound, "sup P_max = " + fmt(sup_P) + ", bound = " + fmt(bound)};
}

bool equal_y(const GraphState& a, const GraphState& b) { return a.grid == b.grid && a.t == b.t && a.y == b.y; }

Outcome invariance(const fs::path& dir) {
  // Scaling (x, y) -> 2 (x, y) is an isometry: H must not change.
  const Grid g{2, 48, 2.0 * kPi}, g2{2, 48, 4.0 * kPi};
  auto f = [](const Vec2& x) { return 1.0 + 0.1 * std::sin(x[0]) * std::cos(2.0 * x[1]); };
  const auto a = geometry(sample_state(g, 0.0, f));
  const auto b = geometry(sample_state(g2, 0.0, [&](const Vec2& x) { return 2.0 * f({x[0] / 2.0, x[1] / 2.0}); }));
  double scale_err = 0.0;
  for (std::size_t i = 0; i < a.points.size(); ++i)
    scale_err = std::max(scale_err, std::abs(a.points[i].H - b.points[i].H) / std::abs(a.points[i].H));

  // Even data stays even.
  FlowConfig c;
  c.t_end = 0.5;
  c.snapshot_times = {0.5};
  const auto even_initial = sample_state(Grid{1, 128, 2.0 * kPi}, 0.0, [](const Vec2& x) {
    return 1.0 + 0.1 * std::cos(x[0]) + 0.03 * std::cos(3.0 * x[0]);
  });
  const auto even = evolve(even_initial, c);
  double even_err = 0.0;
  const auto& ys = even.snapshots.at(0).y;
  for (int i = 0; i < 128; ++i) even_err = std::max(even_err, std::abs(ys[i] - ys[(128 - i) % 128]));

  // Snapshot roundtrip and repeated runs.
  const auto path = dir / "roundtrip.snap";
  write_snapshot(even.snapshots[0], path);
  const bool roundtrip = equal_y(read_snapshot(path), even.snapshots[0]);
  const auto again = evolve(even_initial, c);
  const bool repeat = monitors_csv(again.samples) == monitors_csv(even.samples) && equal_y(again.snapshots[0], even.snapshots[0]);

  const bool ok = scale_err <= 1e-12 && even_err <= 1e-12 && roundtrip && repeat;
  return {ok, "scaling " + fmt(scale_err) + ", evenness " + fmt(even_err) + ", roundtrip " +
                  (roundtrip ? "exact" : "differs") + ", repeat " + (repeat ? "identical" : "differs")};
}

int shell(const std::string& cmd) {
  const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome negative_controls(const fs::path& dir, const std::string& binary) {
  // Fabricated non-decaying heights.
  auto traj = run(perturbed(64), 1.0);
  for (auto& m : traj.samples) m.y_sup = traj.samples.front().y_sup;
  const bool fabricated = !check(traj, initial_stats(perturbed(64)), default_tolerance(traj.grid)).at("y_barriers").passed;

  // Inadmissible sine.
  const std::string base =
      "grid.dimension = 1\ngrid.points = 64\ngrid.length = 2pi\ninitial.family = sine\ninitial.c = 1\nflow.t_end = 1\n";
  write_text_file(dir / "bad.cfg", base + "initial.a = 1\n");
  const int rejected = shell("'" + binary + "' run '" + (dir / "bad.cfg").string() + "' --out '" + (dir / "bad").string() + "'");

  // H <= 0 somewhere: y = 1 + 0.8 sin x.
  write_text_file(dir / "ok.cfg", base + "initial.a = 0.1\n");
  write_snapshot(sample_state(Grid{1, 64, 2.0 * kPi}, 0.0, [](const Vec2& x) { return 1.0 + 0.8 * std::sin(x[0]); }),
                 dir / "concave.snap");
  const fs::path out = dir / "concave";
  const int breakdown = shell("'" + binary + "' run '" + (dir / "ok.cfg").string() + "' --out '" + out.string() +
                              "' --initial '" + (dir / "concave.snap").string() + "'");
  const auto direct = run(read_snapshot(dir / "concave.snap"), 1.0);

  const bool ok = fabricated && rejected == 2 && breakdown == 3 && direct.termination == Termination::lost_mean_convexity;
  return {ok, std::string("fabricated y_barriers ") + (fabricated ? "fails" : "passes") + ", a >= c exit " +
                  std::to_string(rejected) + ", H <= 0 exit " + std::to_string(breakdown) + " (" +
                  std::string(to_string(direct.termination)) + ")"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: imcf_acceptance <imcf-binary>\n";
    return 2;
  }
  const std::string binary = fs::absolute(argv[1]).string();
  const fs::path dir = fs::temp_directory_path() / "imcf_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"horosphere exactness", horosphere_exactness},
      {"geometry oracle order", geometry_order},
      {"geodesic null test", geodesic_null},
      {"barrier certificates", barrier_certificates},
      {"comparison ODE", ode_comparison},
      {"decay rates", decay_rates},
      {"evolution identity residual", evolution_residuals},
      {"P boundedness", p_boundedness},
      {"invariance suite", [&] { return invariance(dir); }},
      {"negative controls", [&] { return negative_controls(dir, binary); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  fs::remove_all(dir);
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}
