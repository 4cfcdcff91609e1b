#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "imcf/cli.hpp"
#include "imcf/errors.hpp"
#include "imcf/geometry.hpp"
#include "imcf/io.hpp"
#include "test_helpers.hpp"

using namespace imcf;
using namespace imcf::test;
namespace fs = std::filesystem;

namespace {

const char* kMinimal =
    "grid.dimension = 1\n"
    "grid.points = 64\n"
    "grid.length = 2pi\n"
    "initial.family = sine\n"
    "initial.c = 1\n"
    "initial.a = 0.1\n"
    "flow.t_end = 0.5\n";

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) : path(fs::temp_directory_path() / ("imcf_test_" + tag)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli::main(args, out, err);
  if (out_text) *out_text = out.str() + err.str();
  return code;
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
  const auto cfg = parse_config(kMinimal);
  CHECK(cfg.grid.n == 1);
  CHECK(cfg.grid.points_per_axis == 64);
  CHECK(cfg.grid.length == doctest::Approx(2.0 * kPi).epsilon(1e-15));
  CHECK(cfg.initial.family == InitialFamily::sine);
  CHECK(cfg.initial.seed == 0);
  CHECK(cfg.flow.scheme == Scheme::rk4);
  CHECK(cfg.flow.safety == 0.25);
  CHECK(cfg.flow.sample_stride == 10);
  CHECK(cfg.flow.t_end == 0.5);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "flow.safety = 1.5\n"), ValidationError);
  try {
    parse_config(std::string("flow.t_end = 1\n") + kMinimal);
    FAIL("duplicate accepted");
  } catch (const ParseError& e) {
    CHECK(e.line == 8);
  }
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "grid.colour = red\n"), ParseError);
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "flow.safety\n"), ParseError);
  CHECK_THROWS_AS(parse_config("grid.dimension = 1\n"), ValidationError);
  try {
    parse_config("grid.dimension = 3\ngrid.points = 2\ngrid.length = -1\ninitial.family = sine\ninitial.c = 1\nflow.t_end = 1\n");
    FAIL("invalid accepted");
  } catch (const ValidationError& e) {
    CHECK(e.violations.size() >= 3);
  }
}

TEST_CASE("comments and whitespace are ignored") {
  const auto cfg = parse_config(std::string("# header\n\n") + kMinimal + "flow.scheme = euler   # diagnostics\n");
  CHECK(cfg.flow.scheme == Scheme::euler);
}

TEST_CASE("sine initial data is admissible with H near one") {
  const auto s = make_initial(parse_config(kMinimal));
  const auto geo = geometry(s);
  double lo = 1e300, hi = -1e300;
  for (const auto& p : geo.points) {
    lo = std::min(lo, p.H);
    hi = std::max(hi, p.H);
  }
  CHECK(lo == doctest::Approx(0.89).epsilon(1e-3));
  CHECK(hi == doctest::Approx(1.09).epsilon(1e-3));
}

TEST_CASE("inadmissible initial data is rejected") {
  for (const char* a : {"1", "1.5"}) {
    auto cfg = parse_config(std::string(kMinimal) + "");
    cfg.initial.a = std::stod(a);
    CHECK_THROWS_AS(make_initial(cfg), InadmissibleInitialData);
  }
  auto cfg = parse_config(kMinimal);
  cfg.initial.a = 0.8;  // positive heights, negative mean curvature at the crest
  CHECK_THROWS_AS(make_initial(cfg), InadmissibleInitialData);
}

TEST_CASE("other families construct admissible states") {
  auto cfg = parse_config(kMinimal);
  cfg.grid = grid2(32);
  cfg.initial.a = 0.05;
  for (auto family : {InitialFamily::constant, InitialFamily::sine, InitialFamily::gaussian_bump,
                      InitialFamily::band_limited_random}) {
    cfg.initial.family = family;
    const auto s = make_initial(cfg);
    CHECK(s.y.size() == 32u * 32u);
    for (double y : s.y) CHECK(y > 0.0);
  }
}

TEST_CASE("random initial data is deterministic in the seed") {
  auto cfg = parse_config(kMinimal);
  cfg.initial.family = InitialFamily::band_limited_random;
  cfg.initial.seed = 42;
  const auto a = make_initial(cfg), b = make_initial(cfg);
  CHECK(a.y == b.y);
  cfg.initial.seed = 43;
  CHECK(make_initial(cfg).y != a.y);
}

TEST_CASE("snapshot roundtrip is bit-exact") {
  TempDir dir("snap");
  std::mt19937_64 rng(7);
  for (const Grid& g : {grid1(33), grid2(16, 3.7)}) {
    auto s = random_state(g, rng);
    s.t = 0.1 + 1.0 / 3.0;
    const auto path = dir.path / "s.snap";
    write_snapshot(s, path);
    const auto back = read_snapshot(path);
    CHECK(back.grid == s.grid);
    CHECK(back.t == s.t);
    CHECK(back.y == s.y);
  }
}

TEST_CASE("malformed snapshots are rejected") {
  TempDir dir("badsnap");
  const auto path = dir.path / "s.snap";
  write_snapshot(sine_state(grid1(16), 1.0, 0.1), path);
  const auto bytes = read_text_file(path);
  write_text_file(path, bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_AS(read_snapshot(path), FormatError);
  write_text_file(path, bytes + "x");
  CHECK_THROWS_AS(read_snapshot(path), FormatError);
  write_text_file(path, "IMCF-SNAP 2" + bytes.substr(11));
  CHECK_THROWS_AS(read_snapshot(path), FormatError);
  CHECK_THROWS_AS(read_snapshot(dir.path / "missing.snap"), IoError);
}

TEST_CASE("monitors csv roundtrip and horosphere first row") {
  FlowConfig c;
  c.t_end = 0.2;
  c.sample_stride = 3;
  const auto traj = evolve(constant_state(grid2(16), 1.0), c);
  const auto text = monitors_csv(traj.samples);
  CHECK(text.rfind("t,y_inf,y_sup,v_sup,w_inf,H_inf,H_sup,grad_sup2,hess_sup,G_sup,P_max_sup\n", 0) == 0);
  const auto back = parse_monitors_csv(text);
  REQUIRE(back.size() == traj.samples.size());
  CHECK(back[0].y_inf == 1.0);
  CHECK(back[0].y_sup == 1.0);
  CHECK(back[0].H_inf == 2.0);
  CHECK(back[0].H_sup == 2.0);
  for (std::size_t k = 0; k < back.size(); ++k)
    for (const auto& name : monitor_names()) CHECK(monitor_value(back[k], name) == monitor_value(traj.samples[k], name));
  CHECK_THROWS_AS(parse_monitors_csv("t,y\n1,2\n"), FormatError);
}

TEST_CASE("format_double is lossless") {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0})
    CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("cli run, verify and fit") {
  TempDir dir("cli");
  const auto cfg = dir.path / "run.cfg";
  write_text_file(cfg, kMinimal);
  const auto out = dir.path / "out";
  CHECK(run_cli({"run", cfg.string(), "--out", out.string()}) == cli::ok);
  for (const char* f : {"monitors.csv", "certificates.txt", "rates.txt", "initial.snap"}) CHECK(fs::exists(out / f));
  const auto certs = read_text_file(out / "certificates.txt");
  CHECK(certs.find("y_barriers PASS worst_margin=") != std::string::npos);
  CHECK(certs.find("FAIL") == std::string::npos);
  CHECK(run_cli({"verify", out.string()}) == cli::ok);
  CHECK(run_cli({"fit", out.string()}) == cli::ok);

  // Tamper with the monitors so that heights stop decaying.
  auto samples = parse_monitors_csv(read_text_file(out / "monitors.csv"));
  for (auto& m : samples) m.y_sup = samples.front().y_sup;
  write_text_file(out / "monitors.csv", monitors_csv(samples));
  CHECK(run_cli({"verify", out.string()}) == cli::certificate_failure);
}

TEST_CASE("cli exit codes for bad input and breakdown") {
  TempDir dir("cli_err");
  const auto cfg = dir.path / "run.cfg";
  write_text_file(cfg, std::string(kMinimal) + "flow.safety = 1.5\n");
  CHECK(run_cli({"run", cfg.string(), "--out", (dir.path / "o").string()}) == cli::config_error);
  CHECK(run_cli({"run", (dir.path / "missing.cfg").string(), "--out", (dir.path / "o").string()}) == cli::config_error);
  CHECK(run_cli({"frobnicate"}) == cli::config_error);

  write_text_file(cfg, kMinimal);
  const auto snap = dir.path / "bad.snap";
  write_snapshot(sine_state(grid1(64), 1.0, 0.8), snap);
  std::string text;
  CHECK(run_cli({"run", cfg.string(), "--out", (dir.path / "o").string(), "--initial", snap.string()}, &text) ==
        cli::flow_breakdown);
  CHECK(text.find("lost_mean_convexity") != std::string::npos);
}
