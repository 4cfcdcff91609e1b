#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "imcf/errors.hpp"
#include "imcf/io.hpp"

namespace imcf {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Accepts plain numbers and multiples of pi: `pi`, `2pi`, `2*pi`.
double parse_real(std::string_view text, int line) {
  std::string_view s = trim(text);
  double factor = 1.0;
  if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
    factor = std::numbers::pi;
    s = trim(s.substr(0, s.size() - 2));
    if (!s.empty() && s.back() == '*') s = trim(s.substr(0, s.size() - 1));
    if (s.empty()) return factor;
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(line, "expected a number, got '" + std::string(text) + "'");
  return v * factor;
}

long long parse_integer(std::string_view text, int line) {
  const std::string_view s = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(line, "expected an integer, got '" + std::string(text) + "'");
  return v;
}

std::vector<double> parse_list(std::string_view text, int line) {
  std::vector<double> out;
  std::string_view rest = trim(text);
  if (rest.empty()) return out;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(parse_real(rest.substr(0, comma), line));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

const std::vector<std::string_view> kKeys = {
    "grid.dimension", "grid.points",     "grid.length",   "initial.family",   "initial.c",
    "initial.a",      "initial.k",       "initial.sigma", "initial.center",   "initial.seed",
    "flow.scheme",    "flow.safety",     "flow.t_end",    "flow.max_steps",   "flow.sample_stride",
    "output.stride",  "output.directory", "output.snapshot_times"};

}  // namespace

RunConfig parse_config(std::string_view text) {
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, Entry, std::less<>> entries;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'section.key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
      throw ParseError(line_no, "unknown key '" + key + "'");
    if (value.empty()) throw ParseError(line_no, "missing value for '" + key + "'");
    if (const auto it = entries.find(key); it != entries.end())
      throw ParseError(line_no, "duplicate key '" + key + "' (first set on line " +
                                    std::to_string(it->second.line) + ")");
    entries.emplace(key, Entry{value, line_no});
  }

  RunConfig cfg;
  std::vector<std::string> violations;
  auto has = [&](std::string_view k) { return entries.find(k) != entries.end(); };
  auto real = [&](std::string_view k) { const auto& e = entries.find(k)->second; return parse_real(e.value, e.line); };
  auto integer = [&](std::string_view k) { const auto& e = entries.find(k)->second; return parse_integer(e.value, e.line); };
  auto list = [&](std::string_view k) { const auto& e = entries.find(k)->second; return parse_list(e.value, e.line); };

  for (std::string_view k : {"grid.dimension", "grid.points", "grid.length", "initial.family", "flow.t_end"})
    if (!has(k)) violations.push_back("missing required key '" + std::string(k) + "'");

  if (has("grid.dimension")) cfg.grid.n = static_cast<int>(integer("grid.dimension"));
  if (has("grid.points")) cfg.grid.points_per_axis = static_cast<int>(integer("grid.points"));
  if (has("grid.length")) cfg.grid.length = real("grid.length");
  if (has("grid.dimension") && cfg.grid.n != 1 && cfg.grid.n != 2) violations.push_back("grid.dimension must be 1 or 2");
  if (has("grid.points") && cfg.grid.points_per_axis < 8) violations.push_back("grid.points must be >= 8");
  if (has("grid.length") && !(cfg.grid.length > 0.0 && std::isfinite(cfg.grid.length)))
    violations.push_back("grid.length must be positive and finite");

  auto& init = cfg.initial;
  if (has("initial.family")) {
    const auto& e = entries.find("initial.family")->second;
    if (e.value == "constant") init.family = InitialFamily::constant;
    else if (e.value == "sine") init.family = InitialFamily::sine;
    else if (e.value == "gaussian_bump") init.family = InitialFamily::gaussian_bump;
    else if (e.value == "band_limited_random") init.family = InitialFamily::band_limited_random;
    else throw ParseError(e.line, "unknown initial.family '" + e.value + "'");
  }
  if (has("initial.c")) init.c = real("initial.c");
  if (has("initial.a")) init.a = real("initial.a");
  if (has("initial.k")) init.k = list("initial.k");
  if (has("initial.sigma")) init.sigma = real("initial.sigma");
  if (has("initial.center")) init.center = list("initial.center");
  if (has("initial.seed")) {
    const long long s = integer("initial.seed");
    if (s < 0) violations.push_back("initial.seed must be unsigned");
    init.seed = static_cast<std::uint64_t>(std::max(0LL, s));
  }
  if (!(init.c > 0.0 && std::isfinite(init.c))) violations.push_back("initial.c must be positive");
  if (!std::isfinite(init.a)) violations.push_back("initial.a must be finite");
  if (!init.k.empty() && static_cast<int>(init.k.size()) != cfg.grid.n)
    violations.push_back("initial.k needs one wave number per axis");
  if (!init.center.empty() && static_cast<int>(init.center.size()) != cfg.grid.n)
    violations.push_back("initial.center needs one coordinate per axis");
  if (has("initial.sigma") && !(init.sigma > 0.0)) violations.push_back("initial.sigma must be positive");

  auto& flow = cfg.flow;
  flow.sample_stride = 10;
  if (has("flow.scheme")) {
    const auto& e = entries.find("flow.scheme")->second;
    if (e.value == "rk4") flow.scheme = Scheme::rk4;
    else if (e.value == "euler") flow.scheme = Scheme::euler;
    else throw ParseError(e.line, "unknown flow.scheme '" + e.value + "'");
  }
  if (has("flow.safety")) flow.safety = real("flow.safety");
  if (has("flow.t_end")) flow.t_end = real("flow.t_end");
  if (has("flow.max_steps")) flow.max_steps = static_cast<long>(integer("flow.max_steps"));
  if (has("output.stride")) flow.sample_stride = static_cast<int>(integer("output.stride"));
  if (has("flow.sample_stride")) {
    const int s = static_cast<int>(integer("flow.sample_stride"));
    if (has("output.stride") && s != flow.sample_stride)
      violations.push_back("flow.sample_stride conflicts with output.stride");
    flow.sample_stride = s;
  }
  if (!(flow.safety > 0.0 && flow.safety <= 1.0)) violations.push_back("flow.safety must lie in (0, 1]");
  if (has("flow.t_end") && !(flow.t_end >= 0.0 && std::isfinite(flow.t_end)))
    violations.push_back("flow.t_end must be finite and >= 0");
  if (flow.max_steps < 1) violations.push_back("flow.max_steps must be positive");
  if (flow.sample_stride < 1) violations.push_back("output.stride must be positive");

  if (has("output.directory")) cfg.directory = entries.find("output.directory")->second.value;
  if (has("output.snapshot_times")) {
    flow.snapshot_times = list("output.snapshot_times");
    for (double s : flow.snapshot_times)
      if (!(s >= 0.0 && std::isfinite(s))) violations.push_back("snapshot times must be finite and >= 0");
  }

  if (!violations.empty()) throw ValidationError(std::move(violations));
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_text_file(path)); }

}  // namespace imcf
