#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "imcf/errors.hpp"
#include "imcf/io.hpp"

namespace imcf {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

namespace {

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
  }
  return v;
}

double parse_field(std::string_view token, std::string_view key) {
  if (token.substr(0, key.size()) != key || token.size() <= key.size() || token[key.size()] != '=')
    throw FormatError("snapshot header: expected '" + std::string(key) + "=...'");
  const std::string_view s = token.substr(key.size() + 1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw FormatError("snapshot header: bad value for " + std::string(key));
  return v;
}

}  // namespace

void write_snapshot(const GraphState& state, const fs::path& path) {
  std::ostringstream os;
  os << "IMCF-SNAP 1\n";
  os << "n=" << state.grid.n << " shape=" << state.grid.points_per_axis;
  if (state.grid.n == 2) os << ',' << state.grid.points_per_axis;
  os << " L=" << format_double(state.grid.length) << " t=" << format_double(state.t) << '\n';
  std::string data = os.str();
  const std::size_t header = data.size();
  data.resize(header + 8 * state.y.size());
  for (std::size_t i = 0; i < state.y.size(); ++i) {
    const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(state.y[i]));
    std::memcpy(data.data() + header + 8 * i, &bits, 8);
  }
  write_text_file(path, data);
}

GraphState read_snapshot(const fs::path& path) {
  const std::string data = read_text_file(path);
  const auto nl1 = data.find('\n');
  if (nl1 == std::string::npos || data.substr(0, nl1) != "IMCF-SNAP 1") throw FormatError("bad snapshot magic");
  const auto nl2 = data.find('\n', nl1 + 1);
  if (nl2 == std::string::npos) throw FormatError("truncated snapshot header");

  std::istringstream header(data.substr(nl1 + 1, nl2 - nl1 - 1));
  std::string tn, tshape, tl, tt, extra;
  if (!(header >> tn >> tshape >> tl >> tt) || (header >> extra)) throw FormatError("malformed snapshot header");

  GraphState s;
  const double n = parse_field(tn, "n");
  if (n != 1.0 && n != 2.0) throw FormatError("snapshot dimension must be 1 or 2");
  s.grid.n = static_cast<int>(n);
  if (tshape.substr(0, 6) != "shape=") throw FormatError("snapshot header: expected 'shape=...'");
  std::vector<int> shape;
  std::string_view rest = std::string_view(tshape).substr(6);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view part = rest.substr(0, comma);
    int p = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), p);
    if (ec != std::errc() || ptr != part.data() + part.size()) throw FormatError("bad snapshot shape");
    shape.push_back(p);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  if (static_cast<int>(shape.size()) != s.grid.n) throw FormatError("snapshot shape does not match n");
  if (s.grid.n == 2 && shape[0] != shape[1]) throw FormatError("snapshot grid must be square");
  s.grid.points_per_axis = shape[0];
  s.grid.length = parse_field(tl, "L");
  s.t = parse_field(tt, "t");
  try {
    s.grid.validate();
  } catch (const InvalidConfig& e) {
    throw FormatError(std::string("snapshot grid: ") + e.what());
  }

  const std::size_t count = s.grid.size();
  const std::size_t payload = data.size() - (nl2 + 1);
  if (payload != 8 * count)
    throw FormatError("snapshot payload holds " + std::to_string(payload) + " bytes, expected " +
                      std::to_string(8 * count));
  s.y.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, data.data() + nl2 + 1 + 8 * i, 8);
    s.y[i] = std::bit_cast<double>(to_little_endian(bits));
  }
  return s;
}

std::string monitors_csv(const std::vector<MonitorSample>& samples) {
  std::string out = "t";
  for (const auto& name : monitor_names()) out += "," + name;
  out += '\n';
  for (const auto& s : samples) {
    out += format_double(s.t);
    for (const auto& name : monitor_names()) out += "," + format_double(monitor_value(s, name));
    out += '\n';
  }
  return out;
}

std::vector<MonitorSample> parse_monitors_csv(std::string_view text) {
  std::string expected = "t";
  for (const auto& name : monitor_names()) expected += "," + name;

  std::vector<MonitorSample> out;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != expected) throw FormatError("monitors.csv: unexpected header");
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<double> vals;
    std::string_view rest = line;
    while (true) {
      const auto comma = rest.find(',');
      const std::string_view cell = rest.substr(0, comma);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw FormatError("monitors.csv row " + std::to_string(row) + ": bad number");
      vals.push_back(v);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (vals.size() != 11) throw FormatError("monitors.csv row " + std::to_string(row) + ": expected 11 columns");
    MonitorSample s;
    s.t = vals[0];
    s.y_inf = vals[1];
    s.y_sup = vals[2];
    s.v_sup = vals[3];
    s.w_inf = vals[4];
    s.H_inf = vals[5];
    s.H_sup = vals[6];
    s.grad_sup2 = vals[7];
    s.hess_sup = vals[8];
    s.G_sup = vals[9];
    s.P_max_sup = vals[10];
    out.push_back(s);
  }
  return out;
}

std::string certificates_text(const CertificateReport& report) {
  std::string out;
  for (const auto& r : report.results) {
    out += r.name + (r.passed ? " PASS" : " FAIL") + " worst_margin=" + format_double(r.worst_margin) +
           " at_t=" + format_double(r.at_t) + '\n';
  }
  return out;
}

std::string rates_text(const RateReport& report) {
  std::string out;
  for (const auto& c : report.checks) {
    out += c.label + ' ' + std::string(to_string(c.status));
    if (c.target_rate) out += " target=" + format_double(*c.target_rate);
    if (c.fit) {
      const auto& f = *c.fit;
      out += " rate=" + format_double(f.rate) + " amplitude=" + format_double(f.amplitude) +
             " r_squared=" + format_double(f.r_squared) + " window=[" + format_double(f.t_start) + "," +
             format_double(f.t_end) + "] n_points=" + std::to_string(f.n_points);
      if (c.target_rate) out += " deviation=" + format_double(c.deviation);
    }
    out += " rule=\"" + c.criterion + "\"\n";
  }
  return out;
}

void write_outputs(const Trajectory& trajectory, const CertificateReport& report, const RateReport& fits,
                   const fs::path& directory, const GraphState* initial) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw IoError("cannot create " + directory.string() + ": " + ec.message());
  write_text_file(directory / "monitors.csv", monitors_csv(trajectory.samples));
  write_text_file(directory / "certificates.txt", certificates_text(report));
  write_text_file(directory / "rates.txt", rates_text(fits));
  if (initial) write_snapshot(*initial, directory / "initial.snap");
  for (std::size_t k = 0; k < trajectory.snapshots.size(); ++k)
    write_snapshot(trajectory.snapshots[k], directory / ("snap_" + std::to_string(k) + ".snap"));
}

}  // namespace imcf
