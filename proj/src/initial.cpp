#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "imcf/errors.hpp"
#include "imcf/geometry.hpp"
#include "imcf/io.hpp"

namespace imcf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Mode {
  std::array<int, 2> k{};
  double phase = 0.0;
  double amplitude = 0.0;
};

// Uniform in [0, 1) from the top 53 bits, independent of the standard library's
// distribution implementations.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<Mode> random_modes(int n, double budget, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Mode> modes(5);
  double total = 0.0;
  for (auto& m : modes) {
    for (int d = 0; d < n; ++d) m.k[d] = static_cast<int>(rng() % 4);
    if (m.k[0] == 0 && m.k[1] == 0) m.k[0] = 1;
    m.phase = kTwoPi * unit(rng);
    m.amplitude = 0.5 + 0.5 * unit(rng);
    total += m.amplitude;
  }
  for (auto& m : modes) m.amplitude *= budget / total;
  return modes;
}

double periodic_gaussian(const Vec2& x, const Vec2& center, double sigma, double L, int n) {
  double sum = 0.0;
  for (int m0 = -2; m0 <= 2; ++m0) {
    for (int m1 = (n == 2 ? -2 : 0); m1 <= (n == 2 ? 2 : 0); ++m1) {
      const double d0 = x[0] - center[0] - m0 * L;
      const double d1 = n == 2 ? x[1] - center[1] - m1 * L : 0.0;
      sum += std::exp(-(d0 * d0 + d1 * d1) / (sigma * sigma));
    }
  }
  return sum;
}

}  // namespace

GraphState make_initial(const RunConfig& config) {
  const Grid& grid = config.grid;
  grid.validate();
  const InitialConfig& ic = config.initial;
  const int n = grid.n;
  const double L = grid.length;

  GraphState state;
  double lower_bound = ic.c;  // analytic lower bound of y over the whole torus
  switch (ic.family) {
    case InitialFamily::constant:
      state = sample_state(grid, 0.0, [&](const Vec2&) { return ic.c; });
      break;
    case InitialFamily::sine: {
      std::vector<double> k = ic.k.empty() ? std::vector<double>(n, 1.0) : ic.k;
      int active = 0;
      for (int d = 0; d < n; ++d) active += k[d] != 0.0;
      lower_bound = ic.c - std::abs(ic.a) * active;
      state = sample_state(grid, 0.0, [&](const Vec2& x) {
        double s = 0.0;
        for (int d = 0; d < n; ++d) s += std::sin(kTwoPi * k[d] * x[d] / L);
        return ic.c + ic.a * s;
      });
      break;
    }
    case InitialFamily::gaussian_bump: {
      const double sigma = ic.sigma > 0.0 ? ic.sigma : L / 8.0;
      Vec2 center{0.5 * L, n == 2 ? 0.5 * L : 0.0};
      for (std::size_t d = 0; d < ic.center.size() && d < 2; ++d) center[d] = ic.center[d];
      if (ic.a < 0.0) lower_bound = ic.c + ic.a * periodic_gaussian(center, center, sigma, L, n);
      state = sample_state(grid, 0.0, [&](const Vec2& x) {
        return ic.c + ic.a * periodic_gaussian(x, center, sigma, L, n);
      });
      break;
    }
    case InitialFamily::band_limited_random: {
      const auto modes = random_modes(n, std::abs(ic.a), ic.seed);
      lower_bound = ic.c - std::abs(ic.a);
      state = sample_state(grid, 0.0, [&](const Vec2& x) {
        double s = ic.c;
        for (const auto& m : modes) {
          double arg = m.phase;
          for (int d = 0; d < n; ++d) arg += kTwoPi * m.k[d] * x[d] / L;
          s += m.amplitude * std::cos(arg);
        }
        return s;
      });
      break;
    }
  }

  const auto argmin = static_cast<std::size_t>(
      std::distance(state.y.begin(), std::min_element(state.y.begin(), state.y.end())));
  if (!(lower_bound > 0.0)) {
    std::ostringstream os;
    os << "y <= 0 somewhere on the torus (analytic lower bound " << lower_bound << ")";
    throw InadmissibleInitialData(os.str(), argmin);
  }
  for (std::size_t k = 0; k < state.y.size(); ++k)
    if (!(state.y[k] > 0.0) || !std::isfinite(state.y[k])) throw InadmissibleInitialData("y <= 0", k);

  const GeometryFields geo = geometry(state);
  for (std::size_t k = 0; k < geo.points.size(); ++k) {
    if (!(geo.points[k].H > 0.0)) {
      std::ostringstream os;
      os << "H <= 0 (H = " << geo.points[k].H << ")";
      throw InadmissibleInitialData(os.str(), k);
    }
  }
  return state;
}

}  // namespace imcf
