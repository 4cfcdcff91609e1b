#include <cmath>
#include <stdexcept>

#include "imcf/errors.hpp"
#include "imcf/flow.hpp"

namespace imcf {

std::vector<Vec2> tangential_velocity(const GraphState& state) {
  const GeometryFields geo = geometry(state);
  std::vector<Vec2> vel(geo.points.size());
  for (std::size_t k = 0; k < vel.size(); ++k) {
    const auto& p = geo.points[k];
    if (!(p.H > 0.0)) throw LostMeanConvexity({k, 0}, p.H * p.v);
    const double scale = p.y / (p.v * p.H);
    vel[k] = {scale * p.grad[0], scale * p.grad[1]};
  }
  return vel;
}

namespace {

double wrap_coord(double x, double L) {
  double r = std::fmod(x, L);
  if (r < 0.0) r += L;
  if (r >= L) r -= L;
  return r;
}

// Periodic (bi)linear interpolation of a grid field at x.
template <class Field, class Get>
auto interpolate(const Grid& g, const Field& f, const Vec2& x, Get get) {
  const double h = g.spacing();
  const double u0 = x[0] / h;
  const double f0 = std::floor(u0);
  const double a0 = u0 - f0;
  const int i0 = static_cast<int>(f0);
  if (g.n == 1) return (1.0 - a0) * get(f[g.index(i0)]) + a0 * get(f[g.index(i0 + 1)]);
  const double u1 = x[1] / h;
  const double f1 = std::floor(u1);
  const double a1 = u1 - f1;
  const int i1 = static_cast<int>(f1);
  return (1.0 - a0) * ((1.0 - a1) * get(f[g.index(i0, i1)]) + a1 * get(f[g.index(i0, i1 + 1)])) +
         a0 * ((1.0 - a1) * get(f[g.index(i0 + 1, i1)]) + a1 * get(f[g.index(i0 + 1, i1 + 1)]));
}

}  // namespace

ParticlePaths trace_particles(const Trajectory& trajectory, const std::vector<Vec2>& seeds,
                              int substeps_per_interval) {
  const auto& snaps = trajectory.snapshots;
  if (snaps.size() < 2) throw InsufficientSnapshots("particle tracing needs at least 2 snapshots");
  if (substeps_per_interval < 1) throw std::invalid_argument("substeps_per_interval must be positive");
  for (std::size_t k = 1; k < snaps.size(); ++k)
    if (!(snaps[k].t > snaps[k - 1].t)) throw InsufficientSnapshots("snapshot times must increase");

  const Grid& g = snaps.front().grid;
  const int n = g.n;
  const double L = g.length;

  std::vector<std::vector<Vec2>> vel;
  vel.reserve(snaps.size());
  for (const auto& s : snaps) vel.push_back(tangential_velocity(s));

  // Piecewise-linear in time inside interval k.
  auto velocity = [&](std::size_t k, double t, const Vec2& x) {
    const double alpha = (t - snaps[k].t) / (snaps[k + 1].t - snaps[k].t);
    Vec2 out{};
    for (int d = 0; d < n; ++d) {
      auto comp = [d](const Vec2& v) { return v[d]; };
      const double a = interpolate(g, vel[k], x, comp);
      const double b = interpolate(g, vel[k + 1], x, comp);
      out[d] = (1.0 - alpha) * a + alpha * b;
    }
    return out;
  };
  auto height = [&](std::size_t k, const Vec2& x) {
    return interpolate(g, snaps[k].y, x, [](double v) { return v; });
  };

  ParticlePaths paths;
  for (const auto& s : snaps) paths.times.push_back(s.t);
  for (const Vec2& seed : seeds) {
    Vec2 x{wrap_coord(seed[0], L), n == 2 ? wrap_coord(seed[1], L) : 0.0};
    std::vector<Vec2> pos{x};
    std::vector<double> hts{height(0, x)};
    for (std::size_t k = 0; k + 1 < snaps.size(); ++k) {
      const double dt = (snaps[k + 1].t - snaps[k].t) / substeps_per_interval;
      for (int s = 0; s < substeps_per_interval; ++s) {
        const double t = snaps[k].t + s * dt;
        auto shifted = [&](const Vec2& base, const Vec2& dir, double a) {
          Vec2 r{};
          for (int d = 0; d < n; ++d) r[d] = wrap_coord(base[d] + a * dir[d], L);
          return r;
        };
        const Vec2 k1 = velocity(k, t, x);
        const Vec2 k2 = velocity(k, t + 0.5 * dt, shifted(x, k1, 0.5 * dt));
        const Vec2 k3 = velocity(k, t + 0.5 * dt, shifted(x, k2, 0.5 * dt));
        const Vec2 k4 = velocity(k, t + dt, shifted(x, k3, dt));
        Vec2 incr{};
        for (int d = 0; d < n; ++d) incr[d] = (k1[d] + 2.0 * (k2[d] + k3[d]) + k4[d]) / 6.0;
        x = shifted(x, incr, dt);
      }
      pos.push_back(x);
      hts.push_back(height(k + 1, x));
    }
    paths.positions.push_back(std::move(pos));
    paths.heights.push_back(std::move(hts));
  }
  return paths;
}

}  // namespace imcf
