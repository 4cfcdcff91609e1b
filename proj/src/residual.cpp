#include <algorithm>
#include <cmath>

#include "imcf/errors.hpp"
#include "imcf/flow.hpp"

namespace imcf {

namespace {

std::vector<double> extract(const GeometryFields& geo, EvolvedQuantity q) {
  std::vector<double> out(geo.points.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = q == EvolvedQuantity::w ? geo.points[k].w : geo.points[k].H;
  return out;
}

}  // namespace

std::vector<ResidualSample> evolution_residual(const Trajectory& trajectory, EvolvedQuantity quantity) {
  const auto& snaps = trajectory.snapshots;
  if (snaps.size() < 3) throw InsufficientSnapshots("evolution residual needs at least 3 snapshots");
  const double tau = snaps[1].t - snaps[0].t;
  if (!(tau > 0.0)) throw NonUniformSampling("snapshot times must increase");
  for (std::size_t k = 1; k < snaps.size(); ++k) {
    const double d = snaps[k].t - snaps[k - 1].t;
    if (std::abs(d - tau) > 1e-6 * tau)
      throw NonUniformSampling("snapshot spacing " + std::to_string(d) + " differs from " + std::to_string(tau));
  }

  const int n = trajectory.grid.n;
  std::vector<ResidualSample> out;
  for (std::size_t k = 1; k + 1 < snaps.size(); ++k) {
    const auto before = extract(geometry(snaps[k - 1]), quantity);
    const auto after = extract(geometry(snaps[k + 1]), quantity);
    const GeometryFields mid = geometry(snaps[k]);
    const auto q = extract(mid, quantity);
    const auto lap = laplace_beltrami(snaps[k], q);
    // Graph values are sampled at fixed x; the identities hold along the tracer x'(t) = V.
    const auto grad_q = field_gradient(mid.grid, q);
    const auto vel = tangential_velocity(snaps[k]);

    const double span = snaps[k + 1].t - snaps[k - 1].t;
    double sup = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      const auto& p = mid.points[i];
      const double H = p.H;
      double dq_dt = (after[i] - before[i]) / span;
      for (int a = 0; a < n; ++a) dq_dt += grad_q[i][a] * vel[i][a];
      double rhs = 0.0;
      if (quantity == EvolvedQuantity::w) {
        rhs = p.A_norm2 / (H * H) * p.w;
      } else {
        double grad2 = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) grad2 += p.g_inv[a][b] * grad_q[i][a] * grad_q[i][b];
        rhs = -2.0 * grad2 / (H * H * H) - p.A_norm2 / H + n / H;
      }
      sup = std::max(sup, std::abs(dq_dt - lap[i] / (H * H) - rhs));
    }
    out.push_back({snaps[k].t, sup});
  }
  return out;
}

}  // namespace imcf
