#include "imcf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "imcf/errors.hpp"

namespace imcf {

namespace {

// Sums are grouped so that mirror-image stencils produce identical roundoff.
void centered_1d(const GraphState& s, std::size_t k, Vec2& grad, Mat2& hess) {
  const Grid& g = s.grid;
  const double h = g.spacing();
  const int i = g.coords(k)[0];
  const double yp = s.y[g.index(i + 1)];
  const double ym = s.y[g.index(i - 1)];
  grad = {(yp - ym) / (2.0 * h), 0.0};
  hess = {};
  hess[0][0] = ((yp + ym) - 2.0 * s.y[k]) / (h * h);
}

void centered_2d(const GraphState& s, std::size_t k, Vec2& grad, Mat2& hess) {
  const Grid& g = s.grid;
  const double h = g.spacing();
  const auto [i, j] = g.coords(k);
  const auto& y = s.y;
  const double c = y[k];
  const double xp = y[g.index(i + 1, j)], xm = y[g.index(i - 1, j)];
  const double yp = y[g.index(i, j + 1)], ym = y[g.index(i, j - 1)];
  const double pp = y[g.index(i + 1, j + 1)], mm = y[g.index(i - 1, j - 1)];
  const double pm = y[g.index(i + 1, j - 1)], mp = y[g.index(i - 1, j + 1)];
  grad = {(xp - xm) / (2.0 * h), (yp - ym) / (2.0 * h)};
  hess[0][0] = ((xp + xm) - 2.0 * c) / (h * h);
  hess[1][1] = ((yp + ym) - 2.0 * c) / (h * h);
  hess[0][1] = hess[1][0] = ((pp + mm) - (pm + mp)) / (4.0 * h * h);
}

void centered(const GraphState& s, std::size_t k, Vec2& grad, Mat2& hess) {
  if (s.grid.n == 1)
    centered_1d(s, k, grad, hess);
  else
    centered_2d(s, k, grad, hess);
}

// n + y * delta_tilde^ij y_ij, and v^2.
std::pair<double, double> speed_terms(int n, double y, const Vec2& grad, const Mat2& hess) {
  double gs = 0.0;
  for (int i = 0; i < n; ++i) gs += grad[i] * grad[i];
  const double v2 = 1.0 + gs;
  double trace = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) trace += ((i == j ? 1.0 : 0.0) - grad[i] * grad[j] / v2) * hess[i][j];
  return {n + y * trace, v2};
}

}  // namespace

Derivatives derivatives(const GraphState& state) {
  const std::size_t N = state.grid.size();
  Derivatives d{std::vector<Vec2>(N), std::vector<Mat2>(N)};
  for (std::size_t k = 0; k < N; ++k) centered(state, k, d.grad[k], d.hess[k]);
  return d;
}

Vec2 real_eigenvalues(const Mat2& m) {
  const double half_tr = 0.5 * (m[0][0] + m[1][1]);
  const double half_diff = 0.5 * (m[0][0] - m[1][1]);
  const double root = std::sqrt(std::max(0.0, half_diff * half_diff + m[0][1] * m[1][0]));
  return {half_tr - root, half_tr + root};
}

PointGeometry point_geometry(int n, double y, const Vec2& grad, const Mat2& hess) {
  PointGeometry p;
  p.y = y;
  p.grad = grad;
  p.hess = hess;

  double gs = 0.0;
  for (int i = 0; i < n; ++i) gs += grad[i] * grad[i];
  const double v2 = 1.0 + gs;
  p.v = std::sqrt(v2);
  p.w = 1.0 / (p.v * y);
  const double y2 = y * y;

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double delta = i == j ? 1.0 : 0.0;
      p.delta_tilde[i][j] = delta - grad[i] * grad[j] / v2;
      p.g[i][j] = (delta + grad[i] * grad[j]) / y2;
      p.g_inv[i][j] = y2 * p.delta_tilde[i][j];
    }
  }
  p.det_g = v2 / std::pow(y, 2 * n);

  double trace = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) trace += p.delta_tilde[i][j] * hess[i][j];
  p.H = (n + y * trace) / p.v;

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double dh = 0.0;
      for (int k = 0; k < n; ++k) dh += p.delta_tilde[i][k] * hess[k][j];
      p.A_mixed[i][j] = (y * dh + (i == j ? 1.0 : 0.0)) / p.v;
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p.A_norm2 += p.A_mixed[i][j] * p.A_mixed[j][i];
  p.G = p.A_norm2 - 2.0 * p.H + n;

  const double w_inv = y * p.v;
  if (n == 1) {
    p.P_max = w_inv * p.A_mixed[0][0];
  } else {
    Mat2 P{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) P[i][j] = w_inv * p.A_mixed[i][j];
    p.P_max = real_eigenvalues(P)[1];
  }

  const double c = y2 / (p.H * p.H);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      p.M_mixed[i][j] = p.H * p.A_mixed[i][j];
      p.diff_coeff[i][j] = c * p.delta_tilde[i][j];
    }
  }
  return p;
}

GeometryFields geometry(const GraphState& state) {
  state.require_positive();
  const std::size_t N = state.grid.size();
  GeometryFields f{state.grid, std::vector<PointGeometry>(N)};
  Vec2 grad;
  Mat2 hess;
  for (std::size_t k = 0; k < N; ++k) {
    centered(state, k, grad, hess);
    f.points[k] = point_geometry(state.grid.n, state.y[k], grad, hess);
  }
  return f;
}

std::vector<PointGeometry> geometry_interior_1d(std::span<const double> y, double h) {
  if (y.size() < 3) throw std::invalid_argument("patch needs at least 3 samples");
  std::vector<PointGeometry> out;
  out.reserve(y.size() - 2);
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (!(y[i] > 0.0)) throw NonPositiveHeight({i, 0}, y[i]);
    const Vec2 grad{(y[i + 1] - y[i - 1]) / (2.0 * h), 0.0};
    Mat2 hess{};
    hess[0][0] = ((y[i + 1] + y[i - 1]) - 2.0 * y[i]) / (h * h);
    out.push_back(point_geometry(1, y[i], grad, hess));
  }
  return out;
}

std::vector<double> speed(const GraphState& state) {
  const std::size_t N = state.grid.size();
  const int n = state.grid.n;
  std::vector<double> F(N);
  state.require_positive();
  Vec2 grad;
  Mat2 hess;
  for (std::size_t k = 0; k < N; ++k) {
    const double y = state.y[k];
    centered(state, k, grad, hess);
    const auto [den, v2] = speed_terms(n, y, grad, hess);
    if (!(den > 0.0) || !std::isfinite(den)) throw LostMeanConvexity({k, 0}, den);
    F[k] = -y * v2 / den;
  }
  return F;
}

double sup_diffusion_scale(const GraphState& state) {
  const int n = state.grid.n;
  double sup = 0.0;
  state.require_positive();
  Vec2 grad;
  Mat2 hess;
  for (std::size_t k = 0; k < state.y.size(); ++k) {
    const double y = state.y[k];
    centered(state, k, grad, hess);
    const auto [den, v2] = speed_terms(n, y, grad, hess);
    if (!(den > 0.0) || !std::isfinite(den)) throw LostMeanConvexity({k, 0}, den);
    // H = den / v, so y^2 / H^2 = y^2 v^2 / den^2
    sup = std::max(sup, y * y * v2 / (den * den));
  }
  return sup;
}

std::vector<Vec2> field_gradient(const Grid& grid, std::span<const double> f) {
  const double h = grid.spacing();
  std::vector<Vec2> out(grid.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto [i, j] = grid.coords(k);
    if (grid.n == 1) {
      out[k] = {(f[grid.index(i + 1)] - f[grid.index(i - 1)]) / (2.0 * h), 0.0};
    } else {
      out[k] = {(f[grid.index(i + 1, j)] - f[grid.index(i - 1, j)]) / (2.0 * h),
                (f[grid.index(i, j + 1)] - f[grid.index(i, j - 1)]) / (2.0 * h)};
    }
  }
  return out;
}

std::vector<double> laplace_beltrami(const GraphState& state, std::span<const double> f) {
  const GeometryFields geo = geometry(state);
  const Grid& g = state.grid;
  const int n = g.n;
  const double h = g.spacing();
  const std::size_t N = g.size();
  if (f.size() != N) throw std::invalid_argument("field size does not match grid");

  // K^ij = sqrt(det g) g^ij
  std::vector<Mat2> K(N);
  std::vector<double> sqrt_det(N);
  for (std::size_t k = 0; k < N; ++k) {
    const auto& p = geo.points[k];
    sqrt_det[k] = std::sqrt(p.det_g);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) K[k][i][j] = sqrt_det[k] * p.g_inv[i][j];
  }

  std::vector<double> out(N);
  for (std::size_t k = 0; k < N; ++k) {
    const auto [i, j] = g.coords(k);
    double div = 0.0;
    if (n == 1) {
      const std::size_t p = g.index(i + 1), m = g.index(i - 1);
      const double kp = 0.5 * (K[k][0][0] + K[p][0][0]);
      const double km = 0.5 * (K[k][0][0] + K[m][0][0]);
      div = (kp * (f[p] - f[k]) - km * (f[k] - f[m])) / (h * h);
    } else {
      const std::size_t xp = g.index(i + 1, j), xm = g.index(i - 1, j);
      const std::size_t yp = g.index(i, j + 1), ym = g.index(i, j - 1);
      const double k1p = 0.5 * (K[k][0][0] + K[xp][0][0]);
      const double k1m = 0.5 * (K[k][0][0] + K[xm][0][0]);
      const double k2p = 0.5 * (K[k][1][1] + K[yp][1][1]);
      const double k2m = 0.5 * (K[k][1][1] + K[ym][1][1]);
      div += (k1p * (f[xp] - f[k]) - k1m * (f[k] - f[xm])) / (h * h);
      div += (k2p * (f[yp] - f[k]) - k2m * (f[k] - f[ym])) / (h * h);

      const double fpp = f[g.index(i + 1, j + 1)], fpm = f[g.index(i + 1, j - 1)];
      const double fmp = f[g.index(i - 1, j + 1)], fmm = f[g.index(i - 1, j - 1)];
      // d_1 (K^12 d_2 f) + d_2 (K^21 d_1 f)
      div += (K[xp][0][1] * (fpp - fpm) - K[xm][0][1] * (fmp - fmm)) / (4.0 * h * h);
      div += (K[yp][1][0] * (fpp - fmp) - K[ym][1][0] * (fpm - fmm)) / (4.0 * h * h);
    }
    out[k] = div / sqrt_det[k];
  }
  return out;
}

}  // namespace imcf
