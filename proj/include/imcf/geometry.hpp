/// @file geometry.hpp
/// @brief Discrete derivatives and the extrinsic geometry of a graph in the
/// upper half-space model of hyperbolic space, metric (dx^2 + dy^2) / y^2.
///
/// All tensors are stored as 2x2 arrays; for n == 1 only entry [0][0] is used.
/// Mixed tensors are indexed [i][j] for T_i^j.
#pragma once

#include <span>
#include <vector>

#include "imcf/state.hpp"

namespace imcf {

/// Second-order centered first and second derivatives, periodic wraparound.
struct Derivatives {
  std::vector<Vec2> grad;
  std::vector<Mat2> hess;
};

Derivatives derivatives(const GraphState& state);

/// Pointwise geometric quantities of the graph.
struct PointGeometry {
  double y = 0.0;
  Vec2 grad{};
  Mat2 hess{};
  double v = 1.0;            ///< sqrt(1 + |grad y|^2)
  double w = 0.0;            ///< support function 1 / (v y)
  Mat2 g{};                  ///< induced metric (delta_ij + y_i y_j) / y^2
  Mat2 g_inv{};              ///< y^2 * delta_tilde
  double det_g = 0.0;        ///< v^2 / y^(2n)
  Mat2 delta_tilde{};        ///< delta^ij - y^i y^j / v^2
  double H = 0.0;            ///< (n + y delta_tilde^ij y_ij) / v
  Mat2 A_mixed{};            ///< A_i^j = (y delta_tilde^ik y_kj + delta_i^j) / v
  double A_norm2 = 0.0;      ///< A_i^j A_j^i
  double G = 0.0;            ///< |A|^2 - 2H + n
  double P_max = 0.0;        ///< largest eigenvalue of w^{-1} A_i^j
  Mat2 M_mixed{};            ///< H A_i^j
  Mat2 diff_coeff{};         ///< (y^2 / H^2) delta_tilde^ij
};

/// Evaluates every pointwise quantity from the height and its derivatives.
/// Requires y > 0; H may have any sign.
PointGeometry point_geometry(int n, double y, const Vec2& grad, const Mat2& hess);

struct GeometryFields {
  Grid grid;
  std::vector<PointGeometry> points;
};

/// Throws NonPositiveHeight if any y <= 0.
GeometryFields geometry(const GraphState& state);

/// Geometry of a non-periodic 1-d patch y_0..y_{m-1} at spacing h, evaluated at
/// the interior points 1..m-2 only.
std::vector<PointGeometry> geometry_interior_1d(std::span<const double> y, double h);

/// IMCF graph speed dy/dt = -y v^2 / (n + y delta_tilde^ij y_ij) = -y v / H.
/// Throws LostMeanConvexity where the denominator is <= 0.
std::vector<double> speed(const GraphState& state);

/// sup over the grid of y^2 / H^2, the scale of the parabolicity coefficient
/// (y^2 / H^2) delta_tilde^ij. Throws LostMeanConvexity where H <= 0.
double sup_diffusion_scale(const GraphState& state);

/// Intrinsic Laplace-Beltrami operator of the induced metric applied to f,
/// (1/sqrt(det g)) d_i (sqrt(det g) g^ij d_j f), conservative centered stencil.
std::vector<double> laplace_beltrami(const GraphState& state, std::span<const double> f);

/// Periodic centered gradient of an arbitrary grid field.
std::vector<Vec2> field_gradient(const Grid& grid, std::span<const double> f);

/// Eigenvalues (ascending) of a 2x2 matrix with real spectrum; the discriminant
/// is clamped at zero.
Vec2 real_eigenvalues(const Mat2& m);

}  // namespace imcf
