/// @file flow.hpp
/// @brief Explicit time integration of the IMCF graph equation
///   dy/dt = -y v^2 / (n + y delta_tilde^ij y_ij),
/// trajectory recording, Lagrangian particle tracing and numerical checks of
/// the flow's evolution identities.
#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imcf/geometry.hpp"
#include "imcf/state.hpp"

namespace imcf {

enum class Scheme { euler, rk4 };

struct FlowConfig {
  Scheme scheme = Scheme::rk4;
  double safety = 0.25;  ///< in (0, 1]
  double t_end = 1.0;
  int sample_stride = 10;
  long max_steps = 10'000'000;
  /// Times at which full states are stored; the integrator lands on them exactly.
  std::vector<double> snapshot_times;

  /// Throws InvalidConfig.
  void validate() const;
};

/// Scalar monitors of one state. Sup/inf are exact extrema over the grid.
struct MonitorSample {
  double t = 0.0;
  double y_inf = 0.0;
  double y_sup = 0.0;
  double v_sup = 0.0;
  double w_inf = 0.0;
  double H_inf = 0.0;
  double H_sup = 0.0;
  double grad_sup2 = 0.0;  ///< sup |grad y|^2
  double hess_sup = 0.0;   ///< sup max_ij |y_ij|
  double G_sup = 0.0;
  double P_max_sup = 0.0;
  /// H at the argmax of |grad y|^2; NaN when unknown (e.g. read back from csv).
  double H_at_grad_argmax = std::numeric_limits<double>::quiet_NaN();
};

MonitorSample compute_monitors(const GeometryFields& geo, double t);
MonitorSample compute_monitors(const GraphState& state);

/// Names of the csv monitor columns after "t", in file order.
const std::vector<std::string>& monitor_names();
/// Looks up a monitor by name; throws UnknownMonitor.
double monitor_value(const MonitorSample& s, std::string_view name);

enum class Termination { completed, lost_mean_convexity, height_nonpositive, max_steps };
std::string_view to_string(Termination t);

struct Trajectory {
  Grid grid;
  std::vector<MonitorSample> samples;
  std::vector<GraphState> snapshots;
  Termination termination = Termination::completed;
  std::string diagnostic;
  long steps = 0;
};

/// dt = safety * h^2 / (2 n sup(y^2 / H^2)). Throws LostMeanConvexity.
double stable_dt(const GraphState& state, double safety);

/// One explicit step. Throws LostMeanConvexity or NonPositiveHeight with the
/// failing stage and grid index; std::invalid_argument for dt < 0 or above the
/// safety-1 bound.
GraphState step(const GraphState& state, double dt, Scheme scheme);

/// Integrates to config.t_end. Breakdown truncates the trajectory and sets the
/// termination code; only an invalid config throws.
Trajectory evolve(const GraphState& initial, const FlowConfig& config);

/// Lagrangian paths x(t) of the tangential correction ODE
/// dx/dt = (y / (v H)) grad y, so that (x(t), y(x(t), t)) follows the normal flow.
struct ParticlePaths {
  std::vector<double> times;                  ///< snapshot times
  std::vector<std::vector<Vec2>> positions;   ///< [seed][time], wrapped into [0, L)
  std::vector<std::vector<double>> heights;   ///< y interpolated at the positions
};

ParticlePaths trace_particles(const Trajectory& trajectory, const std::vector<Vec2>& seeds,
                              int substeps_per_interval = 8);

/// Velocity field (y / (v H)) grad y of one state.
std::vector<Vec2> tangential_velocity(const GraphState& state);

enum class EvolvedQuantity { w, H };

struct ResidualSample {
  double t = 0.0;            ///< time of the middle snapshot
  double sup_residual = 0.0;
};

/// Sup-norm residual of (d_t - H^-2 Delta) q - rhs(q) at every interior
/// snapshot, with d_t by centered differences across the neighbours:
///   w: rhs = |A|^2 / H^2 w
///   H: rhs = -2 |grad H|^2 / H^3 - |A|^2 / H + n / H
std::vector<ResidualSample> evolution_residual(const Trajectory& trajectory,
                                               EvolvedQuantity quantity);

}  // namespace imcf
