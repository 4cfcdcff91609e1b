/// @file certificates.hpp
/// @brief Closed-form envelopes of the flow evaluated as runtime certificates
/// over a recorded trajectory, plus the sup-tracking comparison-ODE harness.
#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imcf/flow.hpp"
#include "imcf/state.hpp"

namespace imcf {

/// Measured constants of the initial state that the envelopes depend on.
struct InitialStats {
  int n = 1;
  double y_inf0 = 0.0;
  double y_sup0 = 0.0;
  double v_sup0 = 1.0;
  double w_inf0 = 0.0;
  double H_inf0 = 0.0;
  double H_sup0 = 0.0;
  double P_max0 = 0.0;
  /// Metric-equivalence constant: D^-2 delta <= g <= D^2 delta on the initial grid.
  double D = 1.0;

  /// Throws InvalidStats.
  void validate() const;
};

InitialStats initial_stats(const GraphState& state);

struct Envelopes {
  double y_lo = 0.0;
  double y_hi = 0.0;
  double w_lo = 0.0;
  double v_hi = 0.0;
  double H_lo = 0.0;
  double H_hi = 0.0;
};

/// Envelopes at elapsed time t >= 0:
///   y_inf0 e^{-t/n} <= y <= y_sup0 e^{-t/n},   w >= w_inf0 e^{t/n},
///   v <= (y_sup0 / y_inf0) v_sup0,
///   c0 sqrt(n^2 + C0 e^{-2t/n}) <= H <= sqrt(C0 e^{-2t/n} + n^2)   if H_sup0 > n,
///   c0 <= H <= n                                                   otherwise.
Envelopes envelopes(const InitialStats& stats, double t);

/// Integrates phi' = rhs(phi), phi(t_grid[0]) = u0 with classical rk4, at most
/// min(max_internal_step, spacing / 10) per internal step, and returns phi at
/// every grid time. Throws OdeBlowup if |phi| exceeds `bound` or turns non-finite.
std::vector<double> ode_compare(const std::function<double(double)>& rhs, double u0,
                                std::span<const double> t_grid, double bound = 1e12,
                                double max_internal_step = 1e-2);

struct CertificateResult {
  std::string name;
  bool passed = true;
  double worst_margin = std::numeric_limits<double>::infinity();  ///< negative = violation
  double at_t = 0.0;
  std::size_t at_sample = 0;
  std::string note;
};

struct CertificateReport {
  std::vector<CertificateResult> results;

  bool all_passed() const;
  /// Throws std::out_of_range for an unknown name.
  const CertificateResult& at(std::string_view name) const;
};

/// Certificate names in report order.
const std::vector<std::string>& certificate_names();

/// Absolute discretization tolerance 1e-6 + h^2.
double default_tolerance(const Grid& grid);

/// Evaluates every certificate at every sample. Elapsed time is measured from
/// the first sample. Failures are report entries, never exceptions.
CertificateReport check(const Trajectory& trajectory, const InitialStats& stats, double tol);

}  // namespace imcf
