/// @file decay.hpp
/// @brief Exponential decay-rate fitting of monitor series and comparison with
/// the asymptotic exponents of the flow.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imcf/certificates.hpp"
#include "imcf/flow.hpp"

namespace imcf {

struct Series {
  std::vector<double> t;
  std::vector<double> s;
};

/// Monitor series with samples s <= 100 * eps dropped (log-domain guard).
/// Throws UnknownMonitor.
Series extract_series(const Trajectory& trajectory, std::string_view monitor);

/// Least-squares fit of log s = log a - rate * t.
struct DecayFit {
  double rate = 0.0;
  double amplitude = 0.0;
  double r_squared = 0.0;
  double t_start = 0.0;
  double t_end = 0.0;
  int n_points = 0;
};

/// Fits on the window [t_first + window_fraction * (t_last - t_first), t_last].
/// Throws InsufficientPoints with fewer than 5 points in the window.
DecayFit fit_rate(const Series& series, double window_fraction = 0.25);

/// Fits on an explicit window [t_start, t_end].
DecayFit fit_rate_window(const Series& series, double t_start, double t_end);

enum class RateStatus { pass, fail, degenerate, insufficient };
std::string_view to_string(RateStatus s);

struct RateCheck {
  std::string label;      ///< e.g. "grad_sup2", "G_sup[late]"
  std::string monitor;
  std::string criterion;  ///< human-readable pass rule
  std::optional<double> target_rate;
  std::optional<DecayFit> fit;
  double deviation = 0.0;  ///< (rate - target) / target when a target exists
  RateStatus status = RateStatus::insufficient;
};

struct RateReport {
  std::vector<RateCheck> checks;
  const RateCheck& at(std::string_view label) const;
};

/// Pass band and goodness-of-fit threshold for targeted rates.
inline constexpr double kRateBand = 0.20;
inline constexpr double kMinRSquared = 0.98;

/// Fits grad_sup2 (target 2/n), G_sup (target 4/n, default and late window),
/// hess_sup (any positive rate) and the early-window growth ceiling of
/// hess_sup (at most 1/n, within the band).
RateReport verify_rates(const Trajectory& trajectory, const InitialStats& stats,
                        double window_fraction = 0.25);

}  // namespace imcf
