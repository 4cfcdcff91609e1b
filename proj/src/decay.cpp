#include "imcf/decay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "imcf/errors.hpp"

namespace imcf {

Series extract_series(const Trajectory& trajectory, std::string_view monitor) {
  constexpr double guard = 100.0 * std::numeric_limits<double>::epsilon();
  Series out;
  for (const auto& s : trajectory.samples) {
    const double v = monitor_value(s, monitor);
    if (v > guard) {
      out.t.push_back(s.t);
      out.s.push_back(v);
    }
  }
  return out;
}

DecayFit fit_rate_window(const Series& series, double t_start, double t_end) {
  std::vector<double> ts, ls;
  for (std::size_t i = 0; i < series.t.size(); ++i) {
    if (series.t[i] >= t_start && series.t[i] <= t_end && series.s[i] > 0.0) {
      ts.push_back(series.t[i]);
      ls.push_back(std::log(series.s[i]));
    }
  }
  if (ts.size() < 5)
    throw InsufficientPoints("fit window [" + std::to_string(t_start) + ", " + std::to_string(t_end) +
                             "] holds " + std::to_string(ts.size()) + " usable points, need 5");
  const double m = static_cast<double>(ts.size());
  double tm = 0.0, lm = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    tm += ts[i];
    lm += ls[i];
  }
  tm /= m;
  lm /= m;
  double stt = 0.0, stl = 0.0, sll = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    stt += (ts[i] - tm) * (ts[i] - tm);
    stl += (ts[i] - tm) * (ls[i] - lm);
    sll += (ls[i] - lm) * (ls[i] - lm);
  }
  if (!(stt > 0.0)) throw InsufficientPoints("fit window has no time spread");
  const double slope = stl / stt;
  const double intercept = lm - slope * tm;

  double ss_res = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double r = ls[i] - (intercept + slope * ts[i]);
    ss_res += r * r;
  }
  DecayFit fit;
  fit.rate = -slope;
  fit.amplitude = std::exp(intercept);
  // A flat series has no variance to explain.
  const double tiny = 1e-24 * std::max(1.0, lm * lm) * m;
  fit.r_squared = sll > tiny ? std::clamp(1.0 - ss_res / sll, 0.0, 1.0) : 0.0;
  fit.t_start = ts.front();
  fit.t_end = ts.back();
  fit.n_points = static_cast<int>(ts.size());
  return fit;
}

DecayFit fit_rate(const Series& series, double window_fraction) {
  if (!(window_fraction >= 0.0 && window_fraction < 1.0))
    throw std::invalid_argument("window_fraction must lie in [0, 1)");
  if (series.t.empty()) throw InsufficientPoints("empty series");
  const double first = series.t.front();
  const double last = series.t.back();
  return fit_rate_window(series, first + window_fraction * (last - first), last);
}

std::string_view to_string(RateStatus s) {
  switch (s) {
    case RateStatus::pass: return "PASS";
    case RateStatus::fail: return "FAIL";
    case RateStatus::degenerate: return "DEGENERATE";
    case RateStatus::insufficient: return "INSUFFICIENT";
  }
  return "UNKNOWN";
}

const RateCheck& RateReport::at(std::string_view label) const {
  for (const auto& c : checks)
    if (c.label == label) return c;
  throw std::out_of_range("no rate check labelled " + std::string(label));
}

namespace {

enum class Rule { band, positive, growth_ceiling };

RateCheck run_check(const Trajectory& traj, std::string label, std::string monitor, Rule rule,
                    std::optional<double> target, double t_start, double t_end) {
  RateCheck c;
  c.label = std::move(label);
  c.monitor = std::move(monitor);
  c.target_rate = target;
  switch (rule) {
    case Rule::band: c.criterion = "rate within 20% of target, r^2 >= 0.98"; break;
    case Rule::positive: c.criterion = "rate > 0"; break;
    case Rule::growth_ceiling: c.criterion = "growth (-rate) <= 1/n * 1.2"; break;
  }
  const Series series = extract_series(traj, c.monitor);
  if (series.t.empty()) {
    // Identically zero up to rounding, e.g. an exact horosphere.
    c.status = RateStatus::degenerate;
    return c;
  }
  try {
    c.fit = fit_rate_window(series, t_start, t_end);
  } catch (const InsufficientPoints&) {
    c.status = RateStatus::insufficient;
    return c;
  }
  const DecayFit& f = *c.fit;
  switch (rule) {
    case Rule::band:
      c.deviation = (f.rate - *target) / *target;
      c.status = std::abs(c.deviation) <= kRateBand && f.r_squared >= kMinRSquared ? RateStatus::pass
                                                                                    : RateStatus::fail;
      break;
    case Rule::positive:
      c.status = f.rate > 0.0 ? RateStatus::pass : RateStatus::fail;
      break;
    case Rule::growth_ceiling:
      c.deviation = (-f.rate - *target) / *target;
      c.status = -f.rate <= *target * (1.0 + kRateBand) ? RateStatus::pass : RateStatus::fail;
      break;
  }
  return c;
}

}  // namespace

RateReport verify_rates(const Trajectory& trajectory, const InitialStats& stats, double window_fraction) {
  RateReport report;
  if (trajectory.samples.empty()) return report;
  const double n = stats.n;
  const double first = trajectory.samples.front().t;
  const double last = trajectory.samples.back().t;
  const double span = last - first;
  const double start = first + window_fraction * span;
  const double late = first + std::max(0.5, window_fraction) * span;

  report.checks.push_back(run_check(trajectory, "grad_sup2", "grad_sup2", Rule::band, 2.0 / n, start, last));
  report.checks.push_back(run_check(trajectory, "G_sup", "G_sup", Rule::band, 4.0 / n, start, last));
  report.checks.push_back(run_check(trajectory, "G_sup[late]", "G_sup", Rule::band, 4.0 / n, late, last));
  report.checks.push_back(run_check(trajectory, "hess_sup", "hess_sup", Rule::positive, std::nullopt, start, last));
  report.checks.push_back(
      run_check(trajectory, "hess_sup[early]", "hess_sup", Rule::growth_ceiling, 1.0 / n, first, start));
  return report;
}

}  // namespace imcf
