#include "imcf/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "imcf/errors.hpp"
#include "imcf/geometry.hpp"

namespace imcf {

void InitialStats::validate() const {
  if (n != 1 && n != 2) throw InvalidStats("dimension must be 1 or 2");
  if (!(y_inf0 > 0.0) || !(y_inf0 <= y_sup0)) throw InvalidStats("need 0 < y_inf0 <= y_sup0");
  if (!(v_sup0 >= 1.0)) throw InvalidStats("need v_sup0 >= 1");
  if (!(H_inf0 > 0.0) || !(H_inf0 <= H_sup0)) throw InvalidStats("need 0 < H_inf0 <= H_sup0");
  if (!std::isfinite(y_sup0) || !std::isfinite(v_sup0) || !std::isfinite(H_sup0))
    throw InvalidStats("stats must be finite");
}

InitialStats initial_stats(const GraphState& state) {
  const GeometryFields geo = geometry(state);
  const MonitorSample m = compute_monitors(geo, state.t);
  InitialStats s;
  s.n = state.grid.n;
  s.y_inf0 = m.y_inf;
  s.y_sup0 = m.y_sup;
  s.v_sup0 = m.v_sup;
  s.w_inf0 = m.w_inf;
  s.H_inf0 = m.H_inf;
  s.H_sup0 = m.H_sup;
  s.P_max0 = m.P_max_sup;
  // eigenvalues of g relative to delta are 1/y^2 and v^2/y^2; of g^-1, y^2 and y^2/v^2
  double D2 = 0.0;
  for (const auto& p : geo.points) D2 = std::max({D2, p.v * p.v / (p.y * p.y), p.y * p.y});
  s.D = std::sqrt(D2);
  return s;
}

Envelopes envelopes(const InitialStats& stats, double t) {
  stats.validate();
  if (!(t >= 0.0)) throw InvalidStats("envelope time must be >= 0");
  const double n = stats.n;
  const double decay = std::exp(-t / n);
  Envelopes e;
  e.y_lo = stats.y_inf0 * decay;
  e.y_hi = stats.y_sup0 * decay;
  e.w_lo = stats.w_inf0 / decay;
  e.v_hi = stats.y_sup0 / stats.y_inf0 * stats.v_sup0;
  if (stats.H_sup0 > n) {
    const double C0 = stats.H_sup0 * stats.H_sup0 - n * n;
    const double root = std::sqrt(C0 * decay * decay + n * n);
    const double c0 = stats.y_inf0 * stats.H_inf0 / (stats.y_sup0 * stats.v_sup0 * stats.H_sup0);
    e.H_hi = root;
    e.H_lo = c0 * root;
  } else {
    e.H_hi = n;
    e.H_lo = stats.y_inf0 * stats.H_inf0 / (stats.y_sup0 * stats.v_sup0);
  }
  return e;
}

std::vector<double> ode_compare(const std::function<double(double)>& rhs, double u0,
                                std::span<const double> t_grid, double bound,
                                double max_internal_step) {
  if (t_grid.empty()) return {};
  for (std::size_t k = 1; k < t_grid.size(); ++k)
    if (!(t_grid[k] > t_grid[k - 1])) throw std::invalid_argument("t_grid must be strictly increasing");
  auto guard = [bound](double t, double phi) {
    if (!std::isfinite(phi) || std::abs(phi) > bound) throw OdeBlowup(t, phi);
  };
  std::vector<double> out{u0};
  guard(t_grid[0], u0);
  double phi = u0;
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    const double span = t_grid[k] - t_grid[k - 1];
    const int m = std::max(10, static_cast<int>(std::ceil(span / max_internal_step)));
    const double h = span / m;
    for (int s = 0; s < m; ++s) {
      const double k1 = rhs(phi);
      const double k2 = rhs(phi + 0.5 * h * k1);
      const double k3 = rhs(phi + 0.5 * h * k2);
      const double k4 = rhs(phi + h * k3);
      phi += h * (k1 + 2.0 * (k2 + k3) + k4) / 6.0;
      guard(t_grid[k - 1] + (s + 1) * h, phi);
    }
    out.push_back(phi);
  }
  return out;
}

bool CertificateReport::all_passed() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

const CertificateResult& CertificateReport::at(std::string_view name) const {
  for (const auto& r : results)
    if (r.name == name) return r;
  throw std::out_of_range("no certificate named " + std::string(name));
}

const std::vector<std::string>& certificate_names() {
  static const std::vector<std::string> names = {
      "y_barriers", "w_lower",        "v_upper",   "H_upper",
      "H_lower",    "Hsup_ode_comparison", "grad_decay_inequality", "P_boundedness"};
  return names;
}

double default_tolerance(const Grid& grid) {
  const double h = grid.spacing();
  return 1e-6 + h * h;
}

namespace {

// Tracks the worst (smallest) margin; NaN counts as a violation.
void observe(CertificateResult& r, double margin, const MonitorSample& s, std::size_t idx) {
  const bool worse = std::isnan(margin) ? !std::isnan(r.worst_margin) : margin < r.worst_margin;
  if (worse) {
    r.worst_margin = margin;
    r.at_t = s.t;
    r.at_sample = idx;
  }
}

void finish(CertificateResult& r) { r.passed = !std::isnan(r.worst_margin) && r.worst_margin >= 0.0; }

// Second-order derivative at the middle of three non-uniform samples.
double centered_derivative(double t0, double t1, double t2, double f0, double f1, double f2) {
  const double h1 = t1 - t0;
  const double h2 = t2 - t1;
  return -h2 / (h1 * (h1 + h2)) * f0 + (h2 - h1) / (h1 * h2) * f1 + h1 / (h2 * (h1 + h2)) * f2;
}

}  // namespace

CertificateReport check(const Trajectory& trajectory, const InitialStats& stats, double tol) {
  CertificateReport report;
  for (const auto& name : certificate_names()) {
    CertificateResult r;
    r.name = name;
    report.results.push_back(r);
  }
  auto get = [&](std::string_view name) -> CertificateResult& {
    for (auto& r : report.results)
      if (r.name == name) return r;
    throw std::logic_error("missing certificate");
  };
  const auto& samples = trajectory.samples;
  if (samples.empty()) {
    for (auto& r : report.results) {
      r.worst_margin = std::numeric_limits<double>::quiet_NaN();
      r.note = "no samples";
      r.passed = false;
    }
    return report;
  }
  const int n = stats.n;
  const double t0 = samples.front().t;

  bool stats_ok = true;
  try {
    stats.validate();
  } catch (const InvalidStats& e) {
    stats_ok = false;
    for (auto& r : report.results) r.note = e.what();
  }

  // Envelope certificates.
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!stats_ok) {
      for (auto& r : report.results) observe(r, std::numeric_limits<double>::quiet_NaN(), s, i);
      break;
    }
    const Envelopes e = envelopes(stats, s.t - t0);
    observe(get("y_barriers"), std::min(s.y_inf - (e.y_lo - tol), (e.y_hi + tol) - s.y_sup), s, i);
    observe(get("w_lower"), s.w_inf - (e.w_lo - tol), s, i);
    observe(get("v_upper"), (e.v_hi + tol) - s.v_sup, s, i);
    observe(get("H_upper"), (e.H_hi + tol) - s.H_sup, s, i);
    observe(get("H_lower"), s.H_inf - (e.H_lo - tol), s, i);
  }

  // Sup-tracking comparison: H_sup against phi' = (n^2 - phi^2) / (n phi).
  {
    auto& r = get("Hsup_ode_comparison");
    std::vector<double> times;
    for (const auto& s : samples) times.push_back(s.t);
    try {
      const auto phi = ode_compare([n](double p) { return (n * n - p * p) / (n * p); },
                                   samples.front().H_sup, times);
      for (std::size_t i = 0; i < samples.size(); ++i) observe(r, phi[i] + tol - samples[i].H_sup, samples[i], i);
    } catch (const OdeBlowup& e) {
      observe(r, -std::numeric_limits<double>::infinity(), samples.front(), 0);
      r.note = e.what();
    }
  }

  // d psi_sup / dt <= -2n / H^2 psi_sup with H at the argmax of psi = |grad y|^2.
  {
    auto& r = get("grad_decay_inequality");
    auto H_of = [](const MonitorSample& s) {
      return std::isfinite(s.H_at_grad_argmax) ? s.H_at_grad_argmax : s.H_sup;
    };
    if (samples.size() == 1) {
      r.note = "vacuous: a single sample has no time derivative";
    } else if (samples.size() == 2) {
      const auto& a = samples[0];
      const auto& b = samples[1];
      const double slope = (b.grad_sup2 - a.grad_sup2) / (b.t - a.t);
      const double bound = -n * (a.grad_sup2 / (H_of(a) * H_of(a)) + b.grad_sup2 / (H_of(b) * H_of(b)));
      observe(r, bound + tol - slope, a, 0);
    } else {
      for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
        const auto& a = samples[i - 1];
        const auto& s = samples[i];
        const auto& b = samples[i + 1];
        const double slope = centered_derivative(a.t, s.t, b.t, a.grad_sup2, s.grad_sup2, b.grad_sup2);
        const double H = H_of(s);
        observe(r, -2.0 * n / (H * H) * s.grad_sup2 + tol - slope, s, i);
      }
    }
  }

  // P_max_sup <= max(P_max0, c0') (1 + tol), c0' = (n + 8 D^2) / (2 inf (H w)).
  // H_inf * w_inf bounds inf(H w) from below, so c0' bounds (Hw)^-1 (n + 8D^2)/2 from above.
  {
    auto& r = get("P_boundedness");
    double hw_inf = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) hw_inf = std::min(hw_inf, s.H_inf * s.w_inf);
    if (!(hw_inf > 0.0)) {
      observe(r, -std::numeric_limits<double>::infinity(), samples.front(), 0);
      r.note = "H w is not positive on the trajectory";
    } else {
      const double c0p = (n + 8.0 * stats.D * stats.D) / (2.0 * hw_inf);
      const double bound = std::max(stats.P_max0, c0p) * (1.0 + tol);
      for (std::size_t i = 0; i < samples.size(); ++i) observe(r, bound - samples[i].P_max_sup, samples[i], i);
    }
  }

  for (auto& r : report.results) finish(r);
  return report;
}

}  // namespace imcf
