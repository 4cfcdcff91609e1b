#include "imcf/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "imcf/errors.hpp"

namespace imcf {

void FlowConfig::validate() const {
  if (!(safety > 0.0 && safety <= 1.0)) throw InvalidConfig("flow safety must lie in (0, 1]");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InvalidConfig("flow t_end must be finite and >= 0");
  if (sample_stride < 1) throw InvalidConfig("sample_stride must be positive");
  if (max_steps < 1) throw InvalidConfig("max_steps must be positive");
  for (double s : snapshot_times)
    if (!std::isfinite(s)) throw InvalidConfig("snapshot times must be finite");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::completed: return "completed";
    case Termination::lost_mean_convexity: return "lost_mean_convexity";
    case Termination::height_nonpositive: return "height_nonpositive";
    case Termination::max_steps: return "max_steps";
  }
  return "unknown";
}

const std::vector<std::string>& monitor_names() {
  static const std::vector<std::string> names = {"y_inf", "y_sup",     "v_sup",    "w_inf",
                                                 "H_inf", "H_sup",     "grad_sup2", "hess_sup",
                                                 "G_sup", "P_max_sup"};
  return names;
}

double monitor_value(const MonitorSample& s, std::string_view name) {
  if (name == "t") return s.t;
  if (name == "y_inf") return s.y_inf;
  if (name == "y_sup") return s.y_sup;
  if (name == "v_sup") return s.v_sup;
  if (name == "w_inf") return s.w_inf;
  if (name == "H_inf") return s.H_inf;
  if (name == "H_sup") return s.H_sup;
  if (name == "grad_sup2") return s.grad_sup2;
  if (name == "hess_sup") return s.hess_sup;
  if (name == "G_sup") return s.G_sup;
  if (name == "P_max_sup") return s.P_max_sup;
  throw UnknownMonitor("unknown monitor '" + std::string(name) + "'");
}

MonitorSample compute_monitors(const GeometryFields& geo, double t) {
  const int n = geo.grid.n;
  MonitorSample m;
  m.t = t;
  const auto& pts = geo.points;
  m.y_inf = m.y_sup = pts.front().y;
  m.v_sup = pts.front().v;
  m.w_inf = pts.front().w;
  m.H_inf = m.H_sup = pts.front().H;
  m.G_sup = pts.front().G;
  m.P_max_sup = pts.front().P_max;
  m.grad_sup2 = -1.0;
  for (const auto& p : pts) {
    m.y_inf = std::min(m.y_inf, p.y);
    m.y_sup = std::max(m.y_sup, p.y);
    m.v_sup = std::max(m.v_sup, p.v);
    m.w_inf = std::min(m.w_inf, p.w);
    m.H_inf = std::min(m.H_inf, p.H);
    m.H_sup = std::max(m.H_sup, p.H);
    m.G_sup = std::max(m.G_sup, p.G);
    m.P_max_sup = std::max(m.P_max_sup, p.P_max);
    double g2 = 0.0;
    for (int i = 0; i < n; ++i) {
      g2 += p.grad[i] * p.grad[i];
      for (int j = 0; j < n; ++j) m.hess_sup = std::max(m.hess_sup, std::abs(p.hess[i][j]));
    }
    if (g2 > m.grad_sup2) {
      m.grad_sup2 = g2;
      m.H_at_grad_argmax = p.H;
    }
  }
  return m;
}

MonitorSample compute_monitors(const GraphState& state) {
  return compute_monitors(geometry(state), state.t);
}

double stable_dt(const GraphState& state, double safety) {
  const double h = state.grid.spacing();
  return safety * h * h / (2.0 * state.grid.n * sup_diffusion_scale(state));
}

namespace {

std::vector<double> stage_speed(const GraphState& s, int stage) {
  try {
    return speed(s);
  } catch (const LostMeanConvexity& e) {
    throw LostMeanConvexity({e.site.index, stage}, e.denominator);
  } catch (const NonPositiveHeight& e) {
    throw NonPositiveHeight({e.site.index, stage}, e.value);
  }
}

GraphState axpy(const GraphState& s, double a, const std::vector<double>& k, int stage) {
  GraphState out{s.grid, s.t, s.y};
  for (std::size_t i = 0; i < out.y.size(); ++i) {
    out.y[i] += a * k[i];
    if (!(out.y[i] > 0.0) || !std::isfinite(out.y[i])) throw NonPositiveHeight({i, stage}, out.y[i]);
  }
  return out;
}

GraphState advance(const GraphState& s, double dt, Scheme scheme) {
  if (scheme == Scheme::euler) {
    GraphState out = axpy(s, dt, stage_speed(s, 1), 1);
    out.t = s.t + dt;
    return out;
  }
  const auto k1 = stage_speed(s, 1);
  const auto k2 = stage_speed(axpy(s, 0.5 * dt, k1, 1), 2);
  const auto k3 = stage_speed(axpy(s, 0.5 * dt, k2, 2), 3);
  const auto k4 = stage_speed(axpy(s, dt, k3, 3), 4);
  std::vector<double> incr(s.y.size());
  for (std::size_t i = 0; i < incr.size(); ++i) incr[i] = (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]) / 6.0;
  GraphState out = axpy(s, dt, incr, 4);
  out.t = s.t + dt;
  return out;
}

}  // namespace

GraphState step(const GraphState& state, double dt, Scheme scheme) {
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw std::invalid_argument("step size must be finite and >= 0");
  if (dt == 0.0) return state;
  const double limit = stable_dt(state, 1.0);
  if (dt > limit * (1.0 + 1e-12))
    throw std::invalid_argument("step size exceeds the explicit stability bound");
  return advance(state, dt, scheme);
}

Trajectory evolve(const GraphState& initial, const FlowConfig& config) {
  config.validate();
  initial.grid.validate();
  if (initial.y.size() != initial.grid.size()) throw InvalidConfig("state size does not match grid");
  if (initial.t > config.t_end) throw InvalidConfig("initial time is past t_end");

  Trajectory traj;
  traj.grid = initial.grid;

  std::vector<double> snaps;
  for (double s : config.snapshot_times)
    if (s >= initial.t && s <= config.t_end) snaps.push_back(s);
  std::sort(snaps.begin(), snaps.end());
  snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());
  std::size_t next_snap = 0;

  GraphState current = initial;
  bool current_recorded = false;
  auto record = [&](const GraphState& s) {
    traj.samples.push_back(compute_monitors(s));
    current_recorded = true;
  };

  try {
    record(current);
    if (next_snap < snaps.size() && snaps[next_snap] == current.t) {
      traj.snapshots.push_back(current);
      ++next_snap;
    }
    while (current.t < config.t_end) {
      if (traj.steps >= config.max_steps) {
        traj.termination = Termination::max_steps;
        traj.diagnostic = "reached max_steps at t=" + std::to_string(current.t);
        break;
      }
      const double target = next_snap < snaps.size() ? snaps[next_snap] : config.t_end;
      double dt = stable_dt(current, config.safety);
      const double remaining = target - current.t;
      bool lands = false;
      if (remaining <= dt) {
        dt = remaining;
        lands = true;
      } else if (remaining < 2.0 * dt) {
        dt = 0.5 * remaining;
      }
      GraphState next = advance(current, dt, config.scheme);
      if (lands) next.t = target;
      current = std::move(next);
      current_recorded = false;
      ++traj.steps;

      if (traj.steps % config.sample_stride == 0 || current.t >= config.t_end) record(current);
      if (lands && next_snap < snaps.size() && target == snaps[next_snap]) {
        traj.snapshots.push_back(current);
        ++next_snap;
      }
    }
  } catch (const LostMeanConvexity& e) {
    traj.termination = Termination::lost_mean_convexity;
    traj.diagnostic = e.what();
  } catch (const NonPositiveHeight& e) {
    traj.termination = Termination::height_nonpositive;
    traj.diagnostic = e.what();
  }
  if (traj.termination != Termination::completed && !current_recorded) {
    try {
      record(current);
    } catch (const Error&) {
      // last state is not even evaluable; keep the prefix
    }
  }
  return traj;
}

}  // namespace imcf
