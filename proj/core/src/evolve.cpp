#include "sector_blowup/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sector_blowup/numerics.hpp"

namespace sector_blowup {

namespace {

// Sup norm refined past the grid: cubic interpolation around the nodal
// argmax, so a maximum drifting between nodes does not make the norm
// oscillate at O(h^2).
double refined_linf(const ThetaField& f) {
  const auto& v = f.values();
  std::size_t imax = 0;
  double best = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > best) {
      best = std::abs(v[i]);
      imax = i;
    }
  }
  const double L = f.grid().half_angle();
  const double h = f.grid().spacing();
  const double c = f.grid().node(imax);
  for (int k = -16; k <= 16; ++k) {
    const double theta = std::clamp(c + k * h / 16.0, -L, L);
    best = std::max(best, std::abs(f.value_at(theta)));
  }
  return best;
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

// Right sides of the method-of-lines system for given raw stage values.
void eval_rhs(const AngularGrid& grid, const std::vector<double>& gv,
              const std::vector<double>& Pv, const StreamSolution& stream,
              std::vector<double>& dg, std::vector<double>& dP) {
  const std::size_t n = grid.size();
  const ThetaField gf(grid, gv, Parity::Odd);
  const ThetaField Pf(grid, Pv, Parity::Even);
  const ThetaField gth = gf.derivative();
  const ThetaField Pth = Pf.derivative();
  dg.resize(n);
  dP.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double th = grid.node(i);
    const double G = stream.G[i];
    dg[i] = -2.0 * G * gth[i] + std::sin(th) * Pv[i] + std::cos(th) * Pth[i];
    dP[i] = -2.0 * G * Pth[i] + Pv[i] * stream.Gp[i];
  }
  dg[0] = 0.0;  // odd: theta = 0 is pinned
}

std::vector<double> axpy(const std::vector<double>& y, double a,
                         const std::vector<double>& k) {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + a * k[i];
  return out;
}

// Comparison constant for the quadratic minorant system at one diagnostics
// row: the boundary-gap rate of the P(L) trace and the strain-over-mass
// ratio, whichever is smaller.
double comparison_constant(const DiagnosticsRow& r, double L) {
  double c = r.g_l1 > 0.0 ? r.Gp_at_L / r.g_l1 : mass_bound_constant(L);
  if (r.P_at_L > 0.0) {
    c = std::min(c, (r.P_at_L / std::sqrt(2.0) - r.P_at_0) / r.P_at_L);
  }
  return c;
}

}  // namespace

State1D init_state(const ThetaField& g0, const ThetaField& P0) {
  if (g0.parity() != Parity::Odd) {
    throw std::invalid_argument("init_state: g must carry the odd parity tag");
  }
  if (P0.parity() != Parity::Even) {
    throw std::invalid_argument("init_state: P must carry the even parity tag");
  }
  if (!(g0.grid() == P0.grid())) {
    throw std::invalid_argument("init_state: g and P must share a grid");
  }
  return State1D{0.0, g0, P0, solve_stream_numerov(g0)};
}

HypothesisReport hypothesis_report(const State1D& s) {
  const SignReport r = check_signs(s);
  const double scale =
      std::max(1.0, s.g.max_abs() + s.P.max_abs());
  const double tol = 1e-10 * scale;
  HypothesisReport h;
  h.g_nonneg_increasing = r.min_g >= -tol && r.min_gp >= -tol;
  h.P_sign_structure = r.min_P >= -tol && r.min_Pp >= -tol && r.min_PplusPpp >= -tol;
  const std::size_t last = s.P.grid().size() - 1;
  h.boundary_gap = s.P[last] > std::sqrt(2.0) * s.P[0];
  return h;
}

SignReport check_signs(const State1D& s) {
  const ThetaField gp = s.g.derivative();
  const ThetaField Pp = s.P.derivative();
  const ThetaField Ppp = Pp.derivative();
  SignReport r;
  r.min_g = r.min_gp = r.min_P = r.min_Pp = r.min_PplusPpp =
      std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.g.grid().size(); ++i) {
    r.min_g = std::min(r.min_g, s.g[i]);
    r.min_gp = std::min(r.min_gp, gp[i]);
    r.min_P = std::min(r.min_P, s.P[i]);
    r.min_Pp = std::min(r.min_Pp, Pp[i]);
    r.min_PplusPpp = std::min(r.min_PplusPpp, s.P[i] + Ppp[i]);
  }
  return r;
}

State1D step(const State1D& s, double dt) {
  const AngularGrid& grid = s.g.grid();
  const std::vector<double>& g0 = s.g.values();
  const std::vector<double>& P0 = s.P.values();

  std::vector<double> kg1, kP1, kg2, kP2, kg3, kP3, kg4, kP4;
  eval_rhs(grid, g0, P0, s.stream, kg1, kP1);

  auto stage = [&](double a, const std::vector<double>& kg,
                   const std::vector<double>& kP, std::vector<double>& og,
                   std::vector<double>& oP) {
    std::vector<double> gs = axpy(g0, a * dt, kg);
    std::vector<double> Ps = axpy(P0, a * dt, kP);
    gs[0] = 0.0;
    const StreamSolution st = solve_stream_numerov(ThetaField(grid, gs, Parity::Odd));
    eval_rhs(grid, gs, Ps, st, og, oP);
  };
  stage(0.5, kg1, kP1, kg2, kP2);
  stage(0.5, kg2, kP2, kg3, kP3);
  stage(1.0, kg3, kP3, kg4, kP4);

  const std::size_t n = grid.size();
  std::vector<double> gn(n), Pn(n);
  for (std::size_t i = 0; i < n; ++i) {
    gn[i] = g0[i] + dt / 6.0 * (kg1[i] + 2.0 * kg2[i] + 2.0 * kg3[i] + kg4[i]);
    Pn[i] = P0[i] + dt / 6.0 * (kP1[i] + 2.0 * kP2[i] + 2.0 * kP3[i] + kP4[i]);
  }
  gn[0] = 0.0;
  ThetaField gf(grid, std::move(gn), Parity::Odd);
  StreamSolution st = solve_stream_numerov(gf);
  return State1D{s.t + dt, std::move(gf), ThetaField(grid, std::move(Pn), Parity::Even),
                 std::move(st)};
}

double balance_rhs(const State1D& s) {
  const AngularGrid& grid = s.g.grid();
  const double L = grid.half_angle();
  const std::size_t n = grid.size();
  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i) {
    integrand[i] = std::sin(grid.node(i)) * s.P[i];
  }
  const BoundaryDerivatives bd = gprime_boundary(s.g);
  return 2.0 * integrate_uniform(integrand, grid.spacing()) +
         s.P[n - 1] * std::cos(L) - s.P[0] + bd.at_L * bd.at_L -
         bd.at_zero * bd.at_zero;
}

RunResult run(const State1D& s0, const RunConfig& cfg) {
  RunResult res{RunHalt::Completed, s0, {}, {}, 0.0};
  const AngularGrid& grid = s0.g.grid();
  const double L = grid.half_angle();
  const double h = grid.spacing();
  const double scale0 = std::max(1.0, s0.g.max_abs() + s0.P.max_abs());
  const double cap = cfg.blowup_cap * scale0;

  std::vector<double> rhs_store;
  auto emit = [&](const State1D& s, double dt_used) {
    const SignReport sr = check_signs(s);
    const BoundaryDerivatives bd = gprime_boundary(s.g);
    DiagnosticsRow r;
    r.t = s.t;
    r.dt = dt_used;
    r.g_linf = refined_linf(s.g);
    r.g_l1 = s.g.integral();
    r.P_at_L = s.P[grid.size() - 1];
    r.P_at_0 = s.P[0];
    r.Gp_at_L = bd.at_L;
    r.Gp_at_0 = bd.at_zero;
    r.blowup_functional = r.g_l1 * std::sqrt(std::max(r.P_at_L, 0.0));
    r.min_g = sr.min_g;
    r.min_gp = sr.min_gp;
    r.min_P = sr.min_P;
    r.min_Pp = sr.min_Pp;
    r.min_PplusPpp = sr.min_PplusPpp;
    r.balance_residual = 0.0;
    res.diagnostics.push_back(r);
    res.comparison_c.push_back(comparison_constant(r, L));
    rhs_store.push_back(balance_rhs(s));
  };

  State1D state = s0;
  double dt = 0.0;
  auto cfl_dt = [&](const State1D& s) {
    double d = cfg.cfl * h / std::max(1.0, 2.0 * s.stream.G.max_abs());
    if (cfg.dt_init > 0.0) d = std::min(d, cfg.dt_init);
    return d;
  };

  emit(state, cfl_dt(state));
  res.halt = RunHalt::Completed;
  for (std::size_t k = 0; k < cfg.max_steps && state.t < cfg.t_end; ++k) {
    dt = std::min(cfl_dt(state), cfg.t_end - state.t);
    if (dt < cfg.dt_min) {
      res.halt = RunHalt::StepCollapse;
      break;
    }
    State1D next = step(state, dt);
    if (!all_finite(next.g.values()) || !all_finite(next.P.values())) {
      res.halt = RunHalt::BlowupSuspected;
      break;
    }
    state = std::move(next);
    if ((k + 1) % cfg.output_stride == 0) emit(state, dt);
    if (refined_linf(state.g) > cap) {
      if (res.diagnostics.back().t < state.t) emit(state, dt);
      res.halt = RunHalt::BlowupDetected;
      break;
    }
  }
  if (res.halt == RunHalt::Completed && res.diagnostics.back().t < state.t) {
    emit(state, dt);
  }
  res.final_state = std::move(state);

  // Balance residual: 5-point time differencing of the mass column against
  // the stored identity right side.
  const std::size_t m = res.diagnostics.size();
  if (m >= 5) {
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t lo = std::min(std::max<std::size_t>(i, 2) - 2, m - 5);
      std::vector<double> ts(5), as(5);
      for (std::size_t j = 0; j < 5; ++j) {
        ts[j] = res.diagnostics[lo + j].t;
        as[j] = res.diagnostics[lo + j].g_l1;
      }
      const std::vector<double> w = fd_weights(res.diagnostics[i].t, ts, 1);
      double lhs = 0.0;
      for (std::size_t j = 0; j < 5; ++j) lhs += w[j] * as[j];
      res.diagnostics[i].balance_residual = std::abs(lhs - rhs_store[i]);
    }
  }

  res.comparison_c_min = std::numeric_limits<double>::infinity();
  for (double c : res.comparison_c) {
    if (std::isfinite(c)) res.comparison_c_min = std::min(res.comparison_c_min, c);
  }
  if (!std::isfinite(res.comparison_c_min)) res.comparison_c_min = 0.0;
  return res;
}

BoundaryOdeResiduals boundary_ode_residual(const std::vector<DiagnosticsRow>& diag) {
  const std::size_t m = diag.size();
  if (m < 3) {
    throw std::invalid_argument("boundary_ode_residual: need at least 3 rows");
  }
  // Skip the last 5% of rows; near blow-up the traces steepen beyond the
  // output cadence and time differencing is meaningless there.
  const std::size_t usable = std::max<std::size_t>(3, m - std::max<std::size_t>(1, m / 20));
  const std::size_t win = std::min<std::size_t>(5, usable);
  BoundaryOdeResiduals res{0.0, 0.0};
  for (std::size_t i = 0; i < usable; ++i) {
    const std::size_t lo = std::min(std::max<std::size_t>(i, win / 2) - win / 2,
                                    usable - win);
    std::vector<double> ts(win), pl(win), p0(win);
    for (std::size_t j = 0; j < win; ++j) {
      ts[j] = diag[lo + j].t;
      pl[j] = diag[lo + j].P_at_L;
      p0[j] = diag[lo + j].P_at_0;
    }
    const std::vector<double> w = fd_weights(diag[i].t, ts, 1);
    double dL = 0.0, d0 = 0.0;
    for (std::size_t j = 0; j < win; ++j) {
      dL += w[j] * pl[j];
      d0 += w[j] * p0[j];
    }
    res.at_L = std::max(res.at_L, std::abs(dL - diag[i].Gp_at_L * diag[i].P_at_L));
    res.at_zero = std::max(res.at_zero, std::abs(d0 - diag[i].Gp_at_0 * diag[i].P_at_0));
  }
  return res;
}

std::optional<BlowupFit> estimate_blowup_time(const std::vector<DiagnosticsRow>& diag) {
  double peak = 0.0;
  for (const auto& r : diag) peak = std::max(peak, r.g_linf);
  if (peak <= 0.0) return std::nullopt;
  // A reciprocal fit only means something once the run shows real growth:
  // two decades above the initial scale, not just drift.
  if (peak < 100.0 * std::max(1.0, diag.front().g_linf)) return std::nullopt;
  std::vector<double> ts, ys;
  for (const auto& r : diag) {
    if (r.g_linf >= peak / 10.0 && r.g_linf > 0.0) {
      ts.push_back(r.t);
      ys.push_back(1.0 / r.g_linf);
    }
  }
  if (ts.size() < 10) return std::nullopt;
  for (std::size_t i = 1; i < ys.size(); ++i) {
    if (ys[i] > ys[i - 1]) return std::nullopt;  // non-monotone tail
  }
  const std::size_t n = ts.size();
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    st += ts[i];
    sy += ys[i];
    stt += ts[i] * ts[i];
    sty += ts[i] * ys[i];
  }
  const double det = n * stt - st * st;
  if (det == 0.0) return std::nullopt;
  const double c1 = (n * sty - st * sy) / det;
  const double c0 = (sy * stt - st * sty) / det;
  if (c1 >= 0.0) return std::nullopt;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (c0 + c1 * ts[i]);
    ss += r * r;
  }
  return BlowupFit{-c0 / c1, std::sqrt(ss / n) / std::abs(c1)};
}

StabilityResult stability_probe(const State1D& base, double eps, double window) {
  if (eps > 0.25) {
    throw std::invalid_argument("stability_probe: eps must be at most 1/4");
  }
  if (eps == 0.0) return {true, 0.0};
  const AngularGrid& grid = base.g.grid();
  const double L = grid.half_angle();
  const double h = grid.spacing();

  // Twin at C^0 x C^1 distance eps from base, split evenly between the
  // components and parity-compatible.
  const double aP = (eps / 2.0) / (1.0 + M_PI / L);
  std::vector<double> gv = base.g.values(), Pv = base.P.values();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double th = grid.node(i);
    gv[i] += (eps / 2.0) * std::sin(M_PI * th / L);
    Pv[i] += aP * std::cos(M_PI * th / L);
  }
  gv[0] = base.g[0];
  State1D twin = init_state(ThetaField(grid, std::move(gv), Parity::Odd),
                            ThetaField(grid, std::move(Pv), Parity::Even));

  State1D a = base;
  State1D b = std::move(twin);
  const double scale0 = std::max(1.0, a.g.max_abs() + a.P.max_abs());
  double ratio = 0.0;
  auto measure = [&]() {
    const ThetaField dPa = a.P.derivative();
    const ThetaField dPb = b.P.derivative();
    double dg = 0.0, dP = 0.0, dPp = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      dg = std::max(dg, std::abs(a.g[i] - b.g[i]));
      dP = std::max(dP, std::abs(a.P[i] - b.P[i]));
      dPp = std::max(dPp, std::abs(dPa[i] - dPb[i]));
    }
    ratio = std::max(ratio, (dg + dP + dPp) / eps);
  };
  measure();
  while (a.t < window) {
    const double speed = std::max(1.0, 2.0 * std::max(a.stream.G.max_abs(),
                                                      b.stream.G.max_abs()));
    const double dt = std::min(0.5 * h / speed, window - a.t);
    if (dt < 1e-10) return {false, ratio};
    a = step(a, dt);
    b = step(b, dt);
    if (!all_finite(a.g.values()) || !all_finite(b.g.values()) ||
        a.g.max_abs() > 1e6 * scale0 || b.g.max_abs() > 1e6 * scale0) {
      return {false, ratio};
    }
    measure();
  }
  return {true, ratio};
}

}  // namespace sector_blowup
