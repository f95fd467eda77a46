#include "sector_blowup/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <optional>

#include "sector_blowup/angular.hpp"
#include "sector_blowup/elliptic.hpp"
#include "sector_blowup/evolve.hpp"
#include "sector_blowup/ode_blowup.hpp"
#include "sector_blowup/presets.hpp"
#include "sector_blowup/sector_green.hpp"

namespace sector_blowup {
namespace {

std::string num(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.6g", v);
  return b;
}

void add(SuiteResult& s, const std::string& name, bool pass,
         const std::string& detail) {
  s.checks.push_back({name, pass, detail});
}

double wall_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

RunResult blowup_run(std::size_t n) {
  auto grid = make_grid(M_PI / 4.0, n);
  auto pre = make_preset_1d("blowup_quadratic", grid);
  RunConfig cfg;
  cfg.t_end = 10.0;
  cfg.output_stride = 10;
  return run(init_state(pre.g0, pre.P0), cfg);
}

}  // namespace

SuiteResult verify_blowup_run(int) {
  SuiteResult s{"blowup_run", {}};
  const auto t0 = std::chrono::steady_clock::now();
  const RunResult coarse = blowup_run(513);
  add(s, "detects_blowup", coarse.halt == RunHalt::BlowupDetected,
      "halt=" + num(static_cast<double>(coarse.halt)) +
          " t_final=" + num(coarse.final_state.t));

  // Growth of the functional ||g||_1 sqrt(P(L)) against its first positive
  // recorded value (it starts at exactly zero for this data).
  double baseline = 0.0, peak = 0.0;
  for (const auto& r : coarse.diagnostics) {
    if (baseline == 0.0 && r.blowup_functional > 0.0)
      baseline = r.blowup_functional;
    peak = std::max(peak, r.blowup_functional);
  }
  const bool grew = baseline > 0.0 && peak >= 100.0 * baseline;
  add(s, "functional_growth_100x", grew,
      "baseline=" + num(baseline) + " peak=" + num(peak));

  const auto fit_c = estimate_blowup_time(coarse.diagnostics);
  const RunResult fine = blowup_run(1025);
  const auto fit_f = estimate_blowup_time(fine.diagnostics);
  bool agree = false;
  std::string det = "fit unavailable";
  if (fit_c && fit_f) {
    const double rel = std::fabs(fit_c->t_star - fit_f->t_star) / fit_f->t_star;
    agree = rel <= 0.05;
    det = "T513=" + num(fit_c->t_star) + " T1025=" + num(fit_f->t_star) +
          " rel=" + num(rel);
  }
  add(s, "grid_agreement_5pct", agree, det);

  const double wall = wall_since(t0);
  add(s, "wall_time_under_120s", wall <= 120.0, "wall=" + num(wall) + "s");
  return s;
}

SuiteResult verify_sign_structure(int) {
  SuiteResult s{"sign_structure", {}};
  // The transport structure preserves g, g', P, P', P + P'' >= 0. Walk the
  // blow-up run and compare each minimum against a running sup-norm scale of
  // the same quantity. The time loop mirrors the production stepper: CFL
  // dt = h/2 / max(1, 2||G||_inf), sampled every 10 steps.
  auto grid = make_grid(M_PI / 4.0, 513);
  auto pre = make_preset_1d("blowup_quadratic", grid);
  State1D state = init_state(pre.g0, pre.P0);
  const double h = grid.spacing();
  const double cap = 1e6;
  const double tol_rel = 1e-8;

  double scale[5] = {1.0, 1.0, 1.0, 1.0, 1.0};
  double worst_rel = 0.0;
  double first_violation = -1.0, worst_t = 0.0;
  int worst_q = -1;
  static const char* qname[5] = {"g", "g'", "P", "P'", "P+P''"};

  auto inspect = [&](const State1D& st) {
    const ThetaField gp = st.g.derivative();
    const ThetaField Pp = st.P.derivative();
    const ThetaField Ppp = Pp.derivative();
    std::vector<const std::vector<double>*> qs = {&st.g.values(), &gp.values(),
                                                  &st.P.values(), &Pp.values(),
                                                  nullptr};
    std::vector<double> sum(st.P.values().size());
    for (std::size_t i = 0; i < sum.size(); ++i)
      sum[i] = st.P[i] + Ppp[i];
    qs[4] = &sum;
    for (int q = 0; q < 5; ++q) {
      double mn = 1e300, mx = 0.0;
      for (double v : *qs[q]) {
        mn = std::min(mn, v);
        mx = std::max(mx, std::fabs(v));
      }
      scale[q] = std::max(scale[q], mx);
      const double rel = mn / scale[q];
      if (rel < worst_rel) {
        worst_rel = rel;
        worst_t = st.t;
        worst_q = q;
      }
      if (mn < -tol_rel * scale[q] && first_violation < 0.0)
        first_violation = st.t;
    }
  };

  inspect(state);
  for (std::size_t k = 0; k < 50'000'000 && state.t < 10.0; ++k) {
    const double dt =
        std::min(0.5 * h / std::max(1.0, 2.0 * state.stream.G.max_abs()),
                 10.0 - state.t);
    if (dt < 1e-10) break;
    state = step(state, dt);
    if ((k + 1) % 10 == 0) inspect(state);
    if (state.g.max_abs() > cap) break;
  }
  inspect(state);

  std::string det = "worst_rel_min=" + num(worst_rel) +
                    (worst_q >= 0 ? std::string(" (") + qname[worst_q] +
                                        " at t=" + num(worst_t) + ")"
                                  : "") +
                    " t_end=" + num(state.t);
  if (first_violation >= 0.0) det += " first_violation_t=" + num(first_violation);
  add(s, "minima_nonnegative_along_run", first_violation < 0.0, det);
  return s;
}

SuiteResult verify_riccati_domination(int) {
  SuiteResult s{"riccati_domination", {}};
  const RunResult res = blowup_run(513);
  const auto& d = res.diagnostics;
  const double c = res.comparison_c_min;
  add(s, "comparison_constant_positive", c > 0.0, "c_min=" + num(c));

  RiccatiState r0{0.0, d.front().g_l1, d.front().P_at_L, c};
  const RiccatiTrajectory ric = integrate_riccati(r0, d.back().t, 1e-10);
  std::size_t j = 0;
  double worst_a = 1e300, worst_b = 1e300;
  for (const auto& row : d) {
    while (j + 1 < ric.t.size() && ric.t[j + 1] < row.t) ++j;
    if (j + 1 >= ric.t.size()) break;
    const double w = (row.t - ric.t[j]) / (ric.t[j + 1] - ric.t[j]);
    const double A = ric.A[j] + w * (ric.A[j + 1] - ric.A[j]);
    const double B = ric.B[j] + w * (ric.B[j + 1] - ric.B[j]);
    worst_a = std::min(worst_a, (row.g_l1 - A) / std::max(1.0, A));
    worst_b = std::min(worst_b, (row.P_at_L - B) / std::max(1.0, B));
  }
  const double slack = -1e-9;
  add(s, "mass_dominates_comparison_A", worst_a >= slack,
      "worst_margin=" + num(worst_a));
  add(s, "boundary_dominates_comparison_B", worst_b >= slack,
      "worst_margin=" + num(worst_b));
  return s;
}

SuiteResult verify_riccati_exact(int) {
  SuiteResult s{"riccati_exact", {}};
  const double rtol = 1e-8;
  const double exact = M_PI / std::sqrt(2.0);
  const auto closed = riccati_blowup_time(1.0, 0.0, 1.0);
  add(s, "closed_form_pi_over_sqrt2",
      closed && std::fabs(*closed - exact) < 1e-12,
      closed ? "T=" + num(*closed) : "no blow-up");

  const RiccatiTrajectory tr = integrate_riccati({0.0, 0.0, 1.0, 1.0}, 10.0, rtol);
  const bool blew = tr.halt == OdeHalt::BlowupDetected;
  // 5 significant digits of 2.2214...: agreement to half a unit in the 5th
  // significant place.
  const double err = blew ? std::fabs(tr.blowup_time - exact) : 1e300;
  add(s, "integrated_time_5_digits", blew && err <= 5e-5,
      "T=" + num(blew ? tr.blowup_time : -1.0) + " err=" + num(err));
  add(s, "invariant_drift_bounded", tr.invariant_drift() <= 10.0 * rtol,
      "drift=" + num(tr.invariant_drift()));

  add(s, "finite_branch_is_finite", !riccati_blowup_time(1.0, -1.0, 0.5).has_value(),
      "A0=-1 B0=1/2 stays finite");
  return s;
}

SuiteResult verify_corner_ode(int) {
  SuiteResult s{"corner_ode", {}};
  const double rtol = 1e-8;
  const CornerState c0{0.0, 1.0, -1.0, 1.0, 0.25};
  const CornerTrajectory a = integrate_corner(c0, 50.0, rtol);
  const CornerTrajectory b = integrate_corner(c0, 50.0, rtol / 10.0);

  const bool both_blow = a.halt == OdeHalt::BlowupDetected &&
                         b.halt == OdeHalt::BlowupDetected;
  add(s, "finite_time_blowup", both_blow,
      "T=" + num(a.blowup_time) + " T_fine=" + num(b.blowup_time));
  const double rel = both_blow ? std::fabs(a.blowup_time - b.blowup_time) /
                                     b.blowup_time
                               : 1.0;
  add(s, "tolerance_reproducibility_4_digits", both_blow && rel <= 1e-4,
      "blowup_time_rel_diff=" + num(rel));

  const CornerInvariantDrift drift = corner_invariants(a);
  add(s, "quadratic_invariant_drift", drift.quadratic <= 10.0 * rtol,
      "drift=" + num(drift.quadratic));
  add(s, "energy_invariant_drift", drift.energy <= 10.0 * rtol,
      "drift=" + num(drift.energy));
  return s;
}

SuiteResult verify_stream_solvers(int) {
  SuiteResult s{"stream_solvers", {}};
  // g = sin(2 theta) on L = pi/4 has the closed form G = -(theta/4) cos(2 theta).
  auto exact_err = [](std::size_t n, int solver) {
    auto grid = make_grid(M_PI / 4.0, n);
    auto g = ThetaField::sample(grid, Parity::Odd,
                                [](double t) { return std::sin(2.0 * t); });
    const StreamSolution sol = solver == 0   ? solve_stream_fd(g)
                               : solver == 1 ? solve_stream_numerov(g)
                                             : solve_stream_kernel(g);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = grid.node(i);
      err = std::max(err, std::fabs(sol.G[i] + t / 4.0 * std::cos(2.0 * t)));
    }
    return err;
  };
  const double e1 = exact_err(129, 0), e2 = exact_err(257, 0),
               e3 = exact_err(513, 0);
  const double r12 = e1 / e2, r23 = e2 / e3;
  add(s, "fd_second_order", r12 >= 3.4 && r23 >= 3.4,
      "errors=" + num(e1) + "," + num(e2) + "," + num(e3) + " ratios=" +
          num(r12) + "," + num(r23));
  const double n2 = exact_err(257, 1), n3 = exact_err(513, 1);
  add(s, "numerov_beats_fd", n2 < e2 && n3 < e3,
      "numerov errors=" + num(n2) + "," + num(n3));
  const double k1 = exact_err(129, 2), k2 = exact_err(257, 2);
  add(s, "kernel_at_least_second_order", k1 / k2 >= 3.4 && k2 <= 1e-7,
      "kernel errors=" + num(k1) + "," + num(k2) + " ratio=" + num(k1 / k2));

  auto grid = make_grid(M_PI / 4.0, 513);
  auto g = ThetaField::sample(grid, Parity::Odd,
                              [](double t) { return std::sin(2.0 * t); });
  const BoundaryDerivatives bd = gprime_boundary(g);
  const double err0 = std::fabs(bd.at_zero + 0.25);
  const double errL = std::fabs(bd.at_L - M_PI / 8.0);
  add(s, "boundary_derivatives_exact", err0 <= 1e-8 && errL <= 1e-8,
      "err0=" + num(err0) + " errL=" + num(errL));
  return s;
}

SuiteResult verify_poisson_closed_form(int threads) {
  SuiteResult s{"poisson_closed_form", {}};
  // For the quarter-sector with unit source the solution is the explicit
  // quadratic (x2^2 - x1 x2)/2, whose Laplacian is 1.
  SectorSpec spec(0.25);
  QuadratureSpec quad;
  quad.threads = threads;
  const auto f = make_sector_preset("constant_one", 0.25);
  std::vector<std::complex<double>> targets;
  const double open = spec.opening();
  for (int i = 0; i < 10; ++i) {
    const double r = 0.3 + 0.12 * i;
    const double th = open * (0.15 + 0.08 * (i % 5) + 0.02 * (i / 5));
    targets.push_back(std::polar(r, th));
  }
  const auto psi = poisson_solve(spec, f, quad, targets);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double x1 = targets[i].real(), x2 = targets[i].imag();
    const double exact = (x2 * x2 - x1 * x2) / 2.0;
    worst = std::max(worst, std::fabs(psi[i] - exact) /
                                std::max(1e-3, std::fabs(exact)));
  }
  add(s, "quadratic_closed_form_1e3", worst <= 1e-3, "worst_rel=" + num(worst));

  double worst_tr = 0.0;
  for (int i : {1, 4, 8}) {
    const HessianPsi H = hessian_psi(spec, f, quad, targets[i]);
    worst_tr = std::max(worst_tr, std::fabs(H.trace() - 1.0));
  }
  add(s, "hessian_trace_matches_source", worst_tr <= 1e-3,
      "worst_err=" + num(worst_tr));
  return s;
}

SuiteResult verify_mass_balance(int) {
  SuiteResult s{"mass_balance", {}};
  const double reference = 0.61374;
  auto grid = make_grid(M_PI / 4.0, 513);
  auto pre = make_preset_1d("blowup_quadratic", grid);
  const State1D s0 = init_state(pre.g0, pre.P0);
  const double dt = 0.5 * grid.spacing();
  const State1D s1 = step(s0, dt);
  const double lhs = (s1.g.integral() - s0.g.integral()) / dt;
  const double rel = std::fabs(lhs - reference) / reference;
  add(s, "initial_mass_rate_1pct", rel <= 0.01,
      "measured=" + num(lhs) + " rel=" + num(rel));

  // Residual of the identity along an early, well-resolved window must
  // converge at the order of the scheme (dt halves with h, so 2^4 with RK4).
  auto window_residual = [](std::size_t n) {
    auto g = make_grid(M_PI / 4.0, n);
    auto p = make_preset_1d("blowup_quadratic", g);
    RunConfig cfg;
    cfg.t_end = 1.5;
    cfg.output_stride = 1;
    const RunResult res = run(init_state(p.g0, p.P0), cfg);
    double worst = 0.0;
    for (const auto& r : res.diagnostics)
      if (r.t > 0.1 && r.t < 1.4) worst = std::max(worst, r.balance_residual);
    return worst;
  };
  const double rc = window_residual(257), rf = window_residual(513);
  add(s, "residual_small_on_fine_grid", rf <= 1e-8, "residual=" + num(rf));
  add(s, "residual_scheme_order", rc / rf >= 8.0,
      "coarse=" + num(rc) + " fine=" + num(rf) + " ratio=" + num(rc / rf));
  return s;
}

SuiteResult verify_holder_scaling(int threads) {
  SuiteResult s{"holder_scaling", {}};
  const double beta = 0.4, alpha = 0.5;
  SectorSpec spec(beta);
  const double open = spec.opening();
  QuadratureSpec quad;
  quad.threads = threads;
  quad.radial_panels = 32;
  quad.angular_panels = 10;
  quad.gauss_order = 6;
  quad.singular_depth = 10;

  // Scale-invariant norm of the mixed second derivative against the source:
  // the ratio must stay bounded under refinement for regular sources.
  for (const char* name : {"constant_one", "homogeneous_half", "bump"}) {
    const auto f = make_sector_preset(name, beta);
    double worst_ratio = 0.0;
    for (int lev = 0; lev < 3; ++lev) {
      const double h = (1.0 / 24.0) / std::pow(2.0, lev);
      PlanarSample fs, hs;
      fs.alpha = hs.alpha = alpha;
      for (int ia = 0; ia < 7; ++ia) {
        const double th = open * (0.08 + 0.84 * ia / 6.0);
        for (double r = 0.35; r >= h * 0.999; r /= std::sqrt(2.0)) {
          const double x1 = r * std::cos(th), x2 = r * std::sin(th);
          const HessianPsi H = hessian_psi(spec, f, quad, {x1, x2});
          fs.x1.push_back(x1);
          fs.x2.push_back(x2);
          fs.values.push_back(f(r, th));
          hs.x1.push_back(x1);
          hs.x2.push_back(x2);
          hs.values.push_back(H.h12);
        }
      }
      const double ratio = ring_holder_norm(hs, 0, nullptr, threads) /
                           ring_holder_norm(fs, 0, nullptr, threads);
      worst_ratio = std::max(worst_ratio, ratio);
    }
    add(s, std::string("ratio_bounded_") + name, worst_ratio <= 4.0,
        "worst_ratio=" + num(worst_ratio));
  }

  // The explicit critical example: the mixed derivative's seminorm must grow
  // roughly linearly in the refinement level while the source stays flat.
  const CounterexampleProbe p = critical_counterexample_probe(beta, 4, threads);
  double min_inc = 1e300;
  for (std::size_t i = 1; i < p.mixed_seminorm.size(); ++i)
    min_inc = std::min(min_inc, p.mixed_seminorm[i] - p.mixed_seminorm[i - 1]);
  const double total = p.mixed_seminorm.back() - p.mixed_seminorm.front();
  add(s, "counterexample_seminorm_grows", min_inc >= 0.3 && total >= 1.5,
      "min_increment=" + num(min_inc) + " total_growth=" + num(total));
  auto spread = [](const std::vector<double>& v) {
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    return *mx / std::max(1e-300, *mn);
  };
  add(s, "counterexample_source_bounded",
      spread(p.source_seminorm) <= 1.5 && spread(p.subcritical_seminorm) <= 1.5,
      "source_spread=" + num(spread(p.source_seminorm)) +
          " subcritical_spread=" + num(spread(p.subcritical_seminorm)));
  return s;
}

SuiteResult verify_velocity_bounds(int threads) {
  SuiteResult s{"velocity_bounds", {}};
  QuadratureSpec quad;
  quad.threads = threads;
  quad.r_max = 4.0;
  quad.radial_panels = 32;
  quad.angular_panels = 10;
  quad.gauss_order = 6;
  const auto bump = [](double x1, double x2) {
    const double r2 = x1 * x1 + x2 * x2;
    return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
  };
  const double bound = symmetrized_velocity_bound(bump, 1.0, quad);
  add(s, "velocity_bound_at_most_one", bound <= 1.05, "bound=" + num(bound));

  const double alpha = 0.5;
  const auto compliant = [alpha](double x1, double x2) {
    const double r = std::hypot(x1, x2);
    return r < 1.0 ? std::pow(r, alpha) : 0.0;
  };
  const double probe = decay_probe(alpha, compliant, 1.0, quad);
  add(s, "decay_probe_bounded_for_compliant", probe <= 2.0,
      "sup_ratio=" + num(probe));

  // Control: a vorticity with no vanishing at the corner must break the
  // r^(1+alpha) decay, visible as a growing per-radius quotient.
  const auto flat = [](double x1, double x2) {
    return std::hypot(x1, x2) < 1.0 ? 1.0 : 0.0;
  };
  auto quotient = [&](double r) {
    const auto u = symmetrized_velocity(flat, 1.0, quad,
                                        {r / std::sqrt(2.0), r / std::sqrt(2.0)});
    return std::hypot(u[0], u[1]) / std::pow(r, 1.0 + alpha);
  };
  const double growth = quotient(1.0 / 16.0) / quotient(1.0);
  add(s, "decay_probe_detects_violation", growth >= 2.0,
      "quotient_growth=" + num(growth));
  return s;
}

SuiteResult verify_transport_conservation(int) {
  SuiteResult s{"transport_conservation", {}};
  // Stationary data g = sin(2 theta), P = 0: pure transport by its own
  // stream field conserves ||g||_inf exactly.
  auto grid = make_grid(M_PI / 4.0, 513);
  auto pre = make_preset_1d("euler_sin2theta", grid);
  RunConfig cfg;
  cfg.t_end = 5.0;
  cfg.output_stride = 50;
  const RunResult res = run(init_state(pre.g0, pre.P0), cfg);
  add(s, "run_completes", res.halt == RunHalt::Completed,
      "halt=" + num(static_cast<double>(res.halt)));
  double mn = 1e300, mx = 0.0, pmax = 0.0;
  for (const auto& r : res.diagnostics) {
    mn = std::min(mn, r.g_linf);
    mx = std::max(mx, r.g_linf);
    pmax = std::max({pmax, std::fabs(r.P_at_L), std::fabs(r.P_at_0)});
  }
  const double drift = (mx - mn) / std::max(1e-300, mx);
  add(s, "sup_norm_drift_1e4", drift <= 1e-4, "rel_drift=" + num(drift));
  add(s, "P_stays_zero", pmax <= 1e-12, "max|P|=" + num(pmax));
  return s;
}

std::vector<SuiteResult> verify_all(int threads) {
  return {verify_blowup_run(threads),
          verify_sign_structure(threads),
          verify_riccati_domination(threads),
          verify_riccati_exact(threads),
          verify_corner_ode(threads),
          verify_stream_solvers(threads),
          verify_poisson_closed_form(threads),
          verify_mass_balance(threads),
          verify_holder_scaling(threads),
          verify_velocity_bounds(threads),
          verify_transport_conservation(threads)};
}

}  // namespace sector_blowup
