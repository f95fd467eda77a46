// Command-line entry point: simulations, probes, and verification suites.
// Subcommands: sim1d, riccati, corner-ode, poisson, probe, verify.
// Exit codes: 0 success, 2 detected blow-up, 1 error.

#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sector_blowup/angular.hpp"
#include "sector_blowup/elliptic.hpp"
#include "sector_blowup/evolve.hpp"
#include "sector_blowup/io.hpp"
#include "sector_blowup/ode_blowup.hpp"
#include "sector_blowup/presets.hpp"
#include "sector_blowup/sector_green.hpp"
#include "sector_blowup/verify.hpp"

namespace sb = sector_blowup;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitBlowup = 2;

// Angles are accepted as plain literals ("0.6") or fractions of pi
// ("pi/4", "3pi/8", "pi"), parsed exactly so the L = pi/4 gate of the
// kernel solver is hit without rounding surprises.
double parse_angle(const std::string& text) {
  const auto pos = text.find("pi");
  if (pos == std::string::npos) {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("bad angle: " + text);
    return v;
  }
  double numerator = 1.0;
  if (pos > 0) {
    std::size_t used = 0;
    numerator = std::stod(text.substr(0, pos), &used);
    if (used != pos) throw std::invalid_argument("bad angle: " + text);
  }
  double denominator = 1.0;
  const std::string rest = text.substr(pos + 2);
  if (!rest.empty()) {
    if (rest[0] != '/') throw std::invalid_argument("bad angle: " + text);
    std::size_t used = 0;
    denominator = std::stod(rest.substr(1), &used);
    if (used != rest.size() - 1 || denominator == 0.0)
      throw std::invalid_argument("bad angle: " + text);
  }
  return numerator * M_PI / denominator;
}

// SECTOR_BLOWUP_OUT overrides the root that relative --out paths land in.
std::filesystem::path resolve_out(const std::string& out) {
  std::filesystem::path p(out);
  if (const char* root = std::getenv("SECTOR_BLOWUP_OUT");
      root && *root && p.is_relative()) {
    p = std::filesystem::path(root) / p;
  }
  std::filesystem::create_directories(p);
  return p;
}

void emit_summary(const std::filesystem::path& dir, const json& summary) {
  std::ofstream f(dir / "summary.json");
  f << summary.dump(2) << "\n";
  std::cout << summary.dump(2) << "\n";
}

struct Sim1dArgs {
  std::string angle = "pi/4";
  std::size_t grid = 513;
  std::string preset = "blowup_quadratic";
  std::string g0_path, P0_path;
  double t_end = 10.0, cfl = 0.5, dt_init = 0.0, dt_min = 1e-10,
         blowup_cap = 1e6;
  std::size_t stride = 10;
  std::string out = "run";
};

int run_sim1d(const Sim1dArgs& a) {
  const auto dir = resolve_out(a.out);
  const auto grid = sb::make_grid(parse_angle(a.angle), a.grid);
  sb::State1D s0 = [&] {
    if (!a.g0_path.empty() || !a.P0_path.empty()) {
      if (a.g0_path.empty() || a.P0_path.empty())
        throw std::invalid_argument("--g0 and --p0 must be given together");
      return sb::init_state(sb::read_theta_field(a.g0_path),
                            sb::read_theta_field(a.P0_path));
    }
    auto pre = sb::make_preset_1d(a.preset, grid);
    return sb::init_state(pre.g0, pre.P0);
  }();

  sb::RunConfig cfg;
  cfg.t_end = a.t_end;
  cfg.cfl = a.cfl;
  cfg.dt_init = a.dt_init;
  cfg.dt_min = a.dt_min;
  cfg.blowup_cap = a.blowup_cap;
  cfg.output_stride = a.stride;
  const sb::RunResult res = sb::run(s0, cfg);

  sb::write_diagnostics((dir / "diagnostics.csv").string(), res.diagnostics);
  sb::write_theta_field((dir / "final_g.csv").string(), res.final_state.g);
  sb::write_theta_field((dir / "final_P.csv").string(), res.final_state.P);

  const auto fit = sb::estimate_blowup_time(res.diagnostics);
  const bool blew = res.halt == sb::RunHalt::BlowupDetected;
  double max_resid = 0.0;
  for (const auto& r : res.diagnostics)
    max_resid = std::max(max_resid, r.balance_residual);

  json summary;
  summary["status"] = blew                                     ? "blowup_detected"
                      : res.halt == sb::RunHalt::Completed     ? "completed"
                      : res.halt == sb::RunHalt::StepCollapse  ? "step_collapse"
                                                               : "blowup_suspected";
  summary["t_final"] = res.final_state.t;
  summary["blowup_estimate"] =
      fit ? json(fit->t_star) : json(nullptr);
  summary["invariant_maxdrift"] = max_resid;
  summary["comparison_constant"] = res.comparison_c_min;
  emit_summary(dir, summary);
  return blew ? kExitBlowup : kExitOk;
}

struct RiccatiArgs {
  double c = 1.0, a0 = 0.0, b0 = 1.0, t_end = 10.0, rtol = 1e-8;
  std::string out = "riccati";
};

int run_riccati(const RiccatiArgs& a) {
  const auto dir = resolve_out(a.out);
  const sb::RiccatiTrajectory tr =
      sb::integrate_riccati({0.0, a.a0, a.b0, a.c}, a.t_end, a.rtol);
  sb::write_riccati_trajectory((dir / "trajectory.csv").string(), tr);
  const auto closed = sb::riccati_blowup_time(a.c, a.a0, a.b0);
  const bool blew = tr.halt == sb::OdeHalt::BlowupDetected;

  json summary;
  summary["status"] = blew ? "blowup_detected" : "completed";
  summary["t_final"] = tr.t.back();
  summary["blowup_estimate"] = blew ? json(tr.blowup_time) : json(nullptr);
  summary["blowup_time"] = closed ? json(*closed) : json(nullptr);
  summary["invariant_maxdrift"] = tr.invariant_drift();
  emit_summary(dir, summary);
  return blew ? kExitBlowup : kExitOk;
}

struct CornerArgs {
  double beta = 0.25, a0 = 1.0, b0 = -1.0, c0 = 1.0, t_end = 50.0,
         rtol = 1e-8;
  std::string out = "corner";
};

int run_corner(const CornerArgs& a) {
  const auto dir = resolve_out(a.out);
  const sb::CornerTrajectory tr =
      sb::integrate_corner({0.0, a.a0, a.b0, a.c0, a.beta}, a.t_end, a.rtol);
  sb::write_corner_trajectory((dir / "trajectory.csv").string(), tr);
  const sb::CornerInvariantDrift drift = sb::corner_invariants(tr);
  const bool blew = tr.halt == sb::OdeHalt::BlowupDetected;

  json summary;
  summary["status"] = blew ? "blowup_detected" : "completed";
  summary["t_final"] = tr.t.back();
  summary["blowup_estimate"] = blew ? json(tr.blowup_time) : json(nullptr);
  summary["invariant_maxdrift"] = std::max(drift.quadratic, drift.energy);
  emit_summary(dir, summary);
  return blew ? kExitBlowup : kExitOk;
}

struct PoissonArgs {
  double beta = 0.25;
  std::string preset = "constant_one";
  int nr = 6, ntheta = 4;
  double r_lo = 0.25, r_hi = 1.5;
  sb::QuadratureSpec quad;
  std::string out = "poisson";
};

int run_poisson(const PoissonArgs& a) {
  const auto dir = resolve_out(a.out);
  const sb::SectorSpec spec(a.beta);
  const auto f = sb::make_sector_preset(a.preset, a.beta);

  std::vector<std::complex<double>> targets;
  for (int i = 0; i < a.nr; ++i) {
    const double r = a.r_lo + (a.r_hi - a.r_lo) * i / std::max(1, a.nr - 1);
    for (int j = 0; j < a.ntheta; ++j) {
      const double th = spec.opening() * (j + 1) / (a.ntheta + 1);
      targets.push_back(std::polar(r, th));
    }
  }
  const auto psi = sb::poisson_solve(spec, f, a.quad, targets);
  std::vector<sb::SectorOutputRow> rows;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto g = sb::grad_psi(spec, f, a.quad, targets[i]);
    const auto H = sb::hessian_psi(spec, f, a.quad, targets[i]);
    rows.push_back({targets[i].real(), targets[i].imag(), psi[i],
                    -g[1], g[0], H.h11, H.h12, H.h22});
  }
  sb::write_sector_output((dir / "solution.csv").string(), rows);

  double worst_trace = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double fz =
        f(std::abs(targets[i]), std::arg(targets[i]));
    worst_trace = std::max(worst_trace,
                           std::fabs(rows[i].h11 + rows[i].h22 - fz));
  }
  json summary;
  summary["status"] = "completed";
  summary["t_final"] = nullptr;
  summary["blowup_estimate"] = nullptr;
  summary["invariant_maxdrift"] = worst_trace;
  summary["targets"] = targets.size();
  emit_summary(dir, summary);
  return kExitOk;
}

struct ProbeArgs {
  std::string kind = "corner";
  double beta = 0.25, alpha = 0.5, eps = 1e-4;
  int refinements = 4, threads = 0;
  std::string preset = "constant_one";
  std::string out = "probe";
};

int run_probe(const ProbeArgs& a) {
  const auto dir = resolve_out(a.out);
  json summary;
  summary["status"] = "completed";
  summary["t_final"] = nullptr;
  summary["blowup_estimate"] = nullptr;
  summary["invariant_maxdrift"] = nullptr;

  if (a.kind == "corner") {
    sb::SectorSpec spec(a.beta);
    sb::QuadratureSpec quad;
    quad.threads = a.threads;
    const auto omega = sb::make_sector_preset(a.preset, a.beta);
    const sb::CornerFit fit = sb::taylor_corner_probe(spec, omega, quad);
    summary["fit"] = {{"c11", fit.c11},
                      {"c12", fit.c12},
                      {"c22", fit.c22},
                      {"d1u1", fit.d1u1},
                      {"d2u2", fit.d2u2},
                      {"d1u2", fit.d1u2},
                      {"d2u1", fit.d2u1},
                      {"sym_d1u1", fit.sym_d1u1},
                      {"sym_d2u2", fit.sym_d2u2},
                      {"sym_d1u2", fit.sym_d1u2},
                      {"sym_d2u1", fit.sym_d2u1},
                      {"predicted_d1u2", fit.predicted_d1u2},
                      {"predicted_d2u1", fit.predicted_d2u1}};
  } else if (a.kind == "counterexample") {
    const sb::CounterexampleProbe p =
        sb::critical_counterexample_probe(a.beta, a.refinements, a.threads);
    summary["mixed_seminorm"] = p.mixed_seminorm;
    summary["source_seminorm"] = p.source_seminorm;
    summary["subcritical_seminorm"] = p.subcritical_seminorm;
  } else if (a.kind == "stability") {
    const auto grid = sb::make_grid(M_PI / 4.0, 257);
    const auto pre = sb::make_preset_1d("blowup_quadratic", grid);
    const sb::StabilityResult r =
        sb::stability_probe(sb::init_state(pre.g0, pre.P0), a.eps);
    summary["conclusive"] = r.conclusive;
    summary["ratio"] = r.ratio;
  } else {
    throw std::invalid_argument(
        "unknown probe kind (corner, counterexample, stability): " + a.kind);
  }
  emit_summary(dir, summary);
  return kExitOk;
}

struct VerifyArgs {
  std::string suite = "all";
  int threads = 0;
  std::string out = "verify";
};

int run_verify(const VerifyArgs& a) {
  const auto dir = resolve_out(a.out);
  using Suite = sb::SuiteResult (*)(int);
  const std::vector<std::pair<std::string, Suite>> table = {
      {"blowup_run", sb::verify_blowup_run},
      {"sign_structure", sb::verify_sign_structure},
      {"riccati_domination", sb::verify_riccati_domination},
      {"riccati_exact", sb::verify_riccati_exact},
      {"corner_ode", sb::verify_corner_ode},
      {"stream_solvers", sb::verify_stream_solvers},
      {"poisson_closed_form", sb::verify_poisson_closed_form},
      {"mass_balance", sb::verify_mass_balance},
      {"holder_scaling", sb::verify_holder_scaling},
      {"velocity_bounds", sb::verify_velocity_bounds},
      {"transport_conservation", sb::verify_transport_conservation}};

  std::vector<sb::SuiteResult> results;
  bool found = false;
  for (const auto& [name, fn] : table) {
    if (a.suite != "all" && a.suite != name) continue;
    found = true;
    results.push_back(fn(a.threads));
    const auto& r = results.back();
    std::cout << (r.pass() ? "PASS " : "FAIL ") << r.name << "\n";
    for (const auto& c : r.checks) {
      std::cout << "  " << (c.pass ? "pass " : "FAIL ") << c.name << " ("
                << c.detail << ")\n";
    }
  }
  if (!found) throw std::invalid_argument("unknown suite: " + a.suite);

  json suites = json::object();
  bool all_pass = true;
  for (const auto& r : results) {
    suites[r.name] = r.pass();
    all_pass = all_pass && r.pass();
  }
  json summary;
  summary["status"] = all_pass ? "pass" : "fail";
  summary["t_final"] = nullptr;
  summary["blowup_estimate"] = nullptr;
  summary["invariant_maxdrift"] = nullptr;
  summary["suites"] = suites;
  emit_summary(dir, summary);
  return all_pass ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for sector-domain blow-up constructions"};
  app.require_subcommand(1);

  Sim1dArgs sim;
  auto* c_sim = app.add_subcommand("sim1d", "1D angular evolution run");
  c_sim->add_option("--angle", sim.angle, "half-angle L (literal or pi fraction)");
  c_sim->add_option("--grid", sim.grid, "grid size");
  c_sim->add_option("--preset", sim.preset, "initial-data preset");
  c_sim->add_option("--g0", sim.g0_path, "g initial data CSV");
  c_sim->add_option("--p0", sim.P0_path, "P initial data CSV");
  c_sim->add_option("--t-end", sim.t_end, "end time");
  c_sim->add_option("--cfl", sim.cfl, "CFL number");
  c_sim->add_option("--dt-init", sim.dt_init, "initial dt cap (0 = CFL)");
  c_sim->add_option("--dt-min", sim.dt_min, "step collapse threshold");
  c_sim->add_option("--blowup-cap", sim.blowup_cap, "sup-norm growth cap");
  c_sim->add_option("--stride", sim.stride, "output stride");
  c_sim->add_option("--out", sim.out, "output directory");

  RiccatiArgs ric;
  auto* c_ric = app.add_subcommand("riccati", "comparison ODE integration");
  c_ric->add_option("--c", ric.c, "comparison constant");
  c_ric->add_option("--a0", ric.a0, "initial A");
  c_ric->add_option("--b0", ric.b0, "initial B");
  c_ric->add_option("--t-end", ric.t_end, "end time");
  c_ric->add_option("--rtol", ric.rtol, "relative tolerance");
  c_ric->add_option("--out", ric.out, "output directory");

  CornerArgs cor;
  auto* c_cor = app.add_subcommand("corner-ode", "vertex ODE integration");
  c_cor->add_option("--beta", cor.beta, "sector aperture fraction");
  c_cor->add_option("--a0", cor.a0, "initial A");
  c_cor->add_option("--b0", cor.b0, "initial B");
  c_cor->add_option("--c0", cor.c0, "initial C");
  c_cor->add_option("--t-end", cor.t_end, "end time");
  c_cor->add_option("--rtol", cor.rtol, "relative tolerance");
  c_cor->add_option("--out", cor.out, "output directory");

  PoissonArgs poi;
  auto* c_poi = app.add_subcommand("poisson", "sector Poisson solve");
  c_poi->add_option("--beta", poi.beta, "sector aperture fraction");
  c_poi->add_option("--preset", poi.preset, "source preset");
  c_poi->add_option("--nr", poi.nr, "radial target count");
  c_poi->add_option("--ntheta", poi.ntheta, "angular target count");
  c_poi->add_option("--r-lo", poi.r_lo, "innermost target radius");
  c_poi->add_option("--r-hi", poi.r_hi, "outermost target radius");
  c_poi->add_option("--r-max", poi.quad.r_max, "domain truncation radius");
  c_poi->add_option("--radial-panels", poi.quad.radial_panels, "radial panels");
  c_poi->add_option("--angular-panels", poi.quad.angular_panels, "angular panels");
  c_poi->add_option("--gauss-order", poi.quad.gauss_order, "Gauss order per panel");
  c_poi->add_option("--singular-depth", poi.quad.singular_depth,
                    "refinement depth at the singular point");
  c_poi->add_option("--threads", poi.quad.threads, "worker cap (0 = hardware)");
  c_poi->add_option("--out", poi.out, "output directory");

  ProbeArgs prb;
  auto* c_prb = app.add_subcommand("probe", "diagnostic probes");
  c_prb->add_option("--kind", prb.kind,
                    "probe kind: corner, counterexample, stability");
  c_prb->add_option("--beta", prb.beta, "sector aperture fraction");
  c_prb->add_option("--alpha", prb.alpha, "Holder exponent");
  c_prb->add_option("--eps", prb.eps, "perturbation size (stability)");
  c_prb->add_option("--refinements", prb.refinements, "refinement levels");
  c_prb->add_option("--preset", prb.preset, "source preset");
  c_prb->add_option("--threads", prb.threads, "worker cap (0 = hardware)");
  c_prb->add_option("--out", prb.out, "output directory");

  VerifyArgs ver;
  auto* c_ver = app.add_subcommand("verify", "acceptance suites");
  c_ver->add_option("--suite", ver.suite, "suite name or 'all'");
  c_ver->add_option("--threads", ver.threads, "worker cap (0 = hardware)");
  c_ver->add_option("--out", ver.out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_sim) return run_sim1d(sim);
    if (*c_ric) return run_riccati(ric);
    if (*c_cor) return run_corner(cor);
    if (*c_poi) return run_poisson(poi);
    if (*c_prb) return run_probe(prb);
    if (*c_ver) return run_verify(ver);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
