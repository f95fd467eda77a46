#pragma once

#include <string>
#include <vector>

namespace sector_blowup {

// One assertion inside a suite. detail carries the measured numbers so a
// failure is diagnosable from the report alone.
struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
};

// Named bundle of checks; a suite passes iff every check passes.
struct SuiteResult {
  std::string name;
  std::vector<CheckResult> checks;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// The acceptance suites. Each is self-contained and deterministic; threads
// only parallelizes inner quadratures and pair scans, never changes results.
SuiteResult verify_blowup_run(int threads = 0);          // detection, growth, grid agreement, wall time
SuiteResult verify_sign_structure(int threads = 0);      // preserved minima along the blow-up run
SuiteResult verify_riccati_domination(int threads = 0);  // PDE functionals dominate the comparison ODE
SuiteResult verify_riccati_exact(int threads = 0);       // closed-form blow-up time and invariant drift
SuiteResult verify_corner_ode(int threads = 0);          // tolerance reproducibility and first integrals
SuiteResult verify_stream_solvers(int threads = 0);      // cross-validation orders and boundary derivatives
SuiteResult verify_poisson_closed_form(int threads = 0); // quadratic closed form and Hessian trace
SuiteResult verify_mass_balance(int threads = 0);        // balance identity value and residual convergence
SuiteResult verify_holder_scaling(int threads = 0);      // ring-norm ratios and the critical counterexample
SuiteResult verify_velocity_bounds(int threads = 0);     // symmetrized velocity bound and decay probe
SuiteResult verify_transport_conservation(int threads = 0);  // pure-transport sup-norm conservation

// All suites in report order.
std::vector<SuiteResult> verify_all(int threads = 0);

}  // namespace sector_blowup
