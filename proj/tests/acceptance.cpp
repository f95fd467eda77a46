// Acceptance gate: one numbered criterion per suite, one pass/fail line each.
// With no arguments all criteria run; a single numeric argument runs one.
// Exit code is 0 iff every executed criterion passes.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "sector_blowup/verify.hpp"

namespace sb = sector_blowup;

int main(int argc, char** argv) {
  using Suite = sb::SuiteResult (*)(int);
  const std::vector<std::pair<const char*, Suite>> criteria = {
      {"1d-blowup-reproduction", sb::verify_blowup_run},
      {"sign-propagation", sb::verify_sign_structure},
      {"riccati-domination", sb::verify_riccati_domination},
      {"riccati-closed-form", sb::verify_riccati_exact},
      {"corner-ode", sb::verify_corner_ode},
      {"elliptic-cross-validation", sb::verify_stream_solvers},
      {"green-function-golden-values", sb::verify_poisson_closed_form},
      {"balance-identity", sb::verify_mass_balance},
      {"estimate-probes", sb::verify_holder_scaling},
      {"velocity-comparison-bound", sb::verify_velocity_bounds},
      {"euler-transport-sanity", sb::verify_transport_conservation}};

  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "usage: %s [1..%zu]\n", argv[0], criteria.size());
      return 1;
    }
  }

  bool all_pass = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i + 1) != only) continue;
    const sb::SuiteResult r = criteria[i].second(0);
    const bool pass = r.pass();
    all_pass = all_pass && pass;
    std::printf("%s criterion %zu (%s)\n", pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first);
    for (const auto& c : r.checks) {
      std::printf("    %s %s: %s\n", c.pass ? "ok  " : "FAIL", c.name.c_str(),
                  c.detail.c_str());
    }
  }
  return all_pass ? 0 : 1;
}
