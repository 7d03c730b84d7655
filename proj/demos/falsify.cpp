// Falsification walkthrough: a law that no instrumental-variable model can
// generate, caught by the complete inequality test.
#include <iostream>

#include "ivbounds/ivbounds.hpp"

int main() {
  using namespace ivb;

  OutcomeSupport support = OutcomeSupport::iota(2);

  // Arm 0 always shows (y=0, d=1); arm 1 always shows (y=1, d=1).  Everyone
  // is treated, yet the outcome flips with the instrument, which contradicts
  // the exclusion restriction.
  std::vector<Rational> p(8, Rational(0));
  p[ydz_index(0, 1, 0, 2)] = 1;
  p[ydz_index(1, 1, 1, 2)] = 1;
  ObservedLaw law(support, 2, p);

  FalsificationReport report = falsification_test(law);
  std::cout << "verdict: " << (report.falsified ? "falsified" : "compatible") << "\n";
  for (const Violation& v : report.violations)
    std::cout << "violated: " << format_linear_expr(reduced_form(v.ineq), ExprStyle::text)
              << " <= 0 with slack " << to_fraction_string(v.slack) << "\n";

  // The oracle reaches the same verdict by primal infeasibility.
  std::cout << "oracle feasibility: " << (oracle_feasible(p, 2, 2) ? "feasible" : "infeasible")
            << "\n";
  return 0;
}
