// Minimal library walkthrough: build an observed law, compute sharp ATE
// bounds, and cross-check them against the exact LP oracle.
#include <iostream>

#include "ivbounds/ivbounds.hpp"

int main() {
  using namespace ivb;

  // Binary outcome (gamma = 0, 1), binary instrument.  Arm-conditional
  // probabilities p(y, d | z); here a law induced by a random joint
  // distribution over potential outcomes, so the model holds by
  // construction.
  FullDataLaw joint = random_full_data_law(/*n=*/2, /*ell=*/2, /*seed=*/2024);
  ObservedLaw law = marginalize(joint);

  BoundResult bounds = ate_bounds(law);
  std::cout << "sharp ATE bounds: [" << to_fraction_string(bounds.lower) << ", "
            << to_fraction_string(bounds.upper) << "]\n";
  std::cout << "true ATE of the generating joint law: " << to_fraction_string(ate_of(joint))
            << "\n";
  std::cout << "lower bound attained by " << bounds.lower_witnesses.size()
            << " vertex/vertices, e.g. family " << family_name(bounds.lower_witnesses[0].family)
            << "\n";

  auto oracle = oracle_ate_bounds(law);
  std::cout << "oracle agrees: "
            << (oracle.first == bounds.lower && oracle.second == bounds.upper ? "yes" : "NO")
            << "\n";

  // The same bounds as symbolic expressions of the observed probabilities.
  auto terms = emit_bound_expressions(law.support(), BoundSideKind::Lower);
  std::cout << "first lower-bound term: " << format_linear_expr(terms.front(), ExprStyle::text)
            << "\n";
  return 0;
}
