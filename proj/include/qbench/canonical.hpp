#pragma once

#include <optional>

#include "qbench/benchmark.hpp"
#include "qbench/test_model.hpp"

namespace qb {

struct CanonicalTestRecipe {
  PureState input_state;  // on (A, R)
  Operator observable;    // on (A', R)
  Operator tau_A;
  double offset = 0.0;
  std::optional<double> benchmark;
  double residual = 0.0;  // |Omega' - Omega|_F of the round trip

  DetTest as_det_test() const;
};

CanonicalTestRecipe canonical_det_test(const Operator& omega, const Operator& tau_A);
CanonicalTestRecipe canonical_det_test(const Operator& omega);  // tau_A = maximally mixed on the support
CanonicalTestRecipe canonical_prob_test(const ProbTest& t);

// Maximally mixed state on the support of Tr_{A'}[Omega^{T_A}].
Operator default_tau(const Operator& omega);

bool tests_equivalent_det(const DetTest& a, const DetTest& b, double tol);
bool tests_equivalent_prob(const ProbTest& a, const ProbTest& b, double tol);

CanonicalTestRecipe fully_blackbox_test(const Operator& omega, const SearchConfig& cfg,
                                        const GroupRep* rep = nullptr);

// Scores of a probabilistic recipe: the canonical observable pairs with the purification input.
ProbScore recipe_score(const CanonicalTestRecipe& r, const Channel& c, double p_min = 1e-12);

json to_json(const CanonicalTestRecipe& r);

}  // namespace qb
