#pragma once

#include <cstdint>
#include <optional>

#include "idlearn/admg.hpp"
#include "idlearn/scm_oracle.hpp"

namespace idlearn {

struct WitnessOptions {
  int hidden_cardinality = 3;
  int attempts = 24;
  /// Length of the first move along the observational fiber, in logit units.
  double step = 1.0;
  double observational_tol = 1e-9;
  double min_gap = 1e-3;
};

/// Two nets over the same graph that agree on the observational table but
/// disagree on P_x.
struct WitnessPair {
  CausalBayesNet first;
  CausalBayesNet second;
  double observational_tv = 0.0;
  double interventional_tv = 0.0;
};

/// Randomized search: draw a net realizing `g`, move its CPT logits along a
/// random direction in the null space of the observational Jacobian, and pull
/// the result back onto the fiber with Gauss-Newton steps. Returns nothing if
/// no attempt separates P_x by min_gap.
std::optional<WitnessPair> find_indistinguishable_pair(const Admg& g, const Assignment& x,
                                                       std::uint64_t seed,
                                                       const WitnessOptions& options = {});

}  // namespace idlearn
