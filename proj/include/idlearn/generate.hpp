#pragma once

#include <cstdint>

#include "idlearn/learn.hpp"
#include "idlearn/samples.hpp"

namespace idlearn {

/// m i.i.d. draws from the learned evaluator, one inverse-CDF draw per
/// variable in li.order. Rows are full-width: X slots hold the intervention
/// values, columns() is V \ X.
SampleSet sample(const LearnedInterventional& li, std::uint64_t seed, std::size_t m);

/// Same draws projected to `t` (a subset of V \ X).
SampleSet sample_marginal(const LearnedInterventional& li, VarSet t, std::uint64_t seed,
                          std::size_t m);

/// Empirical distribution of `samples` over `vars`.
PmfTable empirical_table(const SampleSet& samples, VarSet vars, const std::vector<int>& cards);

}  // namespace idlearn
