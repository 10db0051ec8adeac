#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "idlearn/learn.hpp"
#include "idlearn/pmf_table.hpp"
#include "idlearn/rng.hpp"
#include "idlearn/scm_oracle.hpp"

namespace idlearn {

/// Half L1 distance. Throws Error(scope_mismatch) unless both tables are over
/// the same variables with the same cardinalities.
double exact_tv(const PmfTable& a, const PmfTable& b);

/// sum a ln(a/b) with 0 ln 0 = 0. Throws Error(infinite_kl) when a has mass
/// where b has none.
double exact_kl(const PmfTable& a, const PmfTable& b);

/// Writes one draw from P into `point`.
using Sampler = std::function<void(Rng&, std::vector<int>& point)>;
using Evaluator = std::function<double(std::span<const int> point)>;

struct TvEstimate {
  double value = 0.0;
  std::size_t m = 0;
};

/// Number of draws used by estimate_tv: ceil(2 eps^-2 ln(2/delta)).
std::size_t tv_sample_size(double epsilon, double delta);

/// Mean of max(0, 1 - q(x)/p(x)) over draws x ~ P. `point_size` is the
/// length of the point vector handed to the sampler. Throws
/// Error(zero_evaluator_mass) if p vanishes at a drawn point.
TvEstimate estimate_tv(const Sampler& sample_p, const Evaluator& p, const Evaluator& q,
                       double epsilon, double delta, std::uint64_t seed, int point_size);

struct FactorError {
  VarId target = 0;
  FactorSource source = FactorSource::q;
  /// Largest |learned - true| over cells of rows with positive true mass.
  double worst = 0.0;
};

struct OracleReport {
  double tv = 0.0;
  std::optional<double> kl;
  double worst_row_error = 0.0;
  std::vector<FactorError> factors;
  PmfTable learned;
  PmfTable truth;
};

/// Compares the learned evaluator with the exact interventional table of
/// `net` at li.x. Throws Error(graph_mismatch) if latent_project(net) differs
/// from li.graph.
OracleReport compare_to_oracle(const LearnedInterventional& li, const CausalBayesNet& net);

}  // namespace idlearn
