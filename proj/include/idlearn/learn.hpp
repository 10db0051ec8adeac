#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "idlearn/admg.hpp"
#include "idlearn/dist_access.hpp"
#include "idlearn/estimand.hpp"
#include "idlearn/pmf_table.hpp"
#include "idlearn/samples.hpp"

namespace idlearn {

/// C-components of G split by whether they meet X. Components meeting X come
/// first (ordered by smallest member), then the rest.
struct RelativePartition {
  std::vector<VarSet> components;
  int ell = 0;
  /// X_i = X ∩ C_i for i < ell.
  std::vector<VarSet> x_parts;
  VarSet c_low;
  VarSet c_high;
  /// C_ij: c-components of G[C_i \ X_i] for i < ell.
  std::vector<std::vector<VarSet>> sub_components;
};

RelativePartition relative_partition(const Admg& g, VarSet x);

enum class FactorSource { q, s };

/// P(target | given) as one row of `card` probabilities per configuration of
/// `given` (indexed by ConfigIndexer over given).
struct ConditionalTable {
  VarId target = 0;
  VarSet given;
  int card = 2;
  ConfigIndexer indexer;
  std::vector<double> probs;
  /// Raw counts behind each cell; empty when the table was not counted.
  std::vector<double> counts;
  std::vector<double> cdf;
  FactorSource source = FactorSource::q;
  /// The C_ij block an S-factor belongs to (empty for Q-factors).
  VarSet block;

  ConditionalTable() = default;
  ConditionalTable(VarId target, VarSet given, const std::vector<int>& cards);

  std::size_t rows() const { return indexer.size(); }
  std::size_t row_of(std::span<const int> point) const { return indexer.index(point); }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(probs).subspan(r * card, card);
  }
  double prob(std::span<const int> point) const {
    return probs[row_of(point) * card + point[target]];
  }
  /// Renormalizes every row and rebuilds the cumulative rows.
  void finalize();
};

/// A materialized intermediate distribution of an R-block: a table over
/// scope ∪ given, normalized over scope for each configuration of given.
struct IntermediateTable {
  std::string name;
  int block = 0;
  VarSet scope;
  VarSet given;
  PmfTable table;
  /// Advisory pointwise approximation bound carried by this table.
  double eta = 0.0;
};

struct RBlock {
  int i = 0;
  int j = 0;
  VarSet c;
  std::string formula;
  std::vector<TraceEntry> trace;
};

struct LearnConfig {
  double epsilon = 0.05;
  double delta = 0.05;
  double alpha = 0.01;
  int threads = 1;
};

struct SampleBudget {
  double eps_q = 0.0;
  double eps_r = 0.0;
  double m_q = 0.0;
  double m_r = 0.0;
  /// max(m_q, m_r), saturated to the size_t range.
  std::size_t m = 0;
};

/// Advisory sample size from the finite-sample analysis, with constants set
/// to 1. The learner itself uses whatever samples it is given.
SampleBudget sample_budget(const Admg& g, const RelativePartition& part, const LearnConfig& cfg);

struct LearnMetadata {
  std::size_t m = 0;
  bool exact = false;
  double epsilon = 0.0;
  double delta = 0.0;
  double alpha = 0.0;
  int k = 0;
  int d = 0;
  int ell = 0;
  SampleBudget budget;
  std::string rng;
  std::uint64_t seed = 0;
};

/// The learned evaluator and generator: one conditional per variable of V \ X,
/// listed in `order`.
struct LearnedInterventional {
  Admg graph;
  Assignment x;
  std::vector<VarId> order;
  /// factors[i] is the conditional for order[i].
  std::vector<ConditionalTable> factors;
  std::vector<RBlock> blocks;
  std::vector<IntermediateTable> intermediates;
  LearnMetadata meta;

  VarSet outcome() const { return graph.all() - x.domain(); }
  std::vector<const ConditionalTable*> q_factors() const;
  std::vector<const ConditionalTable*> s_factors() const;

  /// Throws Error(scope_mismatch) if a factor conditions on a variable that
  /// is neither intervened nor earlier in `order`.
  void check_structure() const;
};

/// Add-1 conditionals for every variable of C_{>ell} given its effective
/// parents. For an exact access the plain conditional is used instead.
std::vector<ConditionalTable> learn_q(const DistAccess& data, const Admg& g,
                                      const RelativePartition& part);

struct RFactor {
  int i = 0;
  int j = 0;
  VarSet c;
  Estimand estimand;
  std::vector<ConditionalTable> tables;
  std::vector<IntermediateTable> intermediates;
};

/// One factor set per block C_ij, obtained by running the identification
/// recursion for P(c_ij | do(v \ c_ij)) over `data` with X held at `x`.
/// Throws Error(positivity_violation) on a zero conditioning event and
/// Error(not_identifiable) if a block query fails.
std::vector<RFactor> learn_r(const DistAccess& data, const Admg& g, const RelativePartition& part,
                             const Assignment& x, const LearnConfig& cfg);

LearnedInterventional assemble(std::vector<ConditionalTable> q, std::vector<RFactor> r,
                               const RelativePartition& part, const Admg& g, const Assignment& x);

/// Full pipeline. Throws Error(not_identifiable) when P_x(V \ X) is not
/// identifiable on `g`.
LearnedInterventional learn(const DistAccess& data, const Admg& g, const Assignment& x,
                            const LearnConfig& cfg);
LearnedInterventional learn(std::shared_ptr<const SampleSet> samples, const Admg& g,
                            const Assignment& x, const LearnConfig& cfg);

/// Probability of `point` (full-length; values outside V \ X are ignored).
double evaluate_point(const LearnedInterventional& li, std::span<const int> point);
/// `y` must cover V \ X. Throws Error(scope_mismatch) otherwise.
double evaluate_point(const LearnedInterventional& li, const Assignment& y);

/// The evaluator materialized over V \ X.
PmfTable evaluator_table(const LearnedInterventional& li);

}  // namespace idlearn
