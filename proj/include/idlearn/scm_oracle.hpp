#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "idlearn/admg.hpp"
#include "idlearn/pmf_table.hpp"
#include "idlearn/samples.hpp"

namespace idlearn {

/// One node of a causal Bayes net. `cpt` is row-major: one row of
/// `cardinality` probabilities per configuration of `parents` (listed order,
/// last parent fastest).
struct NetNode {
  std::string name;
  int cardinality = 2;
  bool hidden = false;
  std::vector<int> parents;  // node indices
  std::vector<double> cpt;
};

/// Ground-truth causal Bayes net over observables V and hiddens U.
/// Observable VarIds number the observable nodes in declaration order.
class CausalBayesNet {
 public:
  CausalBayesNet() = default;

  /// Throws Error(invalid_net) on malformed CPTs or references and
  /// Error(cycle_detected) on cycles.
  static CausalBayesNet build(std::vector<NetNode> nodes);

  const std::vector<NetNode>& nodes() const { return nodes_; }
  const NetNode& node(int i) const { return nodes_[i]; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_observables() const { return static_cast<int>(observables_.size()); }

  /// Node index of observable `v`.
  int node_of(VarId v) const { return observables_[v]; }
  /// Observable VarId of node `i`, if it is observable.
  std::optional<VarId> var_of(int i) const;

  std::vector<int> observable_cardinalities() const;
  std::vector<std::string> observable_names() const;
  /// Observable directed parents of observable `v`.
  VarSet observable_parents(VarId v) const;

  /// Topological order over all nodes, ties broken by node index.
  const std::vector<int>& order() const { return order_; }

  /// Row of node i's CPT selected by its parents' values in `node_values`.
  std::span<const double> row(int i, std::span<const int> node_values) const;
  std::span<const double> cdf_row(int i, std::span<const int> node_values) const;

 private:
  std::size_t row_index(int i, std::span<const int> node_values) const;

  std::vector<NetNode> nodes_;
  std::vector<int> observables_;
  std::vector<int> order_;
  std::vector<std::vector<double>> cdf_;
};

/// m i.i.d. observational draws (ancestral sampling, hidden columns dropped).
SampleSet sample_observational(const CausalBayesNet& net, std::uint64_t seed, std::size_t m);

/// Exact joint over the observables by full enumeration of V u U.
PmfTable exact_observational(const CausalBayesNet& net);

/// Exact P_x(V \ X) by truncated factorization. `x` is over observables.
PmfTable exact_interventional(const CausalBayesNet& net, const Assignment& x);

/// ADMG over the observables: observable edges kept, one bidirected edge per
/// hidden node. Throws Error(non_standard_form) unless every hidden node is a
/// root with exactly two observable children.
Admg latent_project(const CausalBayesNet& net);

struct PositivityReport {
  bool ok = true;
  double min_probability = 1.0;
  /// Index into the supplied component list of the minimizing event.
  int component = -1;
  /// The minimizing assignment of Pa+(C).
  Assignment worst;
  std::vector<double> per_component_min;
};

/// For every supplied c-component C, min over z of P(Pa+(C) = z), compared
/// against alpha.
PositivityReport check_strong_positivity(const CausalBayesNet& net,
                                         const std::vector<VarSet>& components, double alpha);

struct RandomNetOptions {
  std::uint64_t seed = 0;
  /// Every CPT entry is floored at gamma, then the row is renormalized.
  double gamma = 0.1;
  int hidden_cardinality = 2;
};

/// Standard-form net realizing `g`: one fresh hidden root per bidirected edge,
/// CPT rows drawn from a symmetric Dirichlet(1) then floored.
CausalBayesNet random_net(const Admg& g, const RandomNetOptions& options);

}  // namespace idlearn
