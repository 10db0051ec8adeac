#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "idlearn/varset.hpp"

namespace idlearn {

struct Variable {
  std::string name;
  int cardinality = 2;
};

using Edge = std::pair<VarId, VarId>;

/// Acyclic directed mixed graph over observable variables. Immutable once
/// built; `build` validates every structural invariant.
class Admg {
 public:
  Admg() = default;

  /// Directed edges are (parent, child); bidirected edges are unordered.
  /// Throws Error(invalid_graph) on bad endpoints, self-loops, duplicates or
  /// repeated names, and Error(cycle_detected) if the directed part is cyclic.
  static Admg build(std::vector<Variable> vars, const std::vector<Edge>& directed,
                    const std::vector<Edge>& bidirected);

  int size() const { return static_cast<int>(vars_.size()); }
  VarSet all() const { return VarSet::first_n(size()); }

  const Variable& var(VarId v) const { return vars_[v]; }
  const std::vector<Variable>& vars() const { return vars_; }
  const std::string& name(VarId v) const { return vars_[v].name; }
  int cardinality(VarId v) const { return vars_[v].cardinality; }
  const std::vector<int>& cardinalities() const { return cards_; }

  std::optional<VarId> find(const std::string& name) const;
  /// Like find, but throws Error(invalid_query) for unknown names.
  VarId id(const std::string& name) const;

  VarSet parents(VarId v) const { return parents_[v]; }
  VarSet children(VarId v) const { return children_[v]; }
  /// Bidirected neighbours.
  VarSet siblings(VarId v) const { return siblings_[v]; }

  /// Edge lists in canonical order: sorted, bidirected pairs stored (low, high).
  std::vector<Edge> directed_edges() const;
  std::vector<Edge> bidirected_edges() const;

  std::string describe(VarSet s) const;

  friend bool operator==(const Admg& a, const Admg& b);

 private:
  std::vector<Variable> vars_;
  std::vector<int> cards_;
  std::vector<VarSet> parents_;
  std::vector<VarSet> children_;
  std::vector<VarSet> siblings_;
};

/// Values for a subset of the variables of a graph. Values are stored in a
/// full-length vector indexed by VarId; entries outside `domain()` are 0.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(int num_vars) : values_(num_vars, 0) {}

  void set(VarId v, int value) {
    values_[v] = value;
    domain_.insert(v);
  }
  int get(VarId v) const { return values_[v]; }
  VarSet domain() const { return domain_; }
  int num_vars() const { return static_cast<int>(values_.size()); }
  std::span<const int> values() const { return values_; }

  /// Throws Error(invalid_query) when a value is out of range for `g`.
  void validate(const Admg& g) const;

  std::string describe(const Admg& g) const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<int> values_;
  VarSet domain_;
};

/// Topological order of the directed part; ties broken by ascending VarId.
std::vector<VarId> topological_order(const Admg& g);

/// Reflexive ancestors of `y` inside the induced subgraph on `within`.
VarSet ancestors(const Admg& g, VarSet y, VarSet within);
inline VarSet ancestors(const Admg& g, VarSet y) { return ancestors(g, y, g.all()); }

/// C-component partition of the induced subgraph on `within`, ordered by
/// smallest member.
std::vector<VarSet> c_components(const Admg& g, VarSet within);
inline std::vector<VarSet> c_components(const Admg& g) { return c_components(g, g.all()); }

/// Pa+(S): S together with all directed parents of its members.
VarSet parents_plus(const Admg& g, VarSet s);

/// Effective parents of `v`: Pa+(C) intersected with the members of `within`
/// preceding `v` in `order`, where C is v's c-component of G[within].
VarSet effective_parents(const Admg& g, std::span<const VarId> order, VarId v, VarSet within);
inline VarSet effective_parents(const Admg& g, std::span<const VarId> order, VarId v) {
  return effective_parents(g, order, v, g.all());
}

struct Subgraph {
  Admg graph;
  /// original[i] is the VarId in the parent graph of variable i of `graph`.
  std::vector<VarId> original;
};

Subgraph induced_subgraph(const Admg& g, VarSet s);

/// G with every directed edge into `x` and every bidirected edge touching `x`
/// removed.
Admg remove_incoming(const Admg& g, VarSet x);

/// Largest in-degree of the directed part.
int max_in_degree(const Admg& g);

}  // namespace idlearn
