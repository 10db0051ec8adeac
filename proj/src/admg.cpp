#include "idlearn/admg.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "idlearn/error.hpp"

namespace idlearn {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_graph: return "InvalidGraph";
    case ErrorCode::cycle_detected: return "CycleDetected";
    case ErrorCode::invalid_query: return "InvalidQuery";
    case ErrorCode::invalid_net: return "InvalidNet";
    case ErrorCode::state_space_too_large: return "StateSpaceTooLarge";
    case ErrorCode::non_standard_form: return "NonStandardForm";
    case ErrorCode::zero_conditioning_event: return "ZeroConditioningEvent";
    case ErrorCode::scope_mismatch: return "ScopeMismatch";
    case ErrorCode::not_identifiable: return "NotIdentifiable";
    case ErrorCode::positivity_violation: return "PositivityViolation";
    case ErrorCode::infinite_kl: return "InfiniteKL";
    case ErrorCode::zero_evaluator_mass: return "ZeroEvaluatorMass";
    case ErrorCode::graph_mismatch: return "GraphMismatch";
    case ErrorCode::parse_error: return "ParseError";
  }
  return "Unknown";
}

Admg Admg::build(std::vector<Variable> vars, const std::vector<Edge>& directed,
                 const std::vector<Edge>& bidirected) {
  const int n = static_cast<int>(vars.size());
  if (n > kMaxVars) {
    throw Error(ErrorCode::invalid_graph,
                "graph has " + std::to_string(n) + " variables; at most " +
                    std::to_string(kMaxVars) + " are supported");
  }
  std::unordered_set<std::string> names;
  for (const auto& v : vars) {
    if (v.name.empty()) throw Error(ErrorCode::invalid_graph, "variable with empty name");
    if (v.cardinality < 1) {
      throw Error(ErrorCode::invalid_graph, "variable " + v.name + " has cardinality < 1");
    }
    if (!names.insert(v.name).second) {
      throw Error(ErrorCode::invalid_graph, "duplicate variable name " + v.name);
    }
  }

  Admg g;
  g.vars_ = std::move(vars);
  g.cards_.reserve(n);
  for (const auto& v : g.vars_) g.cards_.push_back(v.cardinality);
  g.parents_.assign(n, VarSet{});
  g.children_.assign(n, VarSet{});
  g.siblings_.assign(n, VarSet{});

  auto check_endpoints = [&](const Edge& e, const char* kind) {
    if (e.first < 0 || e.first >= n || e.second < 0 || e.second >= n) {
      throw Error(ErrorCode::invalid_graph, std::string(kind) + " edge with undeclared endpoint");
    }
    if (e.first == e.second) {
      throw Error(ErrorCode::invalid_graph,
                  std::string(kind) + " self-loop on " + g.vars_[e.first].name);
    }
  };

  for (const Edge& e : directed) {
    check_endpoints(e, "directed");
    if (g.parents_[e.second].contains(e.first)) {
      throw Error(ErrorCode::invalid_graph, "duplicate directed edge " + g.vars_[e.first].name +
                                                " -> " + g.vars_[e.second].name);
    }
    g.parents_[e.second].insert(e.first);
    g.children_[e.first].insert(e.second);
  }
  for (const Edge& e : bidirected) {
    check_endpoints(e, "bidirected");
    if (g.siblings_[e.first].contains(e.second)) {
      throw Error(ErrorCode::invalid_graph, "duplicate bidirected edge " + g.vars_[e.first].name +
                                                " <-> " + g.vars_[e.second].name);
    }
    g.siblings_[e.first].insert(e.second);
    g.siblings_[e.second].insert(e.first);
  }

  // Throws on cycles.
  topological_order(g);
  return g;
}

std::optional<VarId> Admg::find(const std::string& name) const {
  for (VarId v = 0; v < size(); ++v) {
    if (vars_[v].name == name) return v;
  }
  return std::nullopt;
}

VarId Admg::id(const std::string& name) const {
  if (auto v = find(name)) return *v;
  throw Error(ErrorCode::invalid_query, "unknown variable " + name);
}

std::vector<Edge> Admg::directed_edges() const {
  std::vector<Edge> out;
  for (VarId c = 0; c < size(); ++c) {
    for (VarId p : parents_[c]) out.emplace_back(p, c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Edge> Admg::bidirected_edges() const {
  std::vector<Edge> out;
  for (VarId a = 0; a < size(); ++a) {
    for (VarId b : siblings_[a]) {
      if (a < b) out.emplace_back(a, b);
    }
  }
  return out;
}

std::string Admg::describe(VarSet s) const {
  std::string out = "{";
  bool first = true;
  for (VarId v : s) {
    if (!first) out += ",";
    out += vars_[v].name;
    first = false;
  }
  return out + "}";
}

bool operator==(const Admg& a, const Admg& b) {
  if (a.size() != b.size()) return false;
  for (VarId v = 0; v < a.size(); ++v) {
    if (a.vars_[v].name != b.vars_[v].name || a.cards_[v] != b.cards_[v]) return false;
  }
  return a.parents_ == b.parents_ && a.siblings_ == b.siblings_;
}

void Assignment::validate(const Admg& g) const {
  if (num_vars() != g.size()) {
    throw Error(ErrorCode::invalid_query, "assignment built for a graph of different size");
  }
  for (VarId v : domain_) {
    if (values_[v] < 0 || values_[v] >= g.cardinality(v)) {
      throw Error(ErrorCode::invalid_query, "value " + std::to_string(values_[v]) +
                                                " out of range for " + g.name(v));
    }
  }
}

std::string Assignment::describe(const Admg& g) const {
  std::string out = "{";
  bool first = true;
  for (VarId v : domain_) {
    if (!first) out += ",";
    out += g.name(v) + "=" + std::to_string(values_[v]);
    first = false;
  }
  return out + "}";
}

std::vector<VarId> topological_order(const Admg& g) {
  const int n = g.size();
  std::vector<int> pending(n);
  std::set<VarId> ready;
  for (VarId v = 0; v < n; ++v) {
    pending[v] = g.parents(v).size();
    if (pending[v] == 0) ready.insert(v);
  }
  std::vector<VarId> order;
  order.reserve(n);
  while (!ready.empty()) {
    VarId v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (VarId c : g.children(v)) {
      if (--pending[c] == 0) ready.insert(c);
    }
  }
  if (static_cast<int>(order.size()) != n) {
    throw Error(ErrorCode::cycle_detected, "directed edges contain a cycle");
  }
  return order;
}

VarSet ancestors(const Admg& g, VarSet y, VarSet within) {
  VarSet result = y & within;
  VarSet frontier = result;
  while (!frontier.empty()) {
    VarSet next;
    for (VarId v : frontier) next |= g.parents(v) & within;
    frontier = next - result;
    result |= frontier;
  }
  return result;
}

std::vector<VarSet> c_components(const Admg& g, VarSet within) {
  std::vector<VarSet> out;
  VarSet unseen = within;
  while (!unseen.empty()) {
    VarSet comp = VarSet::single(unseen.front());
    VarSet frontier = comp;
    while (!frontier.empty()) {
      VarSet next;
      for (VarId v : frontier) next |= g.siblings(v) & within;
      frontier = next - comp;
      comp |= frontier;
    }
    out.push_back(comp);
    unseen -= comp;
  }
  return out;
}

VarSet parents_plus(const Admg& g, VarSet s) {
  VarSet out = s;
  for (VarId v : s) out |= g.parents(v);
  return out;
}

VarSet effective_parents(const Admg& g, std::span<const VarId> order, VarId v, VarSet within) {
  VarSet comp;
  for (VarSet c : c_components(g, within)) {
    if (c.contains(v)) {
      comp = c;
      break;
    }
  }
  VarSet prefix;
  for (VarId u : order) {
    if (u == v) break;
    if (within.contains(u)) prefix.insert(u);
  }
  return parents_plus(g, comp) & within & prefix;
}

Subgraph induced_subgraph(const Admg& g, VarSet s) {
  Subgraph out;
  std::vector<VarId> local(g.size(), -1);
  std::vector<Variable> vars;
  for (VarId v : s) {
    local[v] = static_cast<VarId>(out.original.size());
    out.original.push_back(v);
    vars.push_back(g.var(v));
  }
  std::vector<Edge> directed;
  std::vector<Edge> bidirected;
  for (const auto& [p, c] : g.directed_edges()) {
    if (s.contains(p) && s.contains(c)) directed.emplace_back(local[p], local[c]);
  }
  for (const auto& [a, b] : g.bidirected_edges()) {
    if (s.contains(a) && s.contains(b)) bidirected.emplace_back(local[a], local[b]);
  }
  out.graph = Admg::build(std::move(vars), directed, bidirected);
  return out;
}

Admg remove_incoming(const Admg& g, VarSet x) {
  std::vector<Edge> directed;
  std::vector<Edge> bidirected;
  for (const auto& e : g.directed_edges()) {
    if (!x.contains(e.second)) directed.push_back(e);
  }
  for (const auto& e : g.bidirected_edges()) {
    if (!x.contains(e.first) && !x.contains(e.second)) bidirected.push_back(e);
  }
  return Admg::build(g.vars(), directed, bidirected);
}

int max_in_degree(const Admg& g) {
  int d = 0;
  for (VarId v = 0; v < g.size(); ++v) d = std::max(d, g.parents(v).size());
  return d;
}

}  // namespace idlearn
