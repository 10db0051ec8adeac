#include "idlearn/scm_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "idlearn/error.hpp"
#include "idlearn/rng.hpp"

namespace idlearn {

CausalBayesNet CausalBayesNet::build(std::vector<NetNode> nodes) {
  CausalBayesNet net;
  const int n = static_cast<int>(nodes.size());
  std::unordered_set<std::string> names;
  for (int i = 0; i < n; ++i) {
    const NetNode& node = nodes[i];
    if (node.name.empty() || !names.insert(node.name).second) {
      throw Error(ErrorCode::invalid_net, "missing or duplicate node name '" + node.name + "'");
    }
    if (node.cardinality < 1) {
      throw Error(ErrorCode::invalid_net, "node " + node.name + " has cardinality < 1");
    }
    std::set<int> seen;
    std::size_t rows = 1;
    for (int p : node.parents) {
      if (p < 0 || p >= n || p == i || !seen.insert(p).second) {
        throw Error(ErrorCode::invalid_net, "node " + node.name + " has an invalid parent list");
      }
      rows *= static_cast<std::size_t>(nodes[p].cardinality);
      if (rows > kMaxTableCells) {
        throw Error(ErrorCode::state_space_too_large, "CPT of " + node.name + " is too large");
      }
    }
    if (node.cpt.size() != rows * node.cardinality) {
      throw Error(ErrorCode::invalid_net,
                  "CPT of " + node.name + " has " + std::to_string(node.cpt.size()) +
                      " entries, expected " + std::to_string(rows * node.cardinality));
    }
    for (std::size_t r = 0; r < rows; ++r) {
      double sum = 0.0;
      for (int k = 0; k < node.cardinality; ++k) {
        const double p = node.cpt[r * node.cardinality + k];
        if (!(p >= 0.0 && p <= 1.0)) {
          throw Error(ErrorCode::invalid_net, "CPT of " + node.name + " has an entry outside [0,1]");
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-12) {
        throw Error(ErrorCode::invalid_net,
                    "CPT row " + std::to_string(r) + " of " + node.name + " does not sum to 1");
      }
    }
    if (!node.hidden) net.observables_.push_back(i);
  }
  if (static_cast<int>(net.observables_.size()) > kMaxVars) {
    throw Error(ErrorCode::invalid_net, "too many observable nodes");
  }

  // Kahn with smallest-index tie-break.
  std::vector<std::vector<int>> children(n);
  std::vector<int> pending(n);
  for (int i = 0; i < n; ++i) {
    pending[i] = static_cast<int>(nodes[i].parents.size());
    for (int p : nodes[i].parents) children[p].push_back(i);
  }
  std::set<int> ready;
  for (int i = 0; i < n; ++i) {
    if (pending[i] == 0) ready.insert(i);
  }
  while (!ready.empty()) {
    int i = *ready.begin();
    ready.erase(ready.begin());
    net.order_.push_back(i);
    for (int c : children[i]) {
      if (--pending[c] == 0) ready.insert(c);
    }
  }
  if (static_cast<int>(net.order_.size()) != n) {
    throw Error(ErrorCode::cycle_detected, "causal Bayes net contains a directed cycle");
  }

  net.cdf_.resize(n);
  for (int i = 0; i < n; ++i) {
    const int card = nodes[i].cardinality;
    auto& cdf = net.cdf_[i];
    cdf.resize(nodes[i].cpt.size());
    for (std::size_t r = 0; r < cdf.size(); r += card) {
      double acc = 0.0;
      for (int k = 0; k < card; ++k) {
        acc += nodes[i].cpt[r + k];
        cdf[r + k] = acc;
      }
    }
  }
  net.nodes_ = std::move(nodes);
  return net;
}

std::optional<VarId> CausalBayesNet::var_of(int i) const {
  auto it = std::find(observables_.begin(), observables_.end(), i);
  if (it == observables_.end()) return std::nullopt;
  return static_cast<VarId>(it - observables_.begin());
}

std::vector<int> CausalBayesNet::observable_cardinalities() const {
  std::vector<int> out;
  for (int i : observables_) out.push_back(nodes_[i].cardinality);
  return out;
}

std::vector<std::string> CausalBayesNet::observable_names() const {
  std::vector<std::string> out;
  for (int i : observables_) out.push_back(nodes_[i].name);
  return out;
}

VarSet CausalBayesNet::observable_parents(VarId v) const {
  VarSet out;
  for (int p : nodes_[node_of(v)].parents) {
    if (auto pv = var_of(p)) out.insert(*pv);
  }
  return out;
}

std::size_t CausalBayesNet::row_index(int i, std::span<const int> node_values) const {
  std::size_t r = 0;
  for (int p : nodes_[i].parents) {
    r = r * static_cast<std::size_t>(nodes_[p].cardinality) + node_values[p];
  }
  return r;
}

std::span<const double> CausalBayesNet::row(int i, std::span<const int> node_values) const {
  const std::size_t card = nodes_[i].cardinality;
  return std::span<const double>(nodes_[i].cpt).subspan(row_index(i, node_values) * card, card);
}

std::span<const double> CausalBayesNet::cdf_row(int i, std::span<const int> node_values) const {
  const std::size_t card = nodes_[i].cardinality;
  return std::span<const double>(cdf_[i]).subspan(row_index(i, node_values) * card, card);
}

SampleSet sample_observational(const CausalBayesNet& net, std::uint64_t seed, std::size_t m) {
  const int n_obs = net.num_observables();
  SampleSet out(n_obs, VarSet::first_n(n_obs));
  out.reserve(m);
  Rng rng(seed);
  std::vector<int> values(net.num_nodes(), 0);
  std::vector<int> row(n_obs, 0);
  for (std::size_t s = 0; s < m; ++s) {
    for (int i : net.order()) values[i] = rng.draw(net.cdf_row(i, values));
    for (VarId v = 0; v < n_obs; ++v) row[v] = values[net.node_of(v)];
    out.push_back(row);
  }
  return out;
}

namespace {

// Sums the (possibly truncated) factorization over every configuration of
// the free nodes. `fixed[i] >= 0` clamps node i and drops its CPT factor.
PmfTable enumerate_joint(const CausalBayesNet& net, const std::vector<int>& fixed, VarSet keep) {
  std::size_t states = 1;
  for (int i = 0; i < net.num_nodes(); ++i) {
    if (fixed[i] >= 0) continue;
    states *= static_cast<std::size_t>(net.node(i).cardinality);
    if (states > kMaxTableCells) {
      throw Error(ErrorCode::state_space_too_large,
                  "joint state space of the net exceeds " + std::to_string(kMaxTableCells));
    }
  }
  const std::vector<int> cards = net.observable_cardinalities();
  PmfTable out(keep, cards);
  const ConfigIndexer& idx = out.indexer();

  const auto& order = net.order();
  std::vector<int> values(net.num_nodes(), 0);
  std::vector<int> obs(net.num_observables(), 0);
  for (int i = 0; i < net.num_nodes(); ++i) {
    if (fixed[i] >= 0) values[i] = fixed[i];
  }

  auto recurse = [&](auto&& self, std::size_t pos, double weight) -> void {
    if (weight == 0.0) return;
    if (pos == order.size()) {
      for (VarId v = 0; v < net.num_observables(); ++v) obs[v] = values[net.node_of(v)];
      out[idx.index(obs)] += weight;
      return;
    }
    const int i = order[pos];
    if (fixed[i] >= 0) {
      self(self, pos + 1, weight);
      return;
    }
    auto row = net.row(i, values);
    for (int k = 0; k < net.node(i).cardinality; ++k) {
      values[i] = k;
      self(self, pos + 1, weight * row[k]);
    }
    values[i] = 0;
  };
  recurse(recurse, 0, 1.0);
  return out;
}

}  // namespace

PmfTable exact_observational(const CausalBayesNet& net) {
  std::vector<int> fixed(net.num_nodes(), -1);
  return enumerate_joint(net, fixed, VarSet::first_n(net.num_observables()));
}

PmfTable exact_interventional(const CausalBayesNet& net, const Assignment& x) {
  const int n_obs = net.num_observables();
  if (x.num_vars() != n_obs && !x.domain().empty()) {
    throw Error(ErrorCode::scope_mismatch, "intervention built for a different variable set");
  }
  std::vector<int> fixed(net.num_nodes(), -1);
  for (VarId v : x.domain()) {
    const int i = net.node_of(v);
    if (x.get(v) < 0 || x.get(v) >= net.node(i).cardinality) {
      throw Error(ErrorCode::invalid_query, "intervention value out of range for " +
                                                net.node(i).name);
    }
    fixed[i] = x.get(v);
  }
  return enumerate_joint(net, fixed, VarSet::first_n(n_obs) - x.domain());
}

Admg latent_project(const CausalBayesNet& net) {
  std::vector<Variable> vars;
  for (VarId v = 0; v < net.num_observables(); ++v) {
    const NetNode& node = net.node(net.node_of(v));
    vars.push_back({node.name, node.cardinality});
  }
  std::vector<Edge> directed;
  std::vector<Edge> bidirected;
  std::vector<std::vector<VarId>> hidden_children(net.num_nodes());
  for (VarId v = 0; v < net.num_observables(); ++v) {
    const NetNode& node = net.node(net.node_of(v));
    for (int p : node.parents) {
      if (auto pv = net.var_of(p)) {
        directed.emplace_back(*pv, v);
      } else {
        hidden_children[p].push_back(v);
      }
    }
  }
  for (int i = 0; i < net.num_nodes(); ++i) {
    const NetNode& node = net.node(i);
    if (!node.hidden) continue;
    if (!node.parents.empty()) {
      throw Error(ErrorCode::non_standard_form, "hidden node " + node.name + " has parents");
    }
    for (int j = 0; j < net.num_nodes(); ++j) {
      const NetNode& other = net.node(j);
      if (other.hidden && std::find(other.parents.begin(), other.parents.end(), i) !=
                              other.parents.end()) {
        throw Error(ErrorCode::non_standard_form,
                    "hidden node " + node.name + " has a hidden child");
      }
    }
    if (hidden_children[i].size() != 2) {
      throw Error(ErrorCode::non_standard_form,
                  "hidden node " + node.name + " must have exactly two observable children");
    }
    bidirected.emplace_back(hidden_children[i][0], hidden_children[i][1]);
  }
  return Admg::build(std::move(vars), directed, bidirected);
}

PositivityReport check_strong_positivity(const CausalBayesNet& net,
                                         const std::vector<VarSet>& components, double alpha) {
  const PmfTable joint = exact_observational(net);
  PositivityReport report;
  report.worst = Assignment(net.num_observables());
  std::vector<int> point(net.num_observables(), 0);
  for (std::size_t c = 0; c < components.size(); ++c) {
    VarSet pa_plus = components[c];
    for (VarId v : components[c]) pa_plus |= net.observable_parents(v);
    const PmfTable marg = joint.marginal(pa_plus);
    std::size_t arg = 0;
    for (std::size_t i = 1; i < marg.size(); ++i) {
      if (marg[i] < marg[arg]) arg = i;
    }
    const double min_p = marg.size() == 0 ? 1.0 : marg[arg];
    report.per_component_min.push_back(min_p);
    if (report.component < 0 || min_p < report.min_probability) {
      report.min_probability = min_p;
      report.component = static_cast<int>(c);
      marg.indexer().decode(arg, point);
      report.worst = Assignment(net.num_observables());
      for (VarId v : pa_plus) report.worst.set(v, point[v]);
    }
  }
  report.ok = report.min_probability >= alpha;
  return report;
}

namespace {

std::vector<double> random_row(Rng& rng, int card, double gamma) {
  std::vector<double> row(card);
  double sum = 0.0;
  for (double& p : row) {
    p = -std::log1p(-rng.uniform());
    sum += p;
  }
  double floored = 0.0;
  for (double& p : row) {
    p = std::max(p / sum, gamma);
    floored += p;
  }
  for (double& p : row) p /= floored;
  return row;
}

}  // namespace

CausalBayesNet random_net(const Admg& g, const RandomNetOptions& options) {
  Rng rng(options.seed);
  const int n = g.size();
  std::vector<NetNode> nodes(n);
  std::unordered_set<std::string> names;
  for (VarId v = 0; v < n; ++v) {
    nodes[v].name = g.name(v);
    nodes[v].cardinality = g.cardinality(v);
    names.insert(g.name(v));
    for (VarId p : g.parents(v)) nodes[v].parents.push_back(p);
  }
  for (const auto& [a, b] : g.bidirected_edges()) {
    NetNode u;
    u.name = "U_" + g.name(a) + "_" + g.name(b);
    while (names.count(u.name)) u.name += "_";
    names.insert(u.name);
    u.cardinality = options.hidden_cardinality;
    u.hidden = true;
    const int ui = static_cast<int>(nodes.size());
    nodes[a].parents.push_back(ui);
    nodes[b].parents.push_back(ui);
    nodes.push_back(std::move(u));
  }
  for (auto& node : nodes) {
    std::size_t rows = 1;
    for (int p : node.parents) rows *= static_cast<std::size_t>(nodes[p].cardinality);
    node.cpt.clear();
    node.cpt.reserve(rows * node.cardinality);
    for (std::size_t r = 0; r < rows; ++r) {
      auto row = random_row(rng, node.cardinality, options.gamma);
      node.cpt.insert(node.cpt.end(), row.begin(), row.end());
    }
  }
  return CausalBayesNet::build(std::move(nodes));
}

}  // namespace idlearn
