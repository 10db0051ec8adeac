#include "support.hpp"

#include <bit>
#include <string>

namespace testsupport {

namespace {

bool acyclic(int n, const std::vector<Edge>& edges) {
  std::vector<int> indeg(n, 0);
  for (auto [a, b] : edges) ++indeg[b];
  std::vector<int> ready;
  for (int v = 0; v < n; ++v) {
    if (indeg[v] == 0) ready.push_back(v);
  }
  int seen = 0;
  while (!ready.empty()) {
    int u = ready.back();
    ready.pop_back();
    ++seen;
    for (auto [a, b] : edges) {
      if (a == u && --indeg[b] == 0) ready.push_back(b);
    }
  }
  return seen == n;
}

std::vector<Edge> pairs(int n) {
  std::vector<Edge> out;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) out.emplace_back(a, b);
  }
  return out;
}

int component_size(int n, const std::vector<Edge>& bi, int start) {
  std::vector<bool> seen(n, false);
  std::vector<int> stack{start};
  seen[start] = true;
  int size = 0;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    ++size;
    for (auto [a, b] : bi) {
      int other = a == u ? b : b == u ? a : -1;
      if (other >= 0 && !seen[other]) {
        seen[other] = true;
        stack.push_back(other);
      }
    }
  }
  return size;
}

}  // namespace

Admg random_admg(Rng& rng, const RandomAdmgSpec& spec) {
  std::vector<Edge> dir;
  std::vector<int> indeg(spec.n, 0);
  for (int b = 1; b < spec.n; ++b) {
    for (int a = 0; a < b; ++a) {
      if (indeg[b] < spec.max_in_degree && rng.uniform() < spec.p_directed) {
        dir.emplace_back(a, b);
        ++indeg[b];
      }
    }
  }
  std::vector<Edge> bi;
  for (auto e : pairs(spec.n)) {
    if (rng.uniform() >= spec.p_bidirected) continue;
    bi.push_back(e);
    if (component_size(spec.n, bi, e.first) > spec.max_component) bi.pop_back();
  }
  std::vector<Variable> vars;
  for (int i = 0; i < spec.n; ++i) vars.push_back({"V" + std::to_string(i), 2});
  return Admg::build(vars, dir, bi);
}

std::vector<std::vector<Edge>> all_dags(int n) {
  const auto ps = pairs(n);
  std::vector<std::vector<Edge>> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < ps.size(); ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<Edge> edges;
    std::size_t c = code;
    for (auto [a, b] : ps) {
      const int choice = static_cast<int>(c % 3);
      c /= 3;
      if (choice == 1) edges.emplace_back(a, b);
      if (choice == 2) edges.emplace_back(b, a);
    }
    if (acyclic(n, edges)) out.push_back(std::move(edges));
  }
  return out;
}

std::vector<std::vector<Edge>> bidirected_sets(int n, int max_edges) {
  const auto ps = pairs(n);
  std::vector<std::vector<Edge>> out;
  for (std::uint32_t mask = 0; mask < (1U << ps.size()); ++mask) {
    if (std::popcount(mask) > max_edges) continue;
    std::vector<Edge> s;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (mask >> i & 1U) s.push_back(ps[i]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

Admg binary_graph(int n, const std::vector<Edge>& directed, const std::vector<Edge>& bidirected) {
  std::vector<Variable> vars;
  for (int i = 0; i < n; ++i) vars.push_back({std::string(1, static_cast<char>('A' + i)), 2});
  return Admg::build(vars, directed, bidirected);
}

double conditional(const PmfTable& joint, VarId target, VarSet given, std::span<const int> point) {
  VarSet with = given;
  with.insert(target);
  const double num = joint.marginal(with).at(point);
  const double den = given.empty() ? joint.total() : joint.marginal(given).at(point);
  return num / den;
}

}  // namespace testsupport
