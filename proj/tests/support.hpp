#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "idlearn/admg.hpp"
#include "idlearn/pmf_table.hpp"
#include "idlearn/rng.hpp"

namespace testsupport {

using namespace idlearn;

struct RandomAdmgSpec {
  int n = 6;
  int max_in_degree = 3;
  int max_component = 3;
  double p_directed = 0.35;
  double p_bidirected = 0.25;
};

/// Random ADMG over binary variables V0..V{n-1}; index order is topological.
/// In-degree and c-component size caps are enforced by rejection per edge.
Admg random_admg(Rng& rng, const RandomAdmgSpec& spec);

/// Every labeled DAG on n nodes (each unordered pair absent or oriented).
std::vector<std::vector<Edge>> all_dags(int n);

/// Every set of at most `max_edges` unordered pairs over n nodes.
std::vector<std::vector<Edge>> bidirected_sets(int n, int max_edges);

/// Binary ADMG with variables named A, B, C, ...
Admg binary_graph(int n, const std::vector<Edge>& directed, const std::vector<Edge>& bidirected);

/// P(target = point[target] | given = point) read straight off a joint table.
double conditional(const PmfTable& joint, VarId target, VarSet given, std::span<const int> point);

/// Iterates every configuration of `vars` (cards by VarId), writing into a
/// full-length point; calls fn(point).
template <class Fn>
void for_each_config(VarSet vars, const std::vector<int>& cards, std::vector<int>& point, Fn&& fn) {
  const std::vector<VarId> vs = vars.to_vector();
  for (VarId v : vs) point[v] = 0;
  while (true) {
    fn(point);
    int i = static_cast<int>(vs.size()) - 1;
    while (i >= 0 && ++point[vs[i]] == cards[vs[i]]) point[vs[i--]] = 0;
    if (i < 0) return;
  }
}

}  // namespace testsupport
