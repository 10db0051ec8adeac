#include "idlearn/fixtures.hpp"

namespace idlearn {

Admg mediator_chain_graph() {
  return Admg::build({{"X", 2}, {"Z1", 2}, {"Z2", 2}, {"Y", 2}},
                     {{0, 1}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}, {{0, 2}, {1, 3}});
}

Admg napkin_graph() {
  return Admg::build({{"W", 2}, {"R", 2}, {"X", 2}, {"Y", 2}}, {{0, 1}, {1, 2}, {2, 3}},
                     {{2, 0}, {3, 0}});
}

Admg bow_graph() { return Admg::build({{"X", 2}, {"Y", 2}}, {{0, 1}}, {{0, 1}}); }

CausalBayesNet confounded_bow_net() {
  NetNode x{"X", 2, false, {2}, {1.0, 0.0, 0.0, 1.0}};
  // rows: (X=0,U=0) (X=0,U=1) (X=1,U=0) (X=1,U=1); Y ignores X.
  NetNode y{"Y", 2, false, {0, 2}, {0.9, 0.1, 0.1, 0.9, 0.9, 0.1, 0.1, 0.9}};
  NetNode u{"U", 2, true, {}, {0.5, 0.5}};
  return CausalBayesNet::build({x, y, u});
}

}  // namespace idlearn
