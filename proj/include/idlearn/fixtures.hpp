#pragma once

#include <cstdint>

#include "idlearn/admg.hpp"
#include "idlearn/scm_oracle.hpp"

namespace idlearn {

/// X->Z1, X->Y, Z1->Z2, Z1->Y, Z2->Y, X<->Z2, Z1<->Y. Order X, Z1, Z2, Y.
Admg mediator_chain_graph();

/// W->R, R->X, X->Y, X<->W, Y<->W. Order W, R, X, Y.
Admg napkin_graph();

/// X->Y, X<->Y.
Admg bow_graph();

/// Bow net with U ~ Bern(0.5), X = U, Y = U xor N, P(N=1) = 0.1.
CausalBayesNet confounded_bow_net();

}  // namespace idlearn
