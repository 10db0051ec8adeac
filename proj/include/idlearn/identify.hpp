#pragma once

#include <variant>
#include <vector>

#include "idlearn/admg.hpp"
#include "idlearn/estimand.hpp"

namespace idlearn {

/// P_x(y) on `graph`. The domain of `x` is the intervention set X.
struct CausalQuery {
  Admg graph;
  Assignment x;
  VarSet y;
};

/// Where the recursion failed: `f` is the vertex set of the graph at that
/// point (a single c-component) and `s` the single c-component of F \ X.
struct HedgeWitness {
  VarSet s;
  VarSet f;
  VarSet x;
  std::vector<TraceEntry> trace;
};

using IdResult = std::variant<Estimand, HedgeWitness>;

/// Throws Error(invalid_query) when X and Y overlap, Y is empty, or a value
/// is out of range. The compiled tree depends only on (graph, X, Y).
IdResult identify(const CausalQuery& q);
IdResult identify(const Admg& g, VarSet x, VarSet y);

bool is_identifiable(const CausalQuery& q);

std::vector<TraceEntry> explain_trace(const CausalQuery& q);

inline bool identified(const IdResult& r) { return std::holds_alternative<Estimand>(r); }

/// Returns the estimand or throws Error(not_identifiable).
const Estimand& require_estimand(const IdResult& r);

}  // namespace idlearn
