#include "idlearn/identify.hpp"

#include <algorithm>

#include "idlearn/error.hpp"

namespace idlearn {

namespace {

struct Hedge {
  VarSet s;
  VarSet f;
  VarSet x;
};

class Compiler {
 public:
  explicit Compiler(const Admg& g) : g_(g), order_(topological_order(g)) {}

  std::vector<TraceEntry> trace;
  Assignment fixed;

  ExprPtr run(VarSet y, VarSet x) {
    fixed = Assignment(g_.size());
    return id(y, x, DistExpr::base(g_.all()), g_.all());
  }

 private:
  std::string describe(VarSet y, VarSet x, VarSet v) const {
    return "y=" + g_.describe(y) + " x=" + g_.describe(x) + " V=" + g_.describe(v);
  }

  void note(const char* step, VarSet y, VarSet x, VarSet v, const std::string& extra = "") {
    std::string d = describe(y, x, v);
    if (!extra.empty()) d += "; " + extra;
    trace.push_back({step, d});
  }

  /// An(y) in G[v] with edges into x removed.
  VarSet ancestors_cut(VarSet y, VarSet x, VarSet v) const {
    VarSet seen = y & v;
    std::vector<VarId> stack = seen.to_vector();
    while (!stack.empty()) {
      VarId u = stack.back();
      stack.pop_back();
      if (x.contains(u)) continue;
      for (VarId p : g_.parents(u) & v) {
        if (!seen.contains(p)) {
          seen.insert(p);
          stack.push_back(p);
        }
      }
    }
    return seen;
  }

  std::vector<ChainFactor> factors(VarSet over, VarSet v) const {
    std::vector<ChainFactor> out;
    for (VarId u : order_) {
      if (over.contains(u)) out.push_back({u, effective_parents(g_, order_, u, v)});
    }
    return out;
  }

  ExprPtr id(VarSet y, VarSet x, ExprPtr p, VarSet v) {
    // step 1
    if (x.empty()) {
      note("step1", y, x, v);
      return (v - y).empty() ? p : DistExpr::marginal(p, v - y);
    }
    // step 2
    const VarSet an = ancestors(g_, y, v);
    if (an != v) {
      note("step2", y, x, v, "drop " + g_.describe(v - an));
      return id(y, x & an, DistExpr::marginal(p, v - an), an);
    }
    // step 3
    const VarSet w = (v - x) - ancestors_cut(y, x, v);
    if (!w.empty()) {
      note("step3", y, x, v, "w=" + g_.describe(w));
      for (VarId u : w) fixed.set(u, 0);
      return id(y, x | w, p, v);
    }
    // step 4
    const auto parts = c_components(g_, v - x);
    if (parts.size() > 1) {
      note("step4", y, x, v);
      std::vector<ExprPtr> children;
      for (VarSet s : parts) children.push_back(id(s, v - s, p, v));
      ExprPtr prod = DistExpr::product(std::move(children));
      const VarSet rest = v - (y | x);
      return rest.empty() ? prod : DistExpr::marginal(prod, rest);
    }
    const VarSet s = parts.front();
    const auto comps = c_components(g_, v);
    // step 5a
    if (comps.size() == 1) {
      note("step5a", y, x, v);
      throw Hedge{s, v, x};
    }
    // step 5b
    if (std::find(comps.begin(), comps.end(), s) != comps.end()) {
      note("step5b", y, x, v);
      ExprPtr leaf = DistExpr::chain(p, factors(s, v), ChainRole::leaf);
      return (s - y).empty() ? leaf : DistExpr::marginal(leaf, s - y);
    }
    // step 5c
    for (VarSet sp : comps) {
      if (sp.contains(s)) {
        note("step5c", y, x, v, "S'=" + g_.describe(sp));
        ExprPtr rebased = DistExpr::chain(p, factors(sp, v), ChainRole::rebase);
        return id(y, x & sp, rebased, sp);
      }
    }
    throw Error(ErrorCode::invalid_graph, "c-component of G\\X not contained in any c-component of G");
  }

  const Admg& g_;
  std::vector<VarId> order_;
};

void check_query(const Admg& g, VarSet x, VarSet y) {
  if (y.empty()) throw Error(ErrorCode::invalid_query, "query has no target variables");
  if (x.intersects(y)) {
    throw Error(ErrorCode::invalid_query,
                "intervened and target variables overlap: " + g.describe(x & y));
  }
  if (!g.all().contains(x | y)) throw Error(ErrorCode::invalid_query, "unknown query variable");
}

}  // namespace

IdResult identify(const Admg& g, VarSet x, VarSet y) {
  check_query(g, x, y);
  Compiler c(g);
  try {
    ExprPtr expr = c.run(y, x);
    Estimand est;
    est.graph = g;
    est.x = x;
    est.y = y;
    est.fixed = c.fixed;
    est.expr = std::move(expr);
    est.trace = std::move(c.trace);
    return est;
  } catch (const Hedge& h) {
    return HedgeWitness{h.s, h.f, h.x, std::move(c.trace)};
  }
}

IdResult identify(const CausalQuery& q) {
  if (q.x.num_vars() != q.graph.size()) {
    throw Error(ErrorCode::invalid_query, "intervention built for a different graph");
  }
  q.x.validate(q.graph);
  return identify(q.graph, q.x.domain(), q.y);
}

bool is_identifiable(const CausalQuery& q) { return identified(identify(q)); }

std::vector<TraceEntry> explain_trace(const CausalQuery& q) {
  IdResult r = identify(q);
  if (auto* e = std::get_if<Estimand>(&r)) return e->trace;
  return std::get<HedgeWitness>(r).trace;
}

const Estimand& require_estimand(const IdResult& r) {
  if (const auto* e = std::get_if<Estimand>(&r)) return *e;
  const auto& h = std::get<HedgeWitness>(r);
  throw Error(ErrorCode::not_identifiable,
              "query is not identifiable (hedge at step 5a, " + std::to_string(h.f.size()) +
                  " vertices)");
}

}  // namespace idlearn
