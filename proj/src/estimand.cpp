#include "idlearn/estimand.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "idlearn/error.hpp"

namespace idlearn {

ExprPtr DistExpr::base(VarSet scope) {
  auto e = std::shared_ptr<DistExpr>(new DistExpr());
  e->kind_ = ExprKind::base;
  e->scope_ = scope;
  return e;
}

ExprPtr DistExpr::marginal(ExprPtr child, VarSet drop) {
  if (!child || !child->scope().contains(drop)) {
    throw Error(ErrorCode::scope_mismatch, "marginal drops variables outside the child scope");
  }
  auto e = std::shared_ptr<DistExpr>(new DistExpr());
  e->kind_ = ExprKind::marginal;
  e->scope_ = child->scope() - drop;
  e->inputs_ = child->inputs();
  e->drop_ = drop;
  e->child_ = std::move(child);
  return e;
}

ExprPtr DistExpr::chain(ExprPtr child, std::vector<ChainFactor> factors, ChainRole role) {
  if (!child || factors.empty()) {
    throw Error(ErrorCode::scope_mismatch, "chain product needs a child and at least one factor");
  }
  VarSet targets;
  VarSet given;
  for (const auto& f : factors) {
    if (targets.contains(f.target) || f.given.contains(f.target) ||
        !child->scope().contains(f.given | VarSet::single(f.target))) {
      throw Error(ErrorCode::scope_mismatch, "malformed chain factor");
    }
    targets.insert(f.target);
    given |= f.given;
  }
  // A factor may not condition on a later target.
  VarSet later = targets;
  for (const auto& f : factors) {
    later.erase(f.target);
    if (f.given.intersects(later)) {
      throw Error(ErrorCode::scope_mismatch, "chain factors are not in topological order");
    }
  }
  auto e = std::shared_ptr<DistExpr>(new DistExpr());
  e->kind_ = ExprKind::chain;
  e->scope_ = targets;
  e->inputs_ = (given | child->inputs()) - targets;
  e->factors_ = std::move(factors);
  e->role_ = role;
  e->child_ = std::move(child);
  return e;
}

ExprPtr DistExpr::product(std::vector<ExprPtr> children) {
  VarSet scope;
  VarSet inputs;
  for (const auto& c : children) {
    if (!c || scope.intersects(c->scope())) {
      throw Error(ErrorCode::scope_mismatch, "product children must have disjoint scopes");
    }
    scope |= c->scope();
    inputs |= c->inputs();
  }
  auto e = std::shared_ptr<DistExpr>(new DistExpr());
  e->kind_ = ExprKind::product;
  e->scope_ = scope;
  e->inputs_ = inputs - scope;
  e->children_ = std::move(children);
  return e;
}

int DistExpr::depth() const {
  switch (kind_) {
    case ExprKind::base:
      return 1;
    case ExprKind::marginal:
    case ExprKind::chain:
      return 1 + child_->depth();
    case ExprKind::product: {
      int d = 0;
      for (const auto& c : children_) d = std::max(d, c->depth());
      return 1 + d;
    }
  }
  return 0;
}

bool operator==(const DistExpr& a, const DistExpr& b) {
  if (a.kind_ != b.kind_ || a.scope_ != b.scope_ || a.inputs_ != b.inputs_) return false;
  switch (a.kind_) {
    case ExprKind::base:
      return true;
    case ExprKind::marginal:
      return a.drop_ == b.drop_ && *a.child_ == *b.child_;
    case ExprKind::chain:
      return a.role_ == b.role_ && a.factors_ == b.factors_ && *a.child_ == *b.child_;
    case ExprKind::product:
      if (a.children_.size() != b.children_.size()) return false;
      for (std::size_t i = 0; i < a.children_.size(); ++i) {
        if (!(*a.children_[i] == *b.children_[i])) return false;
      }
      return true;
  }
  return false;
}

namespace {

class Evaluator {
 public:
  Evaluator(const DistAccess& p, std::span<const int> point, const Admg* names)
      : p_(p), total_(p.total_weight()), pt_(point.begin(), point.end()), names_(names) {}

  std::vector<int>& point() { return pt_; }

  double value(const DistExpr& e) {
    switch (e.kind()) {
      case ExprKind::base:
        return p_.weights(e.scope()).at(pt_) / total_;
      case ExprKind::marginal:
        return sum_over(e.drop(), [&] { return value(*e.child()); });
      case ExprKind::chain:
        return chain_value(e, e.factors().size());
      case ExprKind::product: {
        double v = 1.0;
        for (const auto& c : e.children()) {
          v *= value(*c);
          if (v == 0.0) break;
        }
        return v;
      }
    }
    return 0.0;
  }

  double mass(const DistExpr& e, VarSet vars) {
    if (vars == e.scope()) return value(e);
    switch (e.kind()) {
      case ExprKind::base:
        return p_.weights(vars).at(pt_) / total_;
      case ExprKind::marginal:
        return mass(*e.child(), vars);
      case ExprKind::chain: {
        // Trailing factors whose targets are summed out contribute exactly 1.
        std::size_t used = e.factors().size();
        while (used > 0 && !vars.contains(e.factors()[used - 1].target)) --used;
        VarSet summed;
        for (std::size_t i = 0; i < used; ++i) {
          if (!vars.contains(e.factors()[i].target)) summed.insert(e.factors()[i].target);
        }
        return sum_over(summed, [&] { return chain_value(e, used); });
      }
      case ExprKind::product:
        return sum_over(e.scope() - vars, [&] { return value(e); });
    }
    return 0.0;
  }

 private:
  double chain_value(const DistExpr& e, std::size_t used) {
    double v = 1.0;
    for (std::size_t i = 0; i < used; ++i) {
      const ChainFactor& f = e.factors()[i];
      const double den = f.given.empty() ? 1.0 : mass(*e.child(), f.given);
      if (den <= 0.0) throw zero_event(f);
      v *= mass(*e.child(), f.given | VarSet::single(f.target)) / den;
      if (v == 0.0) break;
    }
    return v;
  }

  template <class Fn>
  double sum_over(VarSet vars, Fn&& fn) {
    if (vars.empty()) return fn();
    const std::vector<VarId> order = vars.to_vector();
    std::vector<int> saved;
    for (VarId v : order) saved.push_back(pt_[v]);
    const auto& cards = p_.cardinalities();
    std::vector<double> terms;
    for (VarId v : order) pt_[v] = 0;
    while (true) {
      terms.push_back(fn());
      std::size_t i = order.size();
      while (i > 0) {
        VarId v = order[i - 1];
        if (++pt_[v] < cards[v]) break;
        pt_[v] = 0;
        --i;
      }
      if (i == 0) break;
    }
    for (std::size_t i = 0; i < order.size(); ++i) pt_[order[i]] = saved[i];
    return pairwise_sum(terms);
  }

  Error zero_event(const ChainFactor& f) const {
    std::string given;
    for (VarId v : f.given) {
      if (!given.empty()) given += ", ";
      given += (names_ ? names_->name(v) : "V" + std::to_string(v)) + "=" + std::to_string(pt_[v]);
    }
    const std::string target = names_ ? names_->name(f.target) : "V" + std::to_string(f.target);
    return Error(ErrorCode::zero_conditioning_event,
                 "conditioning event {" + given + "} has zero mass (factor for " + target + ")");
  }

  const DistAccess& p_;
  double total_;
  std::vector<int> pt_;
  const Admg* names_;
};

EvaluatedTable table_at(const DistExpr& e, const DistAccess& p, std::span<const int> context,
                        const Admg* names) {
  const VarSet need = e.scope() | e.inputs();
  if (context.size() < p.cardinalities().size() || !p.scope().contains(need)) {
    throw Error(ErrorCode::scope_mismatch, "evaluation point does not cover the expression");
  }
  EvaluatedTable out{PmfTable(e.scope(), p.cardinalities()), 0.0, false};
  Evaluator ev(p, context, names);
  const ConfigIndexer& idx = out.table.indexer();
  for (std::size_t i = 0; i < idx.size(); ++i) {
    idx.decode(i, ev.point());
    out.table[i] = ev.value(e);
  }
  out.total = out.table.total();
  out.mass_flag = std::abs(out.total - 1.0) > 1e-6;
  return out;
}

}  // namespace

double evaluate(const DistExpr& e, const DistAccess& p, std::span<const int> point) {
  if (point.size() < p.cardinalities().size()) {
    throw Error(ErrorCode::scope_mismatch, "evaluation point is shorter than the variable list");
  }
  Evaluator ev(p, point, nullptr);
  return ev.value(e);
}

double evaluate_marginal(const DistExpr& e, VarSet vars, const DistAccess& p,
                         std::span<const int> point) {
  if (!e.scope().contains(vars)) {
    throw Error(ErrorCode::scope_mismatch, "marginal outside the expression scope");
  }
  Evaluator ev(p, point, nullptr);
  return ev.mass(e, vars);
}

EvaluatedTable full_table(const DistExpr& e, const DistAccess& p, std::span<const int> context) {
  return table_at(e, p, context, nullptr);
}

std::vector<int> make_point(const Estimand& est, const Assignment& x, const Assignment& y) {
  const int n = est.graph.size();
  if (x.num_vars() != n || !x.domain().contains(est.x) ||
      (y.num_vars() != 0 && (y.num_vars() != n || !y.domain().contains(est.y)))) {
    throw Error(ErrorCode::scope_mismatch, "assignment does not cover the query variables");
  }
  std::vector<int> point(n, 0);
  for (VarId v : est.fixed.domain()) point[v] = est.fixed.get(v);
  for (VarId v : est.x) point[v] = x.get(v);
  if (y.num_vars() != 0) {
    for (VarId v : est.y) point[v] = y.get(v);
  }
  return point;
}

double evaluate(const Estimand& est, const DistAccess& p, const Assignment& x,
                const Assignment& y) {
  x.validate(est.graph);
  y.validate(est.graph);
  Evaluator ev(p, make_point(est, x, y), &est.graph);
  return ev.value(*est.expr);
}

EvaluatedTable full_table(const Estimand& est, const DistAccess& p, const Assignment& x) {
  x.validate(est.graph);
  return table_at(*est.expr, p, make_point(est, x, Assignment()), &est.graph);
}

namespace {

class Renderer {
 public:
  Renderer(const Admg& g, RenderStyle style) : g_(g), latex_(style == RenderStyle::latex) {}

  std::string run(const DistExpr& e) {
    std::string out = dist(e, VarSet());
    for (std::size_t i = 0; i < named_.size(); ++i) {
      const DistExpr& q = *named_[i];
      std::string def = q_name(i) + open();
      bool first = true;
      for (const auto& f : q.factors()) {
        if (!first) def += latex_ ? ", " : ",";
        first = false;
        def += g_.name(f.target);
      }
      def += close() + " = " + factors(q, VarSet());
      if (i == 0) {
        out += latex_ ? ",\\quad \\text{where } " : " where ";
      } else {
        out += latex_ ? ",\\quad " : "; ";
      }
      out += def;
    }
    return out;
  }

 private:
  std::string open() const { return latex_ ? "(" : "["; }
  std::string close() const { return latex_ ? ")" : "]"; }

  std::string q_name(std::size_t i) const {
    return latex_ ? "Q_{" + std::to_string(i + 1) + "}" : "Q" + std::to_string(i + 1);
  }

  std::string token(VarId v, VarSet primed) const {
    std::string s;
    for (char c : g_.name(v)) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (latex_) {
      std::size_t cut = s.size();
      while (cut > 0 && std::isdigit(static_cast<unsigned char>(s[cut - 1]))) --cut;
      if (cut > 0 && cut < s.size()) s = s.substr(0, cut) + "_{" + s.substr(cut) + "}";
    }
    if (primed.contains(v)) s += "'";
    return s;
  }

  std::string list(VarSet vars, VarSet primed) const {
    std::string out;
    for (VarId v : vars) {
      if (!out.empty()) out += latex_ ? ", " : ",";
      out += token(v, primed);
    }
    return out;
  }

  std::string source(const DistExpr& child) {
    const DistExpr* e = &child;
    while (e->kind() == ExprKind::marginal) e = e->child().get();
    if (e->kind() == ExprKind::base) return "P";
    if (e->kind() == ExprKind::chain) {
      auto it = std::find(named_.begin(), named_.end(), e);
      if (it == named_.end()) {
        named_.push_back(e);
        return q_name(named_.size() - 1);
      }
      return q_name(static_cast<std::size_t>(it - named_.begin()));
    }
    return "D";
  }

  std::string factors(const DistExpr& e, VarSet primed) {
    const std::string name = source(*e.child());
    std::string out;
    for (const auto& f : e.factors()) {
      if (latex_ && !out.empty()) out += " ";
      out += name + open() + token(f.target, primed);
      if (!f.given.empty()) out += (latex_ ? " \\mid " : "|") + list(f.given, primed);
      out += close();
    }
    return out;
  }

  std::string dist(const DistExpr& e, VarSet primed) {
    switch (e.kind()) {
      case ExprKind::base:
        return "P(" + list(e.scope(), primed) + ")";
      case ExprKind::marginal: {
        VarSet drop;
        const DistExpr* inner = &e;
        while (inner->kind() == ExprKind::marginal) {
          drop |= inner->drop();
          inner = inner->child().get();
        }
        const VarSet now = primed | drop;
        if (drop.empty()) return dist(*inner, primed);
        std::string head;
        if (latex_) {
          head = "\\sum_{" + list(drop, now) + "} ";
        } else {
          head = drop.size() == 1 ? "Σ_" + list(drop, now) : "Σ_{" + list(drop, now) + "}";
          head += " ";
        }
        return head + dist(*inner, now);
      }
      case ExprKind::chain:
        return factors(e, primed);
      case ExprKind::product: {
        std::string out;
        for (const auto& c : e.children()) {
          if (!out.empty()) out += latex_ ? " \\cdot " : " · ";
          std::string part = dist(*c, primed);
          if (c->kind() == ExprKind::marginal) {
            part = (latex_ ? "\\left(" : "(") + part + (latex_ ? "\\right)" : ")");
          }
          out += part;
        }
        return out;
      }
    }
    return "";
  }

  const Admg& g_;
  bool latex_;
  std::vector<const DistExpr*> named_;
};

}  // namespace

std::string render(const DistExpr& e, const Admg& g, RenderStyle style) {
  return Renderer(g, style).run(e);
}

std::string render(const Estimand& est, RenderStyle style) {
  std::string out = render(*est.expr, est.graph, style);
  if (!est.fixed.domain().empty()) {
    out += style == RenderStyle::latex ? ",\\quad " : "  [fixed ";
    bool first = true;
    for (VarId v : est.fixed.domain()) {
      if (!first) out += ",";
      first = false;
      out += est.graph.name(v) + "=" + std::to_string(est.fixed.get(v));
    }
    if (style == RenderStyle::text) out += "]";
  }
  return out;
}

}  // namespace idlearn
