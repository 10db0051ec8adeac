#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "idlearn/admg.hpp"
#include "idlearn/dist_access.hpp"
#include "idlearn/pmf_table.hpp"

namespace idlearn {

enum class ExprKind { base, marginal, chain, product };

/// leaf: a terminal product of conditionals. rebase: the product defines a new
/// distribution that later nodes condition on.
enum class ChainRole { leaf, rebase };

/// child[target | given], derived as a ratio of two marginals of the child.
struct ChainFactor {
  VarId target;
  VarSet given;
  friend bool operator==(const ChainFactor&, const ChainFactor&) = default;
};

class DistExpr;
using ExprPtr = std::shared_ptr<const DistExpr>;

/// Distribution-valued expression over observational marginals. Every node
/// has a scope (the variables it is a distribution over) and inputs (variables
/// it reads from the evaluation point without being a distribution over them).
class DistExpr {
 public:
  static ExprPtr base(VarSet scope);
  /// Sum `child` over `drop`.
  static ExprPtr marginal(ExprPtr child, VarSet drop);
  /// Product of child[target | given] over `factors`, which must be listed in
  /// topological order. Scope is the set of targets.
  static ExprPtr chain(ExprPtr child, std::vector<ChainFactor> factors, ChainRole role);
  /// Product of children with pairwise disjoint scopes.
  static ExprPtr product(std::vector<ExprPtr> children);

  ExprKind kind() const { return kind_; }
  VarSet scope() const { return scope_; }
  VarSet inputs() const { return inputs_; }

  const ExprPtr& child() const { return child_; }
  VarSet drop() const { return drop_; }
  const std::vector<ChainFactor>& factors() const { return factors_; }
  ChainRole role() const { return role_; }
  const std::vector<ExprPtr>& children() const { return children_; }

  int depth() const;

  friend bool operator==(const DistExpr& a, const DistExpr& b);

 private:
  DistExpr() = default;

  ExprKind kind_ = ExprKind::base;
  VarSet scope_;
  VarSet inputs_;
  ExprPtr child_;
  VarSet drop_;
  std::vector<ChainFactor> factors_;
  ChainRole role_ = ChainRole::leaf;
  std::vector<ExprPtr> children_;
};

/// Value of `e` at `point` (full-length, indexed by VarId; must hold values
/// for scope and inputs). Throws Error(zero_conditioning_event) when a
/// conditional has zero conditioning mass.
double evaluate(const DistExpr& e, const DistAccess& p, std::span<const int> point);

/// Marginal of `e` onto `vars` (a subset of e.scope()) at `point`.
double evaluate_marginal(const DistExpr& e, VarSet vars, const DistAccess& p,
                         std::span<const int> point);

struct EvaluatedTable {
  PmfTable table;
  double total = 0.0;
  /// Set when |total - 1| > 1e-6.
  bool mass_flag = false;
};

/// Evaluates `e` at every configuration of its scope; inputs are read from
/// `context`.
EvaluatedTable full_table(const DistExpr& e, const DistAccess& p, std::span<const int> context);

struct TraceEntry {
  std::string step;
  std::string description;
  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

/// Compiled interventional query P_x(y).
struct Estimand {
  Admg graph;
  VarSet x;
  VarSet y;
  /// Variables pinned by the "arbitrary w" rule, each at value 0.
  Assignment fixed;
  ExprPtr expr;
  std::vector<TraceEntry> trace;
};

/// Evaluation point for `est` with X = x and Y = y.
std::vector<int> make_point(const Estimand& est, const Assignment& x, const Assignment& y);

/// P_x(y). `x` must cover est.x, `y` must cover est.y.
double evaluate(const Estimand& est, const DistAccess& p, const Assignment& x,
                const Assignment& y);

/// The whole table P_x(Y).
EvaluatedTable full_table(const Estimand& est, const DistAccess& p, const Assignment& x);

enum class RenderStyle { text, latex };

std::string render(const DistExpr& e, const Admg& g, RenderStyle style = RenderStyle::text);
std::string render(const Estimand& est, RenderStyle style = RenderStyle::text);

}  // namespace idlearn
