#include "idlearn/learn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "idlearn/error.hpp"
#include "idlearn/identify.hpp"
#include "idlearn/rng.hpp"

namespace idlearn {

RelativePartition relative_partition(const Admg& g, VarSet x) {
  if (!g.all().contains(x)) throw Error(ErrorCode::invalid_query, "unknown intervention variable");
  RelativePartition part;
  std::vector<VarSet> low;
  std::vector<VarSet> high;
  for (VarSet c : c_components(g)) (c.intersects(x) ? low : high).push_back(c);
  part.ell = static_cast<int>(low.size());
  for (VarSet c : low) {
    part.components.push_back(c);
    part.x_parts.push_back(c & x);
    part.c_low |= c;
    part.sub_components.push_back(c_components(g, c - x));
  }
  for (VarSet c : high) {
    part.components.push_back(c);
    part.c_high |= c;
  }
  return part;
}

ConditionalTable::ConditionalTable(VarId t, VarSet g, const std::vector<int>& cards)
    : target(t), given(g), card(cards[t]), indexer(g, cards) {
  probs.assign(indexer.size() * card, 0.0);
}

void ConditionalTable::finalize() {
  cdf.assign(probs.size(), 0.0);
  for (std::size_t r = 0; r < rows(); ++r) {
    double* p = probs.data() + r * card;
    double sum = 0.0;
    for (int k = 0; k < card; ++k) sum += p[k];
    for (int k = 0; k < card; ++k) p[k] = sum > 0.0 ? p[k] / sum : 1.0 / card;
    double acc = 0.0;
    for (int k = 0; k < card; ++k) {
      acc += p[k];
      cdf[r * card + k] = acc;
    }
  }
}

SampleBudget sample_budget(const Admg& g, const RelativePartition& part, const LearnConfig& cfg) {
  int k = 1;
  for (VarSet c : part.components) k = std::max(k, c.size());
  const int d = std::max(1, max_in_degree(g));
  int sigma = 2;
  for (int c : g.cardinalities()) sigma = std::max(sigma, c);
  const double n = std::max(1, g.size());
  const double ell = part.ell;
  SampleBudget b;
  b.eps_q = cfg.epsilon / 2.0;
  const double width = std::pow(sigma, k * d + d);
  b.m_q = n * width / (std::pow(cfg.alpha, part.c_low.size()) * b.eps_q * b.eps_q) *
          std::log(n * width * sigma / cfg.delta);
  if (part.ell > 0) {
    b.eps_r = cfg.epsilon /
              (2.0 * std::pow(3.0 * k, k + 1) * ell * std::pow(sigma, k * part.ell));
    b.m_r = std::pow(3.0 * k, 2.0 * (k + 3)) * ell * ell * ell * d /
            (cfg.alpha * cfg.alpha * b.eps_r * b.eps_r) * std::log(sigma * k * ell / cfg.delta);
  }
  const double m = std::ceil(std::max(b.m_q, b.m_r));
  const double cap = static_cast<double>(std::numeric_limits<std::size_t>::max());
  b.m = m >= cap ? std::numeric_limits<std::size_t>::max() : static_cast<std::size_t>(m);
  return b;
}

std::vector<ConditionalTable> learn_q(const DistAccess& data, const Admg& g,
                                      const RelativePartition& part) {
  const auto order = topological_order(g);
  const auto& cards = g.cardinalities();
  std::vector<ConditionalTable> out;
  std::vector<int> point(g.size(), 0);
  for (VarId v : order) {
    if (!part.c_high.contains(v)) continue;
    ConditionalTable t(v, effective_parents(g, order, v), cards);
    t.source = FactorSource::q;
    const PmfTable& w = data.weights(t.given | VarSet::single(v));
    if (!data.exact()) t.counts.assign(t.probs.size(), 0.0);
    for (std::size_t r = 0; r < t.rows(); ++r) {
      t.indexer.decode(r, point);
      double total = 0.0;
      for (int k = 0; k < t.card; ++k) {
        point[v] = k;
        total += w.at(point);
      }
      for (int k = 0; k < t.card; ++k) {
        point[v] = k;
        const double c = w.at(point);
        if (data.exact()) {
          t.probs[r * t.card + k] = total > 0.0 ? c / total : 1.0 / t.card;
        } else {
          t.counts[r * t.card + k] = c;
          t.probs[r * t.card + k] = (c + 1.0) / (total + t.card);
        }
      }
      point[v] = 0;
    }
    t.finalize();
    out.push_back(std::move(t));
  }
  return out;
}

namespace {

std::string event_text(const Admg& g, VarSet vars, std::span<const int> point) {
  std::string s;
  for (VarId v : vars) {
    if (!s.empty()) s += ", ";
    s += g.name(v) + "=" + std::to_string(point[v]);
  }
  return "{" + s + "}";
}

void collect_rebases(const ExprPtr& e, std::vector<const DistExpr*>& out) {
  if (!e) return;
  if (e->kind() == ExprKind::chain && e->role() == ChainRole::rebase &&
      std::find(out.begin(), out.end(), e.get()) == out.end()) {
    out.push_back(e.get());
  }
  collect_rebases(e->child(), out);
  for (const auto& c : e->children()) collect_rebases(c, out);
}

bool rests_on_base(const DistExpr& e) {
  const DistExpr* p = &e;
  while (p->kind() == ExprKind::marginal) p = p->child().get();
  return p->kind() == ExprKind::base;
}

class BlockLearner {
 public:
  BlockLearner(const DistAccess& data, const Admg& g, const Assignment& x, int k, double eps_r)
      : data_(data), g_(g), x_(x), order_(topological_order(g)), k_(k), eps_r_(eps_r) {
    base_.assign(g.size(), 0);
    for (VarId v : x.domain()) base_[v] = x.get(v);
    rank_.assign(g.size(), 0);
    for (std::size_t i = 0; i < order_.size(); ++i) rank_[order_[i]] = static_cast<int>(i);
  }

  RFactor run(int i, int j, VarSet c) {
    RFactor out;
    out.i = i;
    out.j = j;
    out.c = c;
    out.estimand = require_estimand(identify(g_, g_.all() - c, c));
    const Estimand& est = out.estimand;
    for (VarId v : est.fixed.domain()) base_[v] = est.fixed.get(v);
    const VarSet xs = x_.domain();
    const DistExpr& e = *est.expr;
    try {
      if (e.kind() == ExprKind::chain && e.role() == ChainRole::leaf) {
        leaf_tables(e, c, xs, out.tables);
      } else {
        chain_rule_tables(e, c, xs, out.tables);
      }
      intermediates(est, i, out.intermediates);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::zero_conditioning_event) throw;
      throw Error(ErrorCode::positivity_violation, err.what());
    }
    for (VarId v : est.fixed.domain()) base_[v] = x_.domain().contains(v) ? x_.get(v) : 0;
    return out;
  }

 private:
  VarSet prefix(VarId t) const {
    VarSet s;
    for (int r = 0; r < rank_[t]; ++r) s.insert(order_[r]);
    return s;
  }

  ConditionalTable make_table(VarId t, VarSet given, VarSet c) const {
    ConditionalTable tab(t, given, g_.cardinalities());
    tab.source = FactorSource::s;
    tab.block = c;
    return tab;
  }

  // The block estimand is already a product of per-variable conditionals.
  void leaf_tables(const DistExpr& e, VarSet c, VarSet xs, std::vector<ConditionalTable>& out) {
    for (const ChainFactor& f : e.factors()) {
      ConditionalTable tab = make_table(f.target, f.given - xs, c);
      std::vector<int> point = base_;
      for (std::size_t r = 0; r < tab.rows(); ++r) {
        tab.indexer.decode(r, point);
        const double den =
            f.given.empty() ? 1.0 : evaluate_marginal(*e.child(), f.given, data_, point);
        if (!(den > 0.0)) throw violation(f.given, point);
        for (int k = 0; k < tab.card; ++k) {
          point[f.target] = k;
          tab.probs[r * tab.card + k] =
              evaluate_marginal(*e.child(), f.given | VarSet::single(f.target), data_, point) / den;
        }
        point[f.target] = 0;
      }
      out.push_back(std::move(tab));
    }
  }

  // General case: chain rule over the block in global order. Inputs later
  // than the target cannot move the marginal on earlier block variables, so
  // they stay at 0.
  void chain_rule_tables(const DistExpr& e, VarSet c, VarSet xs,
                         std::vector<ConditionalTable>& out) {
    const VarSet free_inputs = e.inputs() - xs;
    for (VarId t : order_) {
      if (!c.contains(t)) continue;
      const VarSet before = prefix(t);
      const VarSet prior = c & before;
      ConditionalTable tab = make_table(t, prior | (free_inputs & before), c);
      std::vector<int> point = base_;
      for (std::size_t r = 0; r < tab.rows(); ++r) {
        tab.indexer.decode(r, point);
        const double den = prior.empty() ? 1.0 : evaluate_marginal(e, prior, data_, point);
        if (!(den > 0.0)) throw violation(prior, point);
        for (int k = 0; k < tab.card; ++k) {
          point[t] = k;
          tab.probs[r * tab.card + k] =
              evaluate_marginal(e, prior | VarSet::single(t), data_, point) / den;
        }
        point[t] = 0;
      }
      out.push_back(std::move(tab));
    }
  }

  void intermediates(const Estimand& est, int block, std::vector<IntermediateTable>& out) {
    std::vector<const DistExpr*> rebases;
    collect_rebases(est.expr, rebases);
    const VarSet xs = x_.domain();
    const auto& cards = g_.cardinalities();
    // Innermost tables are estimated from data, each later one derived from
    // the previous table.
    std::vector<double> eta(rebases.size(), 0.0);
    const double sampled = data_.exact() ? 0.0 : 3.0 * k_ * eps_r_;
    for (std::size_t n = rebases.size(); n-- > 0;) {
      const bool from_data = rests_on_base(*rebases[n]->child()) || n + 1 == rebases.size();
      eta[n] = from_data ? sampled : 3.0 * k_ * eta[n + 1];
    }
    for (std::size_t n = 0; n < rebases.size(); ++n) {
      const DistExpr& q = *rebases[n];
      IntermediateTable it;
      it.name = "Q" + std::to_string(n + 1);
      it.block = block;
      it.scope = q.scope();
      it.given = q.inputs() - xs;
      it.eta = eta[n];
      it.table = PmfTable(it.scope | it.given, cards);
      std::vector<int> point = base_;
      const ConfigIndexer& idx = it.table.indexer();
      for (std::size_t r = 0; r < idx.size(); ++r) {
        idx.decode(r, point);
        it.table[r] = evaluate(q, data_, point);
      }
      out.push_back(std::move(it));
    }
  }

  Error violation(VarSet vars, std::span<const int> point) const {
    return Error(ErrorCode::positivity_violation,
                 "conditioning event " + event_text(g_, vars, point) + " has zero mass");
  }

  const DistAccess& data_;
  const Admg& g_;
  const Assignment& x_;
  std::vector<VarId> order_;
  std::vector<int> rank_;
  std::vector<int> base_;
  int k_;
  double eps_r_;
};

}  // namespace

std::vector<RFactor> learn_r(const DistAccess& data, const Admg& g, const RelativePartition& part,
                             const Assignment& x, const LearnConfig& cfg) {
  int k = 1;
  for (VarSet c : part.components) k = std::max(k, c.size());
  const SampleBudget budget = sample_budget(g, part, cfg);
  BlockLearner learner(data, g, x, k, budget.eps_r);
  std::vector<RFactor> out;
  for (int i = 0; i < part.ell; ++i) {
    for (std::size_t j = 0; j < part.sub_components[i].size(); ++j) {
      out.push_back(learner.run(i, static_cast<int>(j), part.sub_components[i][j]));
    }
  }
  return out;
}

std::vector<const ConditionalTable*> LearnedInterventional::q_factors() const {
  std::vector<const ConditionalTable*> out;
  for (const auto& f : factors) {
    if (f.source == FactorSource::q) out.push_back(&f);
  }
  return out;
}

std::vector<const ConditionalTable*> LearnedInterventional::s_factors() const {
  std::vector<const ConditionalTable*> out;
  for (const auto& f : factors) {
    if (f.source == FactorSource::s) out.push_back(&f);
  }
  return out;
}

void LearnedInterventional::check_structure() const {
  if (order.size() != factors.size()) {
    throw Error(ErrorCode::scope_mismatch, "factor list does not match the sampling order");
  }
  VarSet known = x.domain();
  VarSet seen;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const ConditionalTable& f = factors[i];
    if (f.target != order[i] || known.contains(order[i])) {
      throw Error(ErrorCode::scope_mismatch, "factor order is inconsistent");
    }
    if (!known.contains(f.given)) {
      throw Error(ErrorCode::scope_mismatch,
                  "factor for " + graph.name(f.target) + " conditions on a later variable");
    }
    known.insert(order[i]);
    seen.insert(order[i]);
  }
  if (seen != outcome()) throw Error(ErrorCode::scope_mismatch, "factors do not cover V \\ X");
}

LearnedInterventional assemble(std::vector<ConditionalTable> q, std::vector<RFactor> r,
                               const RelativePartition& part, const Admg& g, const Assignment& x) {
  (void)part;
  LearnedInterventional li;
  li.graph = g;
  li.x = x;
  std::vector<ConditionalTable*> slot(g.size(), nullptr);
  for (auto& t : q) slot[t.target] = &t;
  for (auto& rf : r) {
    for (auto& t : rf.tables) slot[t.target] = &t;
  }
  for (VarId v : topological_order(g)) {
    if (x.domain().contains(v)) continue;
    if (!slot[v]) {
      throw Error(ErrorCode::scope_mismatch, "no learned factor for " + g.name(v));
    }
    li.order.push_back(v);
    slot[v]->finalize();
    li.factors.push_back(std::move(*slot[v]));
  }
  for (auto& rf : r) {
    RBlock b;
    b.i = rf.i;
    b.j = rf.j;
    b.c = rf.c;
    b.formula = render(rf.estimand);
    b.trace = rf.estimand.trace;
    li.blocks.push_back(std::move(b));
    const int index = static_cast<int>(li.blocks.size()) - 1;
    for (auto& it : rf.intermediates) {
      it.block = index;
      li.intermediates.push_back(std::move(it));
    }
  }
  li.check_structure();
  return li;
}

LearnedInterventional learn(const DistAccess& data, const Admg& g, const Assignment& x,
                            const LearnConfig& cfg) {
  if (x.num_vars() != g.size()) {
    throw Error(ErrorCode::invalid_query, "intervention built for a different graph");
  }
  x.validate(g);
  if (!data.scope().contains(g.all()) || data.cardinalities() != g.cardinalities()) {
    throw Error(ErrorCode::scope_mismatch, "data does not cover the graph's variables");
  }
  const VarSet xs = x.domain();
  if (xs != g.all()) require_estimand(identify(g, xs, g.all() - xs));
  const RelativePartition part = relative_partition(g, xs);
  auto q = learn_q(data, g, part);
  auto r = learn_r(data, g, part, x, cfg);
  LearnedInterventional li = assemble(std::move(q), std::move(r), part, g, x);
  li.meta.m = data.exact() ? 0 : static_cast<std::size_t>(data.total_weight());
  li.meta.exact = data.exact();
  li.meta.epsilon = cfg.epsilon;
  li.meta.delta = cfg.delta;
  li.meta.alpha = cfg.alpha;
  li.meta.k = 1;
  for (VarSet c : part.components) li.meta.k = std::max(li.meta.k, c.size());
  li.meta.d = max_in_degree(g);
  li.meta.ell = part.ell;
  li.meta.budget = sample_budget(g, part, cfg);
  li.meta.rng = Rng::kAlgorithm;
  return li;
}

LearnedInterventional learn(std::shared_ptr<const SampleSet> samples, const Admg& g,
                            const Assignment& x, const LearnConfig& cfg) {
  EmpiricalAccess data(std::move(samples), g.cardinalities(), cfg.threads);
  return learn(data, g, x, cfg);
}

double evaluate_point(const LearnedInterventional& li, std::span<const int> point) {
  std::vector<int> pt(point.begin(), point.end());
  for (VarId v : li.x.domain()) pt[v] = li.x.get(v);
  double p = 1.0;
  for (const auto& f : li.factors) {
    p *= f.prob(pt);
    if (p == 0.0) break;
  }
  return p;
}

double evaluate_point(const LearnedInterventional& li, const Assignment& y) {
  if (y.num_vars() != li.graph.size() || !y.domain().contains(li.outcome())) {
    throw Error(ErrorCode::scope_mismatch, "assignment does not cover V \\ X");
  }
  y.validate(li.graph);
  return evaluate_point(li, y.values());
}

PmfTable evaluator_table(const LearnedInterventional& li) {
  PmfTable out(li.outcome(), li.graph.cardinalities());
  std::vector<int> point(li.graph.size(), 0);
  for (VarId v : li.x.domain()) point[v] = li.x.get(v);
  const ConfigIndexer& idx = out.indexer();
  for (std::size_t i = 0; i < idx.size(); ++i) {
    idx.decode(i, point);
    double p = 1.0;
    for (const auto& f : li.factors) p *= f.prob(point);
    out[i] = p;
  }
  return out;
}

}  // namespace idlearn
