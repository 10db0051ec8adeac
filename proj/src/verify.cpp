#include "idlearn/verify.hpp"

#include <cmath>
#include <map>

#include "idlearn/error.hpp"

namespace idlearn {

namespace {

void same_shape(const PmfTable& a, const PmfTable& b) {
  if (a.vars() != b.vars() || a.size() != b.size()) {
    throw Error(ErrorCode::scope_mismatch, "tables are over different variables");
  }
  for (VarId v : a.vars()) {
    if (a.cardinalities()[v] != b.cardinalities()[v]) {
      throw Error(ErrorCode::scope_mismatch, "tables disagree on a cardinality");
    }
  }
}

}  // namespace

double exact_tv(const PmfTable& a, const PmfTable& b) {
  same_shape(a, b);
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = std::abs(a[i] - b[i]);
  return 0.5 * pairwise_sum(diff);
}

double exact_kl(const PmfTable& a, const PmfTable& b) {
  same_shape(a, b);
  std::vector<double> terms;
  terms.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] <= 0.0) continue;
    if (b[i] <= 0.0) {
      throw Error(ErrorCode::infinite_kl, "first distribution has mass outside the support of the second");
    }
    terms.push_back(a[i] * std::log(a[i] / b[i]));
  }
  return pairwise_sum(terms);
}

std::size_t tv_sample_size(double epsilon, double delta) {
  if (!(epsilon > 0.0) || !(delta > 0.0) || delta >= 1.0) {
    throw Error(ErrorCode::invalid_query, "estimate_tv needs epsilon > 0 and 0 < delta < 1");
  }
  return static_cast<std::size_t>(std::ceil(2.0 / (epsilon * epsilon) * std::log(2.0 / delta)));
}

TvEstimate estimate_tv(const Sampler& sample_p, const Evaluator& p, const Evaluator& q,
                       double epsilon, double delta, std::uint64_t seed, int point_size) {
  TvEstimate out;
  out.m = tv_sample_size(epsilon, delta);
  Rng rng(seed);
  std::vector<int> point(point_size, 0);
  std::vector<double> terms(out.m);
  for (std::size_t s = 0; s < out.m; ++s) {
    sample_p(rng, point);
    const double pv = p(point);
    if (!(pv > 0.0)) {
      throw Error(ErrorCode::zero_evaluator_mass, "evaluator for P is zero at a sampled point");
    }
    terms[s] = std::max(0.0, 1.0 - q(point) / pv);
  }
  out.value = pairwise_sum(terms) / static_cast<double>(out.m);
  return out;
}

namespace {

double worst_q_error(const ConditionalTable& f, const PmfTable& joint) {
  const PmfTable fam = joint.marginal(f.given | VarSet::single(f.target));
  std::vector<int> point(joint.cardinalities().size(), 0);
  double worst = 0.0;
  for (std::size_t r = 0; r < f.rows(); ++r) {
    f.indexer.decode(r, point);
    double mass = 0.0;
    for (int k = 0; k < f.card; ++k) {
      point[f.target] = k;
      mass += fam.at(point);
    }
    if (mass <= 1e-300) continue;
    for (int k = 0; k < f.card; ++k) {
      point[f.target] = k;
      worst = std::max(worst, std::abs(f.row(r)[k] - fam.at(point) / mass));
    }
  }
  return worst;
}

class BlockTruth {
 public:
  BlockTruth(const CausalBayesNet& net, const Assignment& x) : net_(net), x_(x) {}

  double worst(const ConditionalTable& f) {
    const int n = net_.num_observables();
    const VarSet outside = VarSet::first_n(n) - f.block;
    const VarSet prior = f.block & f.given;
    std::vector<int> point(n, 0);
    double worst = 0.0;
    for (std::size_t r = 0; r < f.rows(); ++r) {
      std::fill(point.begin(), point.end(), 0);
      for (VarId v : x_.domain()) point[v] = x_.get(v);
      f.indexer.decode(r, point);
      Assignment doing(n);
      for (VarId v : outside) doing.set(v, point[v]);
      const PmfTable& truth = table(doing);
      const PmfTable num = truth.marginal(prior | VarSet::single(f.target));
      const double den = truth.marginal(prior).at(point);
      if (den <= 1e-300) continue;
      for (int k = 0; k < f.card; ++k) {
        point[f.target] = k;
        worst = std::max(worst, std::abs(f.row(r)[k] - num.at(point) / den));
      }
    }
    return worst;
  }

 private:
  const PmfTable& table(const Assignment& doing) {
    std::vector<int> key(doing.values().begin(), doing.values().end());
    key.push_back(static_cast<int>(doing.domain().bits()));
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, exact_interventional(net_, doing)).first;
    return it->second;
  }

  const CausalBayesNet& net_;
  const Assignment& x_;
  std::map<std::vector<int>, PmfTable> cache_;
};

}  // namespace

OracleReport compare_to_oracle(const LearnedInterventional& li, const CausalBayesNet& net) {
  if (!(latent_project(net) == li.graph)) {
    throw Error(ErrorCode::graph_mismatch, "the net's latent projection differs from the learned graph");
  }
  OracleReport rep;
  rep.learned = evaluator_table(li);
  rep.truth = exact_interventional(net, li.x);
  rep.tv = exact_tv(rep.truth, rep.learned);
  try {
    rep.kl = exact_kl(rep.truth, rep.learned);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::infinite_kl) throw;
  }
  const PmfTable joint = exact_observational(net);
  BlockTruth blocks(net, li.x);
  for (const auto& f : li.factors) {
    FactorError fe{f.target, f.source, 0.0};
    fe.worst = f.source == FactorSource::q ? worst_q_error(f, joint) : blocks.worst(f);
    rep.worst_row_error = std::max(rep.worst_row_error, fe.worst);
    rep.factors.push_back(fe);
  }
  return rep;
}

}  // namespace idlearn
