#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "idlearn/dist_access.hpp"
#include "idlearn/fixtures.hpp"
#include "idlearn/generate.hpp"
#include "idlearn/identify.hpp"
#include "idlearn/learn.hpp"
#include "idlearn/scm_oracle.hpp"
#include "idlearn/verify.hpp"
#include "idlearn/witness.hpp"
#include "support.hpp"

using namespace idlearn;
using testsupport::for_each_config;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int n, bool ok, const std::string& detail, double secs) {
  std::printf("criterion %d: %s  %s  [%.2f s]\n", n, ok ? "PASS" : "FAIL", detail.c_str(), secs);
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double max_gap(const PmfTable& a, const PmfTable& b) {
  if (a.vars() != b.vars() || a.size() != b.size()) return INFINITY;
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, std::abs(a[i] - b[i]));
  return gap;
}

Assignment at(const Admg& g, std::initializer_list<std::pair<const char*, int>> values) {
  Assignment a(g.size());
  for (auto [n, v] : values) a.set(g.id(n), v);
  return a;
}

/// P(target | given) at a point, with the two marginals cached per (target, given).
class Conditionals {
 public:
  explicit Conditionals(const PmfTable& joint) : joint_(joint) {}

  double operator()(VarId t, VarSet given, std::span<const int> point) {
    const VarSet both = given | VarSet::single(t);
    const double den = table(given).at(point);
    return table(both).at(point) / den;
  }

 private:
  const PmfTable& table(VarSet s) {
    auto it = cache_.find(s.bits());
    if (it == cache_.end()) it = cache_.emplace(s.bits(), joint_.marginal(s)).first;
    return it->second;
  }

  const PmfTable& joint_;
  std::map<std::uint64_t, PmfTable> cache_;
};

void criterion1() {
  const auto t0 = Clock::now();
  const Admg g = mediator_chain_graph();
  const auto net = random_net(g, {2024, 0.1, 2});
  const Assignment x = at(g, {{"X", 1}});
  const Estimand est = require_estimand(identify(g, x.domain(), g.all() - x.domain()));
  const PmfTable obs = exact_observational(net);
  const double gap = max_gap(full_table(est, TableAccess(obs), x).table, exact_interventional(net, x));
  const std::string f = render(est);
  const bool factors = f.find("P[z1|x]") != std::string::npos && f.find("P[y|x,z1,z2]") != std::string::npos &&
                       f.find("Σ_x' P[x']P[z2|x',z1]") != std::string::npos;
  const double secs = seconds_since(t0);
  report(1, gap <= 1e-9 && factors && secs < 1.0, fmt("max |estimand - oracle| = %.3g", gap) + ", formula " + f,
         secs);
}

void criterion2() {
  const auto t0 = Clock::now();
  const Admg g = napkin_graph();
  const auto net = random_net(g, {2025, 0.1, 2});
  const VarId W = g.id("W"), R = g.id("R"), X = g.id("X"), Y = g.id("Y");
  const Estimand est = require_estimand(identify(g, VarSet{W, R, X}, VarSet{Y}));
  const PmfTable joint = exact_observational(net);
  const TableAccess obs(joint);
  double worst_hand = 0.0;
  double worst_oracle = 0.0;
  for (int wv = 0; wv < 2; ++wv) {
    for (int rv = 0; rv < 2; ++rv) {
      for (int xv = 0; xv < 2; ++xv) {
        const Assignment x = at(g, {{"W", wv}, {"R", rv}, {"X", xv}});
        double num[2] = {0, 0};
        std::vector<int> p(4, 0);
        p[R] = rv;
        p[X] = xv;
        for (int w = 0; w < 2; ++w) {
          p[W] = w;
          const double pw = joint.marginal(VarSet{W}).at(p);
          const double px = testsupport::conditional(joint, X, VarSet{W, R}, p);
          for (int yv = 0; yv < 2; ++yv) {
            p[Y] = yv;
            num[yv] += pw * px * testsupport::conditional(joint, Y, VarSet{X, W, R}, p);
          }
        }
        const PmfTable got = full_table(est, obs, x).table;
        const PmfTable truth = exact_interventional(net, x).marginal(VarSet{Y});
        for (int yv = 0; yv < 2; ++yv) {
          const double ratio = num[yv] / (num[0] + num[1]);
          worst_hand = std::max(worst_hand, std::abs(got[yv] - ratio));
          worst_oracle = std::max(worst_oracle, std::abs(got[yv] - truth[yv]));
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  report(2, worst_hand <= 1e-9 && worst_oracle <= 1e-9 && secs < 1.0,
         fmt("vs hand ratio %.3g", worst_hand) + fmt(", vs oracle %.3g", worst_oracle), secs);
}

void criterion3() {
  const auto t0 = Clock::now();
  const Admg g = bow_graph();
  const Assignment x = at(g, {{"X", 1}});
  const IdResult r = identify(g, x.domain(), g.all() - x.domain());
  const bool hedge = std::holds_alternative<HedgeWitness>(r);
  const auto pair = find_indistinguishable_pair(g, x, 7);
  double obs = INFINITY;
  double inter = 0.0;
  if (pair) {
    obs = exact_tv(exact_observational(pair->first), exact_observational(pair->second));
    inter = exact_tv(exact_interventional(pair->first, x), exact_interventional(pair->second, x));
  }
  const double secs = seconds_since(t0);
  report(3, hedge && obs <= 1e-9 && inter >= 1e-3 && secs < 10.0,
         std::string(hedge ? "hedge" : "no hedge") + fmt(", observational TV %.3g", obs) +
             fmt(", interventional TV %.3g", inter),
         secs);
}

void criterion4() {
  const auto t0 = Clock::now();
  const auto dags = testsupport::all_dags(4);
  const auto bis = testsupport::bidirected_sets(4, 2);
  long graphs = 0, queries = 0, identifiable = 0, evaluations = 0;
  double worst = 0.0;
  std::uint64_t seed = 1;
  for (const auto& dir : dags) {
    for (const auto& bi : bis) {
      const Admg g = testsupport::binary_graph(4, dir, bi);
      ++graphs;
      std::vector<std::pair<Estimand, VarId>> ests;
      for (VarId v = 0; v < 4; ++v) {
        ++queries;
        const IdResult r = identify(g, VarSet::single(v), g.all() - VarSet::single(v));
        if (identified(r)) ests.emplace_back(std::get<Estimand>(r), v);
      }
      identifiable += static_cast<long>(ests.size());
      if (ests.empty()) continue;
      for (int rep = 0; rep < 20; ++rep) {
        const auto net = random_net(g, {seed++, 0.1, 2});
        const TableAccess obs(exact_observational(net));
        for (const auto& [est, v] : ests) {
          Assignment x(4);
          x.set(v, static_cast<int>(seed & 1));
          worst = std::max(worst, max_gap(full_table(est, obs, x).table, exact_interventional(net, x)));
          ++evaluations;
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  char buf[256];
  std::snprintf(buf, sizeof buf, "%ld graphs, %ld queries, %ld identifiable, %ld evaluations, worst gap %.3g",
                graphs, queries, identifiable, evaluations, worst);
  report(4, graphs == 543 * 22 && worst <= 1e-7 && secs < 300.0, buf, secs);
}

struct LearningCase {
  Admg g;
  CausalBayesNet net;
  Assignment x;
  LearnedInterventional small;  // m = 1e5
  LearnedInterventional large;  // m = 1e6
  double tv_small = 0.0;
  double tv_large = 0.0;
};

/// Random n = 8 net with in-degree <= 3 and c-components of size <= 3, plus a
/// random identifiable intervention of size 1 or 2.
LearningCase make_case(std::uint64_t seed) {
  Rng rng(seed);
  while (true) {
    Admg g = testsupport::random_admg(rng, {8, 3, 3, 0.35, 0.25});
    for (int attempt = 0; attempt < 20; ++attempt) {
      VarSet xs = VarSet::single(static_cast<VarId>(rng.next() % 8));
      if (rng.uniform() < 0.5) xs.insert(static_cast<VarId>(rng.next() % 8));
      if (!identified(identify(g, xs, g.all() - xs))) continue;
      Assignment x(8);
      for (VarId v : xs) x.set(v, static_cast<int>(rng.next() & 1));
      LearningCase c{g, random_net(g, {seed * 31 + 7, 0.1, 2}), x, {}, {}};
      return c;
    }
  }
}

void criteria5to8() {
  const auto t0 = Clock::now();
  std::vector<LearningCase> cases;
  int good = 0;
  std::string detail;
  for (std::uint64_t k = 0; k < 10; ++k) {
    LearningCase c = make_case(100 + k);
    const auto small = std::make_shared<const SampleSet>(sample_observational(c.net, 1000 + k, 100000));
    const auto large = std::make_shared<const SampleSet>(sample_observational(c.net, 2000 + k, 1000000));
    c.small = learn(small, c.g, c.x, LearnConfig{});
    c.large = learn(large, c.g, c.x, LearnConfig{});
    const PmfTable truth = exact_interventional(c.net, c.x);
    c.tv_small = exact_tv(evaluator_table(c.small), truth);
    c.tv_large = exact_tv(evaluator_table(c.large), truth);
    const bool ok = c.tv_small <= 0.1 && c.tv_large <= 0.03;
    good += ok;
    char buf[160];
    std::snprintf(buf, sizeof buf, "\n    net %llu: |X|=%d ell=%d TV@1e5=%.4f TV@1e6=%.4f%s",
                  static_cast<unsigned long long>(k), c.x.domain().size(), c.large.meta.ell, c.tv_small,
                  c.tv_large, ok ? "" : "  (miss)");
    detail += buf;
    cases.push_back(std::move(c));
  }
  const double secs5 = seconds_since(t0);
  report(5, good >= 9 && secs5 < 600.0, std::to_string(good) + "/10 nets within bounds" + detail, secs5);

  // Generator vs the evaluator's own table.
  auto t1 = Clock::now();
  double worst6 = 0.0;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const LearnedInterventional& li = cases[k].large;
    const SampleSet s = sample(li, 5000 + k, 1000000);
    const PmfTable emp = empirical_table(s, li.outcome(), li.graph.cardinalities());
    worst6 = std::max(worst6, exact_tv(emp, evaluator_table(li)));
  }
  const double secs6 = seconds_since(t1);
  report(6, worst6 <= 0.01 && secs6 < 120.0, fmt("worst TV(generated, evaluator) = %.4f over 10 nets", worst6),
         secs6);

  // Normalization of every learned object, summed point by point.
  t1 = Clock::now();
  double worst7 = 0.0;
  int objects = 0;
  for (const LearningCase& c : cases) {
    for (const LearnedInterventional* li : {&c.small, &c.large}) {
      std::vector<int> point(li->graph.size(), 0);
      for (VarId v : li->x.domain()) point[v] = li->x.get(v);
      std::vector<double> terms;
      for_each_config(li->outcome(), li->graph.cardinalities(), point,
                      [&](std::vector<int>& p) { terms.push_back(evaluate_point(*li, p)); });
      worst7 = std::max(worst7, std::abs(pairwise_sum(terms) - 1.0));
      ++objects;
    }
  }
  report(7, worst7 <= 1e-9, fmt("worst |sum - 1| = %.3g", worst7) + " over " + std::to_string(objects) + " models",
         seconds_since(t1));

  // Sandwich and KL locality on the exact observational joint.
  t1 = Clock::now();
  double worst_identity = 0.0;
  double worst_kl = 0.0;
  bool bounds_ok = true;
  int checked = 0;
  for (const LearningCase& c : cases) {
    const Admg& g = c.g;
    const std::vector<int>& cards = g.cardinalities();
    const PmfTable joint = exact_observational(c.net);
    Conditionals cond(joint);

    VarSet low;
    std::vector<VarSet> low_components;
    for (VarSet comp : c_components(g)) {
      if (comp.intersects(c.x.domain())) {
        low |= comp;
        low_components.push_back(comp);
      }
    }
    const VarSet high = g.all() - low;

    // alpha: smallest P(Pa+(C_i) = z) over the low components.
    double alpha = 1.0;
    for (VarSet comp : low_components) {
      VarSet pa = comp;
      for (VarId v : comp) pa |= g.parents(v);
      const PmfTable m = joint.marginal(pa);
      for (double p : m.probs()) alpha = std::min(alpha, p);
    }
    const double floor = std::pow(alpha, low.size());

    const std::vector<VarId> topo = topological_order(g);
    std::vector<VarSet> prefix(g.size());
    VarSet seen;
    for (VarId v : topo) {
      prefix[v] = seen;
      seen.insert(v);
    }

    for (const LearnedInterventional* li : {&c.small, &c.large}) {
      const auto q = li->q_factors();
      VarSet targets;
      for (const ConditionalTable* f : q) targets.insert(f->target);
      if (targets != high) bounds_ok = false;

      std::vector<int> point(g.size(), 0);
      for_each_config(g.all(), cards, point, [&](std::vector<int>& v) {
        double big_q = 1.0;
        for (const ConditionalTable* f : q) big_q *= cond(f->target, f->given, v);
        double r = 1.0;
        for (VarId u : low) r *= cond(u, prefix[u], v);
        const double ratio = joint.at(v) / big_q;
        worst_identity = std::max(worst_identity, std::abs(ratio - r));
        if (ratio > 1.0 + 1e-9 || ratio < floor - 1e-9) bounds_ok = false;
      });

      for_each_config(low, cards, point, [&](std::vector<int>& ctx) {
        std::vector<int> p = ctx;
        PmfTable qc(high, cards);
        double lhs = 0.0;
        std::vector<double> lhs_terms;
        for_each_config(high, cards, p, [&](std::vector<int>& w) {
          double exact = 1.0;
          double learned = 1.0;
          for (const ConditionalTable* f : q) {
            exact *= cond(f->target, f->given, w);
            learned *= f->prob(w);
          }
          qc.probs()[qc.indexer().index(w)] = exact;
          lhs_terms.push_back(exact * std::log(exact / learned));
        });
        lhs = pairwise_sum(lhs_terms);

        std::vector<double> rhs_terms;
        for (const ConditionalTable* f : q) {
          const VarSet free = f->given - low;
          const PmfTable weight = qc.marginal(free);
          std::vector<int> a = ctx;
          for_each_config(free, cards, a, [&](std::vector<int>& za) {
            double kl = 0.0;
            for (int s = 0; s < cards[f->target]; ++s) {
              za[f->target] = s;
              const double pe = cond(f->target, f->given, za);
              kl += pe * std::log(pe / f->prob(za));
            }
            rhs_terms.push_back(weight.at(za) * kl);
          });
        }
        worst_kl = std::max(worst_kl, std::abs(lhs - pairwise_sum(rhs_terms)));
      });
      ++checked;
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "%d models, worst |P/Q - R| = %.3g, bounds %s, worst KL split gap = %.3g", checked,
                worst_identity, bounds_ok ? "hold" : "VIOLATED", worst_kl);
  report(8, bounds_ok && worst_identity <= 1e-9 && worst_kl <= 1e-9, buf, seconds_since(t1));
}

void criterion9() {
  const auto t0 = Clock::now();
  Rng rng(99);
  auto random_pmf = [&rng]() {
    std::vector<double> p(16);
    double s = 0;
    for (double& v : p) s += v = -std::log1p(-rng.uniform());
    for (double& v : p) v /= s;
    return PmfTable(VarSet{0}, {16}, p);
  };
  int good = 0;
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const PmfTable p = random_pmf();
    const PmfTable q = random_pmf();
    std::vector<double> cdf(p.size());
    double acc = 0;
    for (std::size_t i = 0; i < p.size(); ++i) cdf[i] = acc += p[i];
    const Sampler draw = [cdf](Rng& r, std::vector<int>& point) { point[0] = r.draw(cdf); };
    const Evaluator ep = [p](std::span<const int> point) { return p.at(point); };
    const Evaluator eq = [q](std::span<const int> point) { return q.at(point); };
    const TvEstimate e = estimate_tv(draw, ep, eq, 0.02, 0.01, 500 + t, 1);
    const double err = std::abs(e.value - exact_tv(p, q));
    worst = std::max(worst, err);
    good += err <= 4 * 0.02;
  }
  const double secs = seconds_since(t0);
  report(9, good >= 19 && secs < 60.0, std::to_string(good) + fmt("/20 within 4 eps, worst error %.4f", worst), secs);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criteria5to8();
  criterion9();
  std::printf("%s\n", failures == 0 ? "all criteria PASS" : "some criteria FAIL");
  return failures == 0 ? 0 : 1;
}
