#include <doctest.h>

#include <cmath>

#include "idlearn/error.hpp"
#include "idlearn/fixtures.hpp"
#include "idlearn/scm_oracle.hpp"
#include "support.hpp"

using namespace idlearn;

namespace {

NetNode node(const char* name, std::vector<int> parents, std::vector<double> cpt, bool hidden = false) {
  return NetNode{name, 2, hidden, std::move(parents), std::move(cpt)};
}

}  // namespace

TEST_CASE("build validates CPTs") {
  CHECK_THROWS_AS(CausalBayesNet::build({node("A", {}, {0.5, 0.6})}), Error);
  CHECK_THROWS_AS(CausalBayesNet::build({node("A", {}, {0.5, 0.5, 0.0})}), Error);
  CHECK_THROWS_AS(CausalBayesNet::build({node("A", {3}, {0.5, 0.5, 0.5, 0.5})}), Error);
  CHECK_THROWS_AS(CausalBayesNet::build({node("A", {}, {-0.5, 1.5})}), Error);
  try {
    CausalBayesNet::build({node("A", {1}, {1, 0, 0, 1}), node("B", {0}, {1, 0, 0, 1})});
    FAIL("cycle accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::cycle_detected);
  }
}

TEST_CASE("sampling") {
  SUBCASE("deterministic CPTs force one assignment") {
    const auto net = CausalBayesNet::build(
        {node("A", {}, {0, 1}), node("B", {0}, {0, 1, 1, 0}), node("C", {0, 1}, {1, 0, 1, 0, 0, 1, 1, 0})});
    const SampleSet s = sample_observational(net, 9, 200);
    REQUIRE(s.size() == 200);
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(s.at(i, 0) == 1);
      CHECK(s.at(i, 1) == 0);
      CHECK(s.at(i, 2) == 1);
    }
  }
  SUBCASE("frequency of a biased coin") {
    const auto net = CausalBayesNet::build({node("A", {}, {0.7, 0.3})});
    const SampleSet s = sample_observational(net, 4, 100000);
    double ones = 0;
    for (std::size_t i = 0; i < s.size(); ++i) ones += s.at(i, 0);
    CHECK(std::abs(ones / 100000 - 0.3) < 0.01);
  }
  SUBCASE("seed determinism and hidden columns dropped") {
    const auto net = confounded_bow_net();
    const SampleSet a = sample_observational(net, 17, 1000);
    const SampleSet b = sample_observational(net, 17, 1000);
    CHECK(a == b);
    CHECK(a.num_vars() == 2);
    CHECK(!(a == sample_observational(net, 18, 1000)));
  }
}

TEST_CASE("exact observational") {
  const auto coins = CausalBayesNet::build({node("A", {}, {0.5, 0.5}), node("B", {}, {0.5, 0.5})});
  CHECK(exact_observational(coins).probs() == std::vector<double>{0.25, 0.25, 0.25, 0.25});

  const auto uniform_bow = CausalBayesNet::build({node("U", {}, {0.5, 0.5}, true),
                                                  node("X", {0}, {0.5, 0.5, 0.5, 0.5}),
                                                  node("Y", {0, 1}, std::vector<double>(8, 0.5))});
  const PmfTable flat = exact_observational(uniform_bow);
  for (double p : flat.probs()) CHECK(p == doctest::Approx(0.25));

  // X = U, Y = U xor N with P(N=1) = 0.1, U fair.
  const PmfTable t = exact_observational(confounded_bow_net());
  CHECK(t.probs()[0] == doctest::Approx(0.45));
  CHECK(t.probs()[1] == doctest::Approx(0.05));
  CHECK(t.probs()[2] == doctest::Approx(0.05));
  CHECK(t.probs()[3] == doctest::Approx(0.45));

  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const Admg g = testsupport::random_admg(rng, {6, 3, 3, 0.4, 0.3});
    CHECK(exact_observational(random_net(g, {rng.next(), 0.1, 2})).total() == doctest::Approx(1.0));
  }
}

TEST_CASE("exact interventional") {
  SUBCASE("no confounding reduces to the conditional") {
    const auto net = CausalBayesNet::build({node("X", {}, {0.3, 0.7}), node("Y", {0}, {0.8, 0.2, 0.25, 0.75})});
    Assignment x(2);
    x.set(0, 1);
    const PmfTable t = exact_interventional(net, x);
    CHECK(t.vars() == VarSet{1});
    CHECK(t.probs()[0] == doctest::Approx(0.25));
    CHECK(t.probs()[1] == doctest::Approx(0.75));
  }
  SUBCASE("confounding separates do from see") {
    const auto net = confounded_bow_net();
    Assignment x(2);
    x.set(0, 1);
    const PmfTable doit = exact_interventional(net, x);
    const PmfTable obs = exact_observational(net);
    const double see = obs.probs()[3] / (obs.probs()[2] + obs.probs()[3]);
    CHECK(see == doctest::Approx(0.9));
    CHECK(doit.probs()[1] == doctest::Approx(0.5));
  }
  SUBCASE("empty intervention is the observational table") {
    const auto net = random_net(napkin_graph(), {12, 0.1, 2});
    const PmfTable a = exact_interventional(net, Assignment(4));
    const PmfTable b = exact_observational(net);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
  }
  SUBCASE("out of range value") {
    Assignment x(2);
    x.set(0, 2);
    CHECK_THROWS_AS(exact_interventional(confounded_bow_net(), x), Error);
  }
}

TEST_CASE("latent projection") {
  CHECK(latent_project(confounded_bow_net()) == bow_graph());

  const auto plain = CausalBayesNet::build({node("A", {}, {0.5, 0.5}), node("B", {0}, {0.5, 0.5, 0.5, 0.5})});
  CHECK(latent_project(plain).bidirected_edges().empty());

  // Mediator chain realized by hand: U1 -> {X, Z2}, U2 -> {Z1, Y}.
  std::vector<NetNode> nodes{
      node("X", {4}, {0.5, 0.5, 0.5, 0.5}),
      node("Z1", {0, 5}, std::vector<double>(8, 0.5)),
      node("Z2", {1, 4}, std::vector<double>(8, 0.5)),
      node("Y", {0, 1, 2, 5}, std::vector<double>(32, 0.5)),
      node("U1", {}, {0.5, 0.5}, true),
      node("U2", {}, {0.5, 0.5}, true),
  };
  CHECK(latent_project(CausalBayesNet::build(nodes)) == mediator_chain_graph());

  auto bad = nodes;
  bad[4].parents = {5};
  bad[4].cpt = {0.5, 0.5, 0.5, 0.5};
  CHECK_THROWS_AS(latent_project(CausalBayesNet::build(bad)), Error);

  const auto three = CausalBayesNet::build({node("U", {}, {0.5, 0.5}, true), node("A", {0}, {0.5, 0.5, 0.5, 0.5}),
                                            node("B", {0}, {0.5, 0.5, 0.5, 0.5}),
                                            node("C", {0}, {0.5, 0.5, 0.5, 0.5})});
  try {
    latent_project(three);
    FAIL("three-child hidden accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::non_standard_form);
  }

  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    const Admg g = testsupport::random_admg(rng, {7, 3, 3, 0.4, 0.3});
    CHECK(latent_project(random_net(g, {rng.next(), 0.1, 2})) == g);
  }
}

TEST_CASE("strong positivity") {
  SUBCASE("uniform independent net") {
    const auto net = CausalBayesNet::build({node("A", {}, {0.5, 0.5}), node("B", {0}, {0.5, 0.5, 0.5, 0.5})});
    const auto r = check_strong_positivity(net, {VarSet{1}}, 0.2);
    CHECK(r.ok);
    CHECK(r.min_probability == doctest::Approx(0.25));
  }
  SUBCASE("zero-probability parent configuration") {
    const auto net = CausalBayesNet::build({node("A", {}, {1.0, 0.0}), node("B", {0}, {0.5, 0.5, 0.5, 0.5})});
    const auto r = check_strong_positivity(net, {VarSet{1}}, 1e-12);
    CHECK_FALSE(r.ok);
    CHECK(r.min_probability == 0.0);
    CHECK(r.worst.get(0) == 1);
  }
  SUBCASE("mediator chain with entries in [0.2, 0.8]") {
    const Admg g = mediator_chain_graph();
    // Squash every binary row of a random realization into [0.2, 0.8].
    auto nodes = random_net(g, {21, 0.0, 2}).nodes();
    for (auto& n : nodes) {
      for (std::size_t r = 0; r < n.cpt.size(); r += 2) {
        n.cpt[r] = 0.2 + 0.6 * n.cpt[r];
        n.cpt[r + 1] = 1.0 - n.cpt[r];
      }
    }
    const auto net = CausalBayesNet::build(nodes);
    const VarSet c{g.id("X"), g.id("Z2")};
    const auto r = check_strong_positivity(net, {c}, std::pow(0.2, 3));
    CHECK(r.ok);
    // Independent minimum over the 8 events of (X, Z1, Z2).
    const PmfTable m = exact_observational(net).marginal(VarSet{0, 1, 2});
    double lo = 1.0;
    for (double p : m.probs()) lo = std::min(lo, p);
    CHECK(r.min_probability == doctest::Approx(lo).epsilon(1e-12));
  }
}

TEST_CASE("random nets are floored and normalized") {
  const auto net = random_net(mediator_chain_graph(), {1, 0.1, 2});
  CHECK(net.num_observables() == 4);
  CHECK(net.num_nodes() == 6);
  for (const auto& n : net.nodes()) {
    for (std::size_t r = 0; r < n.cpt.size(); r += n.cardinality) {
      double s = 0;
      for (int k = 0; k < n.cardinality; ++k) {
        s += n.cpt[r + k];
        CHECK(n.cpt[r + k] >= 0.1 / (1 + 0.1 * n.cardinality) - 1e-12);
      }
      CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}
