#include <doctest.h>

#include <memory>
#include <sstream>

#include "idlearn/dist_access.hpp"
#include "idlearn/error.hpp"
#include "idlearn/fixtures.hpp"
#include "idlearn/identify.hpp"
#include "idlearn/io.hpp"
#include "idlearn/learn.hpp"
#include "idlearn/scm_oracle.hpp"

using namespace idlearn;

TEST_CASE("numbers keep 17 significant digits") {
  CHECK(dump(Json(0.1), -1) == "0.10000000000000001");
  CHECK(dump(Json(1.0), -1) == "1.0");
  CHECK(dump(Json{{"a", {1, 2}}}, -1) == R"({"a":[1, 2]})");
  const double v = 1.0 / 3.0;
  CHECK(parse_json(dump(Json(v))).get<double>() == v);
}

TEST_CASE("graph round trip and validation") {
  const Admg g = mediator_chain_graph();
  CHECK(admg_from_json(to_json(g)) == g);
  CHECK(admg_from_json(parse_json(R"({"vars":["X","Y"],"directed":[["X","Y"]],"bidirected":[["X","Y"]]})")) ==
        bow_graph());
  CHECK_THROWS_AS(admg_from_json(parse_json(R"({"vars":["X","X"]})")), Error);
  CHECK_THROWS_AS(admg_from_json(parse_json(R"({"vars":["X"],"directed":[["X","Q"]]})")), Error);
  CHECK_THROWS_AS(admg_from_json(parse_json(R"({"vars":["A","B"],"directed":[["A","B"],["B","A"]]})")), Error);
  CHECK_THROWS_AS(admg_from_json(parse_json(R"({"directed":[]})")), Error);
  CHECK_THROWS_AS(parse_json("{not json"), Error);
}

TEST_CASE("net round trip") {
  const auto net = random_net(mediator_chain_graph(), {3, 0.1, 2});
  const auto back = net_from_json(to_json(net));
  CHECK(back.num_nodes() == net.num_nodes());
  for (int i = 0; i < net.num_nodes(); ++i) {
    CHECK(back.node(i).cpt == net.node(i).cpt);
    CHECK(back.node(i).parents == net.node(i).parents);
    CHECK(back.node(i).hidden == net.node(i).hidden);
  }
  CHECK(latent_project(back) == mediator_chain_graph());
  // Nested CPT: one level per parent.
  const Json j = to_json(confounded_bow_net());
  CHECK(j["nodes"][1]["cpt"][0][1][1] == 0.9);
}

TEST_CASE("query parsing") {
  const Admg g = napkin_graph();
  const QuerySpec q = query_from_json(parse_json(R"({"intervene":[{"var":"X","value":1}]})"), g);
  CHECK(q.x.domain() == VarSet{g.id("X")});
  CHECK(q.y == g.all() - VarSet{g.id("X")});
  CHECK_THROWS_AS(query_from_json(parse_json(R"({"intervene":[{"var":"X","value":2}]})"), g), Error);
  CHECK_THROWS_AS(query_from_json(parse_json(R"({"intervene":[{"var":"X","value":1}],"targets":["X"]})"), g),
                  Error);
  CHECK_THROWS_AS(query_from_json(parse_json(R"({"intervene":[{"var":"Q","value":1}]})"), g), Error);
}

TEST_CASE("estimand round trip") {
  for (const Admg& g : {mediator_chain_graph(), napkin_graph()}) {
    const Estimand est = require_estimand(identify(g, VarSet{0}, g.all() - VarSet{0}));
    const Estimand back = estimand_from_json(parse_json(dump(to_json(est))));
    CHECK(*back.expr == *est.expr);
    CHECK(back.trace == est.trace);
    CHECK(back.fixed == est.fixed);
    CHECK(render(back) == render(est));
  }
}

TEST_CASE("learned model round trip") {
  const Admg g = mediator_chain_graph();
  const auto net = random_net(g, {7, 0.1, 2});
  Assignment x(4);
  x.set(g.id("X"), 1);
  const auto data = std::make_shared<const SampleSet>(sample_observational(net, 1, 5000));
  const LearnedInterventional li = learn(data, g, x, LearnConfig{});
  const std::string text = dump(to_json(li));
  const LearnedInterventional back = learned_from_json(parse_json(text));
  CHECK(back.order == li.order);
  CHECK(back.x == li.x);
  REQUIRE(back.factors.size() == li.factors.size());
  for (std::size_t i = 0; i < li.factors.size(); ++i) {
    CHECK(back.factors[i].probs == li.factors[i].probs);
    CHECK(back.factors[i].counts == li.factors[i].counts);
    CHECK(back.factors[i].source == li.factors[i].source);
  }
  CHECK(back.intermediates.size() == li.intermediates.size());
  CHECK(back.meta.m == 5000);
  CHECK(dump(to_json(back)) == text);
}

TEST_CASE("sample CSV") {
  const Admg g = bow_graph();
  std::istringstream in("Y,X\n1,0\n0,1\n\n");
  const SampleSet s = samples_from_csv(in, g);
  REQUIRE(s.size() == 2);
  CHECK(s.at(0, g.id("X")) == 0);
  CHECK(s.at(0, g.id("Y")) == 1);
  std::ostringstream out;
  samples_to_csv(out, s, {"X", "Y"});
  CHECK(out.str() == "X,Y\n0,1\n1,0\n");

  std::istringstream bad_value("X,Y\n0,2\n");
  CHECK_THROWS_AS(samples_from_csv(bad_value, g), Error);
  std::istringstream missing("X\n0\n");
  CHECK_THROWS_AS(samples_from_csv(missing, g), Error);
  std::istringstream junk("X,Y\n0,a\n");
  CHECK_THROWS_AS(samples_from_csv(junk, g), Error);
}
