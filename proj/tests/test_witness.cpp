#include <doctest.h>

#include "idlearn/fixtures.hpp"
#include "idlearn/scm_oracle.hpp"
#include "idlearn/verify.hpp"
#include "idlearn/witness.hpp"

using namespace idlearn;

TEST_CASE("bow nets that agree observationally but not under intervention") {
  const Admg g = bow_graph();
  Assignment x(2);
  x.set(g.id("X"), 1);
  const auto pair = find_indistinguishable_pair(g, x, 1);
  REQUIRE(pair.has_value());
  CHECK(latent_project(pair->first) == g);
  CHECK(latent_project(pair->second) == g);
  // Recompute both distances independently of the search.
  const double obs = exact_tv(exact_observational(pair->first), exact_observational(pair->second));
  const double inter = exact_tv(exact_interventional(pair->first, x), exact_interventional(pair->second, x));
  CHECK(obs <= 1e-9);
  CHECK(inter >= 1e-3);
  CHECK(pair->observational_tv == doctest::Approx(obs).epsilon(1e-6));
}

TEST_CASE("identifiable queries admit no witness") {
  // X -> Y without confounding: P_x is pinned down by P.
  const Admg g = Admg::build({{"X", 2}, {"Y", 2}}, {{0, 1}}, {});
  Assignment x(2);
  x.set(0, 1);
  WitnessOptions opts;
  opts.attempts = 4;
  CHECK_FALSE(find_indistinguishable_pair(g, x, 1, opts).has_value());
}
