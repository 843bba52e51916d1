#include <doctest.h>

#include <cmath>

#include "prony/amplify.hpp"
#include "prony/error.hpp"

using namespace prony;
using doctest::Approx;

TEST_CASE("cluster signal") {
  const Signal s = cluster_signal(3, 0.2);
  CHECK(s.nodes == std::vector<double>{-0.1, 0.0, 0.1});
  CHECK(s.amplitudes == std::vector<double>{1, 1, 1});
}

TEST_CASE("counter uniform is deterministic and in range") {
  CHECK(counter_uniform(7, 1, 2, 3) == counter_uniform(7, 1, 2, 3));
  CHECK(counter_uniform(7, 1, 2, 3) != counter_uniform(8, 1, 2, 3));
  double lo = 1, hi = -1, mean = 0;
  for (int k = 0; k < 10000; ++k) {
    const double v = counter_uniform(1, 0, k, 0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    mean += v / 10000;
  }
  CHECK(lo >= -1.0);
  CHECK(hi < 1.0);
  CHECK(std::abs(mean) < 0.05);
}

TEST_CASE("linear fit") {
  const auto [slope, icept] = linear_fit(std::vector<double>{0, 1, 2}, std::vector<double>{1, 3, 5});
  CHECK(slope == Approx(2.0));
  CHECK(icept == Approx(1.0));
}

TEST_CASE("default amplification slopes are -q") {
  const AmplifyResult r = amplify(AmplifyConfig{});
  REQUIRE(r.fits.size() == 4);
  for (const AmplifyFit& f : r.fits) CHECK(std::abs(f.slope + f.q) <= 0.25);
  for (const AmplifyPoint& p : r.points) {
    CHECK(p.failures == 0);
    CHECK(p.count == 1000);
    CHECK(p.median <= p.worst);
  }
}

TEST_CASE("three-node amplification") {
  AmplifyConfig c;
  c.d = 3;
  c.h_grid = {0.4, 0.2, 0.1};
  c.trials = 200;
  c.q_list = {3, 4, 5};
  const AmplifyResult r = amplify(c);
  for (const AmplifyFit& f : r.fits) CHECK(std::abs(f.slope + f.q) <= 0.3);
}

TEST_CASE("amplification is deterministic for a seed") {
  AmplifyConfig c;
  c.trials = 100;
  const AmplifyResult a = amplify(c), b = amplify(c);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t k = 0; k < a.points.size(); ++k) CHECK(a.points[k].worst == b.points[k].worst);
  c.seed = 8;
  CHECK(amplify(c).points[5].worst != a.points[5].worst);
}

TEST_CASE("noise-free amplification gives zero distances") {
  AmplifyConfig c;
  c.eps = 0;
  c.trials = 100;
  const AmplifyResult r = amplify(c);
  for (const AmplifyPoint& p : r.points) CHECK(p.worst == 0.0);
  for (const AmplifyFit& f : r.fits) CHECK(std::isnan(f.slope));
}

TEST_CASE("amplify validation") {
  const auto bad = [](auto edit) {
    AmplifyConfig c;
    c.trials = 100;
    edit(c);
    CHECK_THROWS_AS(amplify(c), Error);
  };
  bad([](AmplifyConfig& c) { c.trials = 99; });
  bad([](AmplifyConfig& c) { c.eps = -1; });
  bad([](AmplifyConfig& c) { c.h_grid = {0.1}; });
  bad([](AmplifyConfig& c) { c.h_grid = {0.1, 0.6}; });
  bad([](AmplifyConfig& c) { c.q_list = {4}; });
  bad([](AmplifyConfig& c) { c.d = 0; });
}
