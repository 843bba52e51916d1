#include <doctest.h>

#include <cmath>
#include <random>

#include "prony/error.hpp"
#include "prony/solver.hpp"
#include "random_signals.hpp"

using namespace prony;
using doctest::Approx;

TEST_CASE("solve examples") {
  SolveOutcome r = solve(MomentVector{{2, 3, 5, 9}, 2});
  REQUIRE(r.kind == SolveKind::Unique);
  CHECK(r.signal->nodes[0] == Approx(1.0));
  CHECK(r.signal->nodes[1] == Approx(2.0));
  CHECK(r.signal->amplitudes[0] == Approx(1.0));
  CHECK(r.signal->amplitudes[1] == Approx(1.0));
  CHECK(r.diagnostics.delta == Approx(1.0));
  CHECK(r.diagnostics.residual_norm < 1e-12);

  r = solve(MomentVector{{0, 0, 1, 0}, 2});
  CHECK(r.kind == SolveKind::Empty);
  CHECK_FALSE(r.signal);

  r = solve(MomentVector{{2, 0, 2, 0}, 2});
  REQUIRE(r.kind == SolveKind::Unique);
  CHECK(r.signal->nodes[0] == Approx(-1.0));
  CHECK(r.signal->nodes[1] == Approx(1.0));
  CHECK(r.signal->amplitudes[0] == Approx(1.0));
  CHECK(r.signal->amplitudes[1] == Approx(1.0));
}

TEST_CASE("solve degenerate inputs") {
  // z^2 + 1 from a consistent system: complex nodes
  CHECK(solve(MomentVector{{2, 0, -2, 0}, 2}).kind == SolveKind::NonHyperbolic);
  // all moments zero: every coefficient vector solves the system
  const SolveOutcome z = solve(MomentVector{{0, 0, 0, 0}, 2});
  CHECK(z.kind == SolveKind::DegenerateHankel);
  REQUIRE(z.subspace);
  CHECK(z.subspace->dimension() == 2);

  CHECK_THROWS_AS(solve(MomentVector{{2, 3, 5}, 2}), Error);
  CHECK_THROWS_AS(solve(MomentVector{{2, 3, 5, 9, 17}, 2}), Error);
}

TEST_CASE("round trip on random signals") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 1 + trial % 5;
    const Signal s = testing::random_signal(rng, d);
    const SolveOutcome r = solve(moments(s, 2 * d - 1));
    REQUIRE(r.kind == SolveKind::Unique);
    for (int j = 0; j < d; ++j) {
      CHECK(std::abs(r.signal->nodes[j] - s.nodes[j]) <= 1e-7);
      CHECK(std::abs(r.signal->amplitudes[j] - s.amplitudes[j]) <= 1e-6 * std::abs(s.amplitudes[j]));
      if (j) CHECK(r.signal->nodes[j] > r.signal->nodes[j - 1]);
    }
  }
}

TEST_CASE("small moment noise moves a separated solution continuously") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + trial % 3;
    const Signal s{testing::signed_amplitudes(rng, d, 0.5, 2.0), testing::spaced_nodes(rng, d, -1, 1, 0.4)};
    MomentVector m = moments(s, 2 * d - 1);
    for (double& v : m.values) v += 1e-6 * u(rng);
    const SolveOutcome r = solve(m);
    REQUIRE(r.kind == SolveKind::Unique);
    for (int j = 0; j < d; ++j) CHECK(std::abs(r.signal->nodes[j] - s.nodes[j]) <= 1e-3);
  }
}

TEST_CASE("newton polish never raises the residual") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 3 + trial % 3;
    const Signal s = testing::random_signal(rng, d);
    const MomentVector m = moments(s, 2 * d - 1);
    SolveOptions raw;
    raw.polish_steps = 0;
    const SolveOutcome a = solve(m, raw), b = solve(m);
    REQUIRE(a.kind == SolveKind::Unique);
    REQUIRE(b.kind == SolveKind::Unique);
    CHECK(b.diagnostics.residual_norm <= a.diagnostics.residual_norm);
    CHECK(b.diagnostics.residual_norm <= 1e-12 * (1 + m.max_abs(m.size())));
  }
}
