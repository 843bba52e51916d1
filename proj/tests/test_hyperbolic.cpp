#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "prony/algebra.hpp"
#include "prony/error.hpp"
#include "prony/hyperbolic.hpp"

using namespace prony;
using doctest::Approx;

TEST_CASE("root_map classification") {
  RootStatus r = root_map(MonicPolynomial{{-3, 2}});
  CHECK(r.kind == RootKind::Hyperbolic);
  REQUIRE(r.roots.size() == 2);
  CHECK(r.roots[0] == Approx(1.0).epsilon(1e-14));
  CHECK(r.roots[1] == Approx(2.0).epsilon(1e-14));

  CHECK(root_map(MonicPolynomial{{0, 1}}).kind == RootKind::HasComplexPair);

  r = root_map(MonicPolynomial{{-2, 1}});
  CHECK(r.kind == RootKind::RealWithCollisions);
  REQUIRE(r.roots.size() == 2);
  CHECK(r.roots[0] == Approx(1.0));
  CHECK(r.roots[1] == Approx(1.0));
  CHECK(r.min_gap == 0.0);
}

TEST_CASE("vieta_map") {
  CHECK(vieta_map(std::vector<double>{1, 2}).sigma == std::vector<double>{-3, 2});
  CHECK(vieta_map(std::vector<double>{4.5}).sigma == std::vector<double>{-4.5});
  CHECK_THROWS_AS(vieta_map(std::vector<double>{}), Error);
  const RootStatus r = root_map(vieta_map(std::vector<double>{-0.5, 0.1, 2.3}));
  REQUIRE(r.roots.size() == 3);
  CHECK(std::abs(r.roots[0] + 0.5) <= 1e-10);
  CHECK(std::abs(r.roots[1] - 0.1) <= 1e-10);
  CHECK(std::abs(r.roots[2] - 2.3) <= 1e-10);
}

TEST_CASE("root map inverts the vieta map") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 400; ++trial) {
    const int d = 1 + trial % 8;
    std::vector<double> x;
    while (static_cast<int>(x.size()) < d) {
      const double v = u(rng);
      if (std::all_of(x.begin(), x.end(), [v](double w) { return std::abs(v - w) >= 1e-3; })) x.push_back(v);
    }
    std::sort(x.begin(), x.end());
    const RootStatus r = root_map(vieta_map(x));
    REQUIRE(r.kind == RootKind::Hyperbolic);
    for (int j = 0; j < d; ++j) CHECK(std::abs(r.roots[j] - x[j]) <= 1e-9 * (1.0 + std::abs(x[j])) * 10.0);

    // and back
    const auto sigma = vieta_coeffs(r.roots);
    const auto ref = vieta_coeffs(x);
    for (int k = 0; k < d; ++k) CHECK(std::abs(sigma[k] - ref[k]) <= 1e-9 * (1.0 + std::abs(ref[k])));
  }
}

TEST_CASE("d = 2 classification follows the discriminant") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double s1 = u(rng), s2 = u(rng);
    const double disc = s1 * s1 - 4 * s2;
    if (std::abs(disc) < 1e-6) continue;
    CHECK((root_map(MonicPolynomial{{s1, s2}}).kind == RootKind::Hyperbolic) == (disc > 0));
  }
}

TEST_CASE("sign changes") {
  CHECK(sign_changes(std::vector<double>{3, -4, 2}) == 2);
  CHECK(sign_changes(std::vector<double>{1, 0, -1}) == 1);
  CHECK(sign_changes(std::vector<double>{0, 0, 0}) == 0);
  CHECK(sign_changes(std::vector<double>{1, 1e-20, -1}, 1e-15) == 1);
}

TEST_CASE("budan-fourier bounds") {
  const MonicPolynomial q{{0, -1}};
  CHECK(q.derivatives_at(-2) == std::vector<double>{3, -4, 2});
  BudanFourierBound b = budan_fourier(q, -2, 2);
  CHECK(b.bound == 2);
  CHECK(b.parity == 0);

  b = budan_fourier(MonicPolynomial{{0, 1}}, -10, 10);
  CHECK(b.bound % 2 == 0);
  CHECK(sturm_count(MonicPolynomial{{0, 1}}, -10, 10) == 0);

  CHECK(budan_fourier(MonicPolynomial{{-5}}, 0, 1).bound == 0);
  CHECK_THROWS_AS(budan_fourier(q, 1, 1), Error);
}

TEST_CASE("sturm counts") {
  const MonicPolynomial q{{0, -1}};
  CHECK(sturm_count(q, -2, 2) == 2);
  CHECK(sturm_count(q, 0, 2) == 1);
  CHECK(sturm_count(q, -1, 1) == 1);  // (a, b]
  CHECK_THROWS_AS(sturm_count(q, 2, 0), Error);
  CHECK_THROWS_AS(sturm_count(MonicPolynomial{{-2, 1}}, -5, 5), Error);
  CHECK(root_count_with_multiplicity(MonicPolynomial{{-2, 1}}, -5, 5) == 2);
}

TEST_CASE("sturm agrees with companion eigenvalues on random degree-6 polynomials") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int agree = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    MonicPolynomial q;
    for (int k = 0; k < 6; ++k) q.sigma.push_back(u(rng));
    double R = 1.0;
    for (double s : q.sigma) R = std::max(R, 1.0 + std::abs(s));
    const int oracle = static_cast<int>(real_eigenvalue_roots(q, 1e-7).size());
    agree += sturm_count(q, -R, R) == oracle;
  }
  CHECK(agree == 1000);
}

TEST_CASE("square-free decomposition of repeated roots") {
  // (z-1)^3 (z+2)
  const MonicPolynomial q = vieta_map(std::vector<double>{-2, 1, 1, 1});
  const auto parts = squarefree_decomposition(q);
  REQUIRE(parts.size() == 3);
  CHECK(parts[0].degree() == 1);
  CHECK(parts[2].degree() == 1);
  CHECK(root_count_with_multiplicity(q, -3, 3) == 4);
  CHECK(root_count_with_multiplicity(q, 0, 3) == 3);
  CHECK(root_count_with_multiplicity(q, -3, 0) == 1);
}

TEST_CASE("cauchy bound encloses all roots") {
  const MonicPolynomial q = vieta_map(std::vector<double>{-7, 0.5, 3});
  CHECK(cauchy_bound(q) >= 7.0);
}
