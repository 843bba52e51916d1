#pragma once

// Monic real polynomials, the hyperbolic set, the root and Vieta maps, and
// real-root counting (Budan-Fourier and Sturm).

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace prony {

/// Q(z) = z^d + sigma_1 z^{d-1} + ... + sigma_d.
struct MonicPolynomial {
  std::vector<double> sigma;

  std::size_t degree() const noexcept { return sigma.size(); }

  double operator()(double z) const noexcept;

  /// (Q(l), Q'(l), ..., Q^{(d)}(l)) by repeated synthetic division.
  std::vector<double> derivatives_at(double l) const;

  /// Full coefficient vector, highest degree first (leading 1 included).
  std::vector<double> coefficients() const;

  /// sum_k |sigma_k| |z|^{d-k}, including the leading term; a rounding
  /// scale for evaluations of Q near z.
  double magnitude_at(double z) const noexcept;
};

enum class RootKind { Hyperbolic, RealWithCollisions, HasComplexPair };

struct RootStatus {
  RootKind kind = RootKind::HasComplexPair;
  std::vector<double> roots;  ///< sorted, multiplicity-expanded; empty unless all real
  double min_gap = 0.0;
};

/// Default relative tolerance of root_map.
inline constexpr double kCollisionTol = 1e-9;

/// Roots of q classified against the hyperbolic set. Roots come from the
/// companion-matrix eigenvalues, real candidates are polished by Newton.
/// A root is real when |Im| <= tol (1 + |Re|); real roots collide when their
/// gap is <= tol (1 + max|root|).
RootStatus root_map(const MonicPolynomial& q, double tol = kCollisionTol);

/// Companion eigenvalues with |Im| <= imag_tol (1 + |Re|), unpolished and
/// sorted; an independent oracle for the counting routines.
std::vector<double> real_eigenvalue_roots(const MonicPolynomial& q, double imag_tol);

MonicPolynomial vieta_map(std::span<const double> x);

/// Adjacent strict sign flips after dropping entries with |v| <= zero_tol.
int sign_changes(std::span<const double> seq, double zero_tol = 0.0);

struct BudanFourierBound {
  int bound = 0;   ///< nu(a) - nu(b)
  int parity = 0;  ///< bound mod 2
};

/// Upper bound, with matching parity, for the number of roots of q in (a, b]
/// counted with multiplicity.
BudanFourierBound budan_fourier(const MonicPolynomial& q, double a, double b);

/// Number of sign changes of the derivative sequence of q at l.
int budan_fourier_variations(const MonicPolynomial& q, double l);

/// Exact number of distinct real roots of q in (a, b] from a Sturm chain.
/// Throws DegenerateSequence when q is not square-free.
int sturm_count(const MonicPolynomial& q, double a, double b);

/// Square-free decomposition q = prod_k f_k^k (Yun). Element k-1 holds the
/// monic factor f_k; trailing constant factors are omitted.
std::vector<MonicPolynomial> squarefree_decomposition(const MonicPolynomial& q);

/// Roots of q in (a, b] counted with multiplicity, via square-free
/// decomposition and a Sturm count per factor.
int root_count_with_multiplicity(const MonicPolynomial& q, double a, double b);

/// Cauchy bound: every root satisfies |z| < 1 + max_k |sigma_k|.
double cauchy_bound(const MonicPolynomial& q) noexcept;

}  // namespace prony
