#pragma once

// The Prony curve S_{2d-2}(mu), parametrized by t = mu_{2d-1}: the pencil
// Q_t(z) = z^d + sum_k (alpha_k t + beta_k) z^{d-k}, its hyperbolicity
// domain, node/amplitude trajectories, collision strata, amplitude bounds
// near collisions and the escape of nodes to infinity.

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "prony/algebra.hpp"
#include "prony/hyperbolic.hpp"
#include "prony/variety.hpp"

namespace prony {

struct CurveParam {
  std::vector<double> alpha;
  std::vector<double> beta;
  MomentVector moments;  ///< mu_0..mu_{2d-2}
  double delta = 0.0;
  double eta = 0.0;

  int d() const noexcept { return static_cast<int>(alpha.size()); }
};

/// Solves the d x d coefficient system twice, with right-hand sides
/// -(mu_d..mu_{2d-2}, 0) for beta and -(0..0, 1) for alpha.
/// Throws SingularHankel when M_d(mu) is numerically singular.
CurveParam parametrize(const MomentVector& mu, double rank_tol = kRankTol);

/// A pencil with no moment context, e.g. for the escape analysis alone.
CurveParam make_pencil(std::vector<double> alpha, std::vector<double> beta);

MonicPolynomial q_at(const CurveParam& param, double t);

/// The same line traversed with t -> -t.
CurveParam reverse_direction(const CurveParam& param);

/// The pencil of Q_t(-w) (-1)^d, i.e. roots reflected through 0.
CurveParam reflect_roots(const CurveParam& param);

/// mu_0..mu_{2d-2} followed by t.
MomentVector full_moments(const CurveParam& param, double t);

/// Open interval; unbounded ends are +-infinity.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double t) const noexcept { return lo < t && t < hi; }
};

struct HyperbolicityDomain {
  std::vector<Interval> intervals;
  double scan_lo = 0.0;
  double scan_hi = 0.0;

  bool contains(double t) const noexcept;
};

/// Scans n_scan equispaced values of t in [t_lo, t_hi], bisects each
/// classification flip down to 1e-10 (1 + |t|), and probes once beyond a
/// window edge where hyperbolicity persists to decide unboundedness.
HyperbolicityDomain hyperbolicity_domain(const CurveParam& param, double t_lo, double t_hi,
                                         int n_scan, double collision_tol = kCollisionTol);

/// The signal on the curve at t: nodes are the roots of Q_t, amplitudes
/// follow from the closed-form amplitude map. Throws NotHyperbolic.
Signal curve_point(const CurveParam& param, double t, double collision_tol = kCollisionTol);

struct StratumDistance {
  double value = 0.0;
  std::vector<std::size_t> witness_subset;  ///< sorted, contains i
  std::vector<double> witness_point;
};

/// Euclidean distance from x to the union of the subspaces
/// {x_r equal for r in J}, over all |J| = s with i in J.
StratumDistance stratum_distance(std::span<const double> x, std::size_t i, int s);

/// Indices l != i with |x_l - x_i| <= 2 dist^i_s(x); s-1 of them.
std::vector<std::size_t> cluster_witness(std::span<const double> x, std::size_t i, int s);

struct AmplitudeBoundChain {
  std::vector<double> nodes;
  double dist = 0.0;          ///< dist^i_s(x)
  double lagrange = 0.0;      ///< |L_i(x)|
  double p_value = 0.0;       ///< |P(pi_i(x))|
  double lower_strat = 0.0;   ///< C1' eta / dist^{s-1}
  double lower_lagrange = 0.0;
  double actual = 0.0;        ///< |a_i|
  double upper = 0.0;
  bool holds = false;
  double literal_lower = 0.0;  ///< C1 eta / dist^s with C1 = 1/(2^d D^{2d-s-1} sqrt d)
  bool literal_holds = false;
};

/// Evaluates the chain lower_strat <= lower_lagrange <= |a_i| <= upper at the
/// curve point for t, with 1e-9 relative slack. The stratified bound uses
/// the exponent s-1; the s-exponent variant is reported in literal_*.
AmplitudeBoundChain amplitude_bound_chain(const CurveParam& param, double t, double D,
                                          std::size_t i, int s);

struct EscapeConstants {
  double t0 = 0.0;
  double lambda0 = 0.0;
  double t1 = 0.0;
  double t1_unscaled = 0.0;  ///< 2 lambda0 / c1, without the |alpha_1| factor
  double A1 = 0.0;
  double A2 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};

/// A(n, m) = (n-m+1)(n-m+2)...n, the falling factorial; A(n, 0) = 1.
double falling_factorial(int n, int m);

/// Thresholds for the root-location claims of the pencil Q_t as t -> +inf.
/// Throws DegeneratePencil when alpha_1 = 0.
EscapeConstants escape_constants(const CurveParam& param);

/// Q^{(r)}(l) / (A(d, r) l^{d-r}), evaluated directly.
double normalized_derivative(const MonicPolynomial& q, double l, int r);

/// The same quantity from the closed expression in alpha, beta, t and l.
double normalized_derivative_formula(const CurveParam& param, double t, double l, int r);

struct EscapeClaim {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;  ///< +inf for a half-line
  int expected = 0;
  int count = 0;
  bool pass = false;
};

struct KappaSample {
  double lambda = 0.0;
  int r = 0;
  double normalized = 0.0;
  double kappa = 0.0;
};

struct EscapeReport {
  bool alpha_positive = false;
  double t = 0.0;
  EscapeConstants constants;
  std::vector<EscapeClaim> claims;
  std::vector<KappaSample> kappa;
  double max_kappa = 0.0;
  bool kappa_ok = false;
  bool pass = false;
};

/// Counts real roots of Q_t on the claim intervals with a Sturm chain and
/// measures the remainder kappa(r) of the normalized derivatives at
/// lambda0, A1 t and A2 t. Throws PreconditionT if t < max(t0, t1).
EscapeReport escape_check(const CurveParam& param, double t);

struct TraceRow {
  double t = 0.0;
  int interval = 0;
  std::vector<double> nodes;
  std::vector<double> amplitudes;
  double min_gap = 0.0;
  std::vector<double> dist_strata;  ///< dist^i_2(x) per node
  double residual = 0.0;           ///< max full-system residual at mu_{2d-1} = t
};

/// n Chebyshev points per interval of the domain (clipped to the scan
/// window), in ascending t.
std::vector<TraceRow> trace(const CurveParam& param, const HyperbolicityDomain& domain, int n,
                            double collision_tol = kCollisionTol);

/// n Chebyshev points of the first kind inside (lo, hi), ascending.
std::vector<double> chebyshev_points(double lo, double hi, int n);

}  // namespace prony
