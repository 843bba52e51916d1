#pragma once

// Prony varieties S_q(mu): the solution sets of the first q+1 moment
// equations, their amplitude maps, and the affine coefficient subspace
// L_q(mu) that carries them for q >= d.

#include <cstddef>
#include <span>
#include <vector>

#include "prony/algebra.hpp"

namespace prony {

/// anchor + span(basis) inside the space of monic coefficient vectors.
struct AffineSubspace {
  std::vector<double> anchor;
  std::vector<std::vector<double>> basis;  ///< orthonormal
  int defect = 0;  ///< dimension - (2d - q - 1), clamped at 0
  bool empty = false;
  double residual = 0.0;  ///< least-squares residual of the anchor

  std::size_t dimension() const noexcept { return basis.size(); }

  /// anchor + sum_i coords[i] * basis[i]
  std::vector<double> point(std::span<const double> coords) const;

  /// Orthogonal projection of a coefficient vector onto the subspace.
  std::vector<double> project(std::span<const double> sigma) const;
};

inline constexpr double kMembershipTol = 1e-8;
inline constexpr double kRankTol = 1e-10;

/// sum_j a_j x_j^k - mu_k for k = 0..q.
std::vector<double> residuals(const MomentVector& mu, const Signal& signal, int q);

/// max |residual| <= tol (1 + max_{k<=q} |mu_k|).
bool is_member(const MomentVector& mu, const Signal& signal, int q, double tol = kMembershipTol);

/// Solves the leading (q+1) x (q+1) Vandermonde block for a_1..a_{q+1};
/// free_amps supplies a_{q+2}..a_d. Requires q <= d-1.
Signal amplitudes_cramer(const MomentVector& mu, std::span<const double> x,
                         std::span<const double> free_amps, int q);

/// a_i = P(pi_i(x)) / L_i(x): the amplitude map on every S_q(mu) with q >= d-1.
Signal amplitudes_closed_form(const MomentVector& mu, std::span<const double> x);

/// L_q(mu) from the rows sum_{i=0}^d mu_{l-i} sigma_i = 0, l = d..q, via SVD
/// at relative rank tolerance rank_tol. Requires d <= q <= 2d-1.
AffineSubspace linear_subspace(const MomentVector& mu, int q, double rank_tol = kRankTol);

/// Largest row residual of the coefficient recurrence, relative to the
/// magnitude of the terms in that row.
double recurrence_residual(const MomentVector& mu, std::span<const double> sigma, int q);

/// True iff the Vieta coefficients of x satisfy the rows of L_q(mu) with
/// relative residual <= tol. Requires q >= d.
bool nodes_member(const MomentVector& mu, std::span<const double> x, int q,
                  double tol = kMembershipTol);

struct SamplingGrid {
  double node_lo = -1.0;
  double node_hi = 1.0;
  int node_count = 5;
  double amp_lo = -1.0;   ///< free amplitudes (q <= d-1)
  double amp_hi = 1.0;
  int amp_count = 3;
  double coeff_lo = -1.0;  ///< subspace coordinates (q >= d)
  double coeff_hi = 1.0;
  int coeff_count = 5;
};

/// Points of S_q(mu) on a grid, in deterministic grid order.
///  q <= d-1: every increasing node tuple from the node grid, combined with
///            every free-amplitude tuple, lifted by amplitudes_cramer.
///  q >= d:   a grid over the coordinates of L_q(mu); hyperbolic points are
///            lifted through root_map and amplitudes_closed_form, the rest
///            are dropped.
/// Throws EmptyVariety when L_q(mu) is empty.
std::vector<Signal> sample_variety(const MomentVector& mu, int q, const SamplingGrid& grid);

/// n equispaced points on [lo, hi] (a single point lo when n == 1).
std::vector<double> linspace(double lo, double hi, int n);

}  // namespace prony
