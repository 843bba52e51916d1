#pragma once

// Signals, moments, Hankel matrices and the symmetric-polynomial machinery
// shared by the rest of the library.
//
// Index arguments are zero-based throughout the C++ API.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace prony {

/// A spike train sum_j a_j delta(x - x_j).
struct Signal {
  std::vector<double> amplitudes;
  std::vector<double> nodes;

  std::size_t size() const noexcept { return nodes.size(); }

  /// True when both vectors have the same length and nodes are strictly
  /// increasing.
  bool valid() const noexcept;

  /// Throws DimensionMismatch or NodesNotSorted when !valid().
  void validate() const;
};

/// Right-hand side mu_0..mu_K of a Prony system with model order d.
struct MomentVector {
  std::vector<double> values;
  int d = 0;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t k) const { return values[k]; }

  /// First n values, keeping d.
  MomentVector head(std::size_t n) const;
  /// max_k |mu_k| over the first n values (all values when n exceeds size()).
  double max_abs(std::size_t n) const noexcept;
  double norm() const noexcept;
};

struct HankelSummary {
  Eigen::MatrixXd matrix;
  double delta = 0.0;  ///< determinant
  double eta = 0.0;    ///< minimal singular value
  double sigma_max = 0.0;
  int rank = 0;
};

/// mu_k = sum_j a_j x_j^k for k = 0..K, with compensated summation.
MomentVector moments(const Signal& signal, int K);

/// The d x d moment Hankel matrix built from mu_0..mu_{2d-2}, with its
/// determinant, smallest singular value and numerical rank. The rank counts
/// singular values above rel_tol * sigma_max.
HankelSummary hankel(const MomentVector& mu, double rel_tol = 1e-10);

/// Signed Vieta coefficients: prod_j (z - x_j) = z^d + s_1 z^{d-1} + ... + s_d.
std::vector<double> vieta_coeffs(std::span<const double> x);

/// Vieta coefficients of x with coordinate i removed (length d-1).
std::vector<double> partial_symmetric(std::span<const double> x, std::size_t i);

/// prod_{l != i} (x_i - x_l), signed.
double lagrange_denominator(std::span<const double> x, std::size_t i);

/// P(u) = mu_0 r_{d-1}(u) + ... + mu_{d-2} r_1(u) + mu_{d-1}, where r_k are
/// the signed Vieta coefficients of u and d = u.size() + 1.
double p_poly(const MomentVector& mu, std::span<const double> u);

/// Smallest consecutive difference of a sorted vector (+inf for size < 2).
double min_gap(std::span<const double> sorted);

/// Neumaier-compensated sum.
class CompensatedSum {
 public:
  void add(double v) noexcept;
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace prony
