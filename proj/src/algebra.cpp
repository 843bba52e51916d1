#include "prony/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "prony/error.hpp"

namespace prony {

bool Signal::valid() const noexcept {
  if (amplitudes.size() != nodes.size()) return false;
  for (std::size_t j = 1; j < nodes.size(); ++j)
    if (!(nodes[j - 1] < nodes[j])) return false;
  return true;
}

void Signal::validate() const {
  if (amplitudes.size() != nodes.size())
    throw Error(Errc::DimensionMismatch, "amplitudes and nodes differ in length");
  if (!valid()) throw Error(Errc::NodesNotSorted, "nodes must be strictly increasing");
}

MomentVector MomentVector::head(std::size_t n) const {
  MomentVector out;
  out.d = d;
  out.values.assign(values.begin(), values.begin() + std::min(n, values.size()));
  return out;
}

double MomentVector::max_abs(std::size_t n) const noexcept {
  double m = 0.0;
  for (std::size_t k = 0; k < std::min(n, values.size()); ++k) m = std::max(m, std::abs(values[k]));
  return m;
}

double MomentVector::norm() const noexcept {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

void CompensatedSum::add(double v) noexcept {
  const double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v))
    comp_ += (sum_ - t) + v;
  else
    comp_ += (v - t) + sum_;
  sum_ = t;
}

MomentVector moments(const Signal& signal, int K) {
  if (K < 0) throw Error(Errc::InvalidArgument, "K must be non-negative");
  if (signal.amplitudes.size() != signal.nodes.size())
    throw Error(Errc::DimensionMismatch, "amplitudes and nodes differ in length");

  const std::size_t d = signal.size();
  MomentVector mu;
  mu.d = static_cast<int>(d);
  mu.values.resize(static_cast<std::size_t>(K) + 1);

  std::vector<double> powers(signal.amplitudes);  // a_j x_j^k
  for (int k = 0; k <= K; ++k) {
    CompensatedSum acc;
    for (std::size_t j = 0; j < d; ++j) {
      acc.add(powers[j]);
      powers[j] *= signal.nodes[j];
    }
    mu.values[static_cast<std::size_t>(k)] = acc.value();
  }
  return mu;
}

HankelSummary hankel(const MomentVector& mu, double rel_tol) {
  const int d = mu.d;
  if (d < 1) throw Error(Errc::InvalidArgument, "model order must be positive");
  if (mu.size() < static_cast<std::size_t>(2 * d - 1))
    throw Error(Errc::InsufficientMoments, "Hankel matrix needs 2d-1 moments");

  HankelSummary out;
  out.matrix.resize(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out.matrix(i, j) = mu.values[static_cast<std::size_t>(i + j)];

  out.delta = out.matrix.determinant();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.matrix);
  const auto& sv = svd.singularValues();
  out.sigma_max = sv(0);
  out.eta = sv(d - 1);
  const double cut = rel_tol * out.sigma_max;
  out.rank = 0;
  for (int k = 0; k < d; ++k)
    if (sv(k) > cut) ++out.rank;
  return out;
}

std::vector<double> vieta_coeffs(std::span<const double> x) {
  // c holds the monic product built so far, c[0] = 1 implicit.
  std::vector<double> c(x.size() + 1, 0.0);
  c[0] = 1.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    for (std::size_t k = n + 1; k >= 1; --k) c[k] -= x[n] * c[k - 1];
  }
  return {c.begin() + 1, c.end()};
}

std::vector<double> partial_symmetric(std::span<const double> x, std::size_t i) {
  if (i >= x.size()) throw Error(Errc::IndexOutOfRange, "index outside node vector");
  std::vector<double> rest;
  rest.reserve(x.size() - 1);
  for (std::size_t j = 0; j < x.size(); ++j)
    if (j != i) rest.push_back(x[j]);
  return vieta_coeffs(rest);
}

double lagrange_denominator(std::span<const double> x, std::size_t i) {
  if (i >= x.size()) throw Error(Errc::IndexOutOfRange, "index outside node vector");
  double p = 1.0;
  for (std::size_t l = 0; l < x.size(); ++l)
    if (l != i) p *= x[i] - x[l];
  return p;
}

double p_poly(const MomentVector& mu, std::span<const double> u) {
  const std::size_t d = u.size() + 1;
  if (mu.size() < d) throw Error(Errc::InsufficientMoments, "P(u) needs d moments");
  const std::vector<double> rho = vieta_coeffs(u);  // rho_1..rho_{d-1}
  // mu_{d-1-k} multiplies rho_k, rho_0 = 1.
  CompensatedSum acc;
  acc.add(mu.values[d - 1]);
  for (std::size_t k = 1; k < d; ++k) acc.add(mu.values[d - 1 - k] * rho[k - 1]);
  return acc.value();
}

double min_gap(std::span<const double> sorted) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < sorted.size(); ++j) g = std::min(g, sorted[j] - sorted[j - 1]);
  return g;
}

}  // namespace prony
