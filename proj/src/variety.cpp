#include "prony/variety.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "prony/error.hpp"
#include "prony/hyperbolic.hpp"

namespace prony {

namespace {

void require_moments(const MomentVector& mu, std::size_t n, const char* what) {
  if (mu.size() < n) throw Error(Errc::InsufficientMoments, what);
}

void require_sorted(std::span<const double> x) {
  for (std::size_t j = 1; j < x.size(); ++j)
    if (!(x[j - 1] < x[j])) throw Error(Errc::NodesNotSorted, "nodes must be strictly increasing");
}

// Calls f(tuple) for every tuple in grid^k, last coordinate fastest.
template <class F>
void for_each_tuple(const std::vector<double>& grid, std::size_t k, F&& f) {
  std::vector<std::size_t> idx(k, 0);
  std::vector<double> tuple(k);
  if (grid.empty() && k > 0) return;
  while (true) {
    for (std::size_t i = 0; i < k; ++i) tuple[i] = grid[idx[i]];
    f(std::as_const(tuple));
    std::size_t pos = k;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < grid.size()) break;
      idx[pos] = 0;
      if (pos == 0) return;
    }
    if (k == 0) return;
  }
}

// Calls f(tuple) for every strictly increasing k-subset of grid, in
// lexicographic order.
template <class F>
void for_each_increasing(const std::vector<double>& grid, std::size_t k, F&& f) {
  const std::size_t n = grid.size();
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  std::vector<double> tuple(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) tuple[i] = grid[idx[i]];
    f(std::as_const(tuple));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::vector<double> AffineSubspace::point(std::span<const double> coords) const {
  if (coords.size() != basis.size())
    throw Error(Errc::DimensionMismatch, "coordinate count differs from subspace dimension");
  std::vector<double> p = anchor;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t k = 0; k < p.size(); ++k) p[k] += coords[i] * basis[i][k];
  return p;
}

std::vector<double> AffineSubspace::project(std::span<const double> sigma) const {
  if (sigma.size() != anchor.size())
    throw Error(Errc::DimensionMismatch, "vector length differs from ambient dimension");
  std::vector<double> coords(basis.size(), 0.0);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t k = 0; k < sigma.size(); ++k) coords[i] += (sigma[k] - anchor[k]) * basis[i][k];
  return point(coords);
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw Error(Errc::InvalidArgument, "grid needs at least one point");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (n - 1);
  out.back() = hi;
  return out;
}

std::vector<double> residuals(const MomentVector& mu, const Signal& signal, int q) {
  const int d = static_cast<int>(signal.size());
  if (signal.amplitudes.size() != signal.nodes.size())
    throw Error(Errc::DimensionMismatch, "amplitudes and nodes differ in length");
  if (q < 0 || q > 2 * d - 1) throw Error(Errc::InvalidArgument, "q outside 0..2d-1");
  require_moments(mu, static_cast<std::size_t>(q) + 1, "residuals need q+1 moments");

  const MomentVector m = moments(signal, q);
  std::vector<double> r(static_cast<std::size_t>(q) + 1);
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = m.values[k] - mu.values[k];
  return r;
}

bool is_member(const MomentVector& mu, const Signal& signal, int q, double tol) {
  const std::vector<double> r = residuals(mu, signal, q);
  double worst = 0.0;
  for (double v : r) worst = std::max(worst, std::abs(v));
  return worst <= tol * (1.0 + mu.max_abs(static_cast<std::size_t>(q) + 1));
}

Signal amplitudes_cramer(const MomentVector& mu, std::span<const double> x,
                         std::span<const double> free_amps, int q) {
  const auto d = static_cast<int>(x.size());
  if (q < 0 || q > d - 1) throw Error(Errc::InvalidArgument, "amplitudes_cramer needs 0 <= q <= d-1");
  require_sorted(x);
  if (static_cast<int>(free_amps.size()) != d - q - 1)
    throw Error(Errc::DimensionMismatch, "free amplitudes must number d-q-1");
  require_moments(mu, static_cast<std::size_t>(q) + 1, "amplitudes_cramer needs q+1 moments");

  const int n = q + 1;
  Eigen::MatrixXd v(n, n);
  Eigen::VectorXd rhs(n);
  for (int k = 0; k < n; ++k) {
    double corr = 0.0;
    for (int j = n; j < d; ++j)
      corr += free_amps[static_cast<std::size_t>(j - n)] * std::pow(x[static_cast<std::size_t>(j)], k);
    rhs(k) = mu.values[static_cast<std::size_t>(k)] - corr;
    for (int j = 0; j < n; ++j) v(k, j) = std::pow(x[static_cast<std::size_t>(j)], k);
  }
  const Eigen::VectorXd a = v.colPivHouseholderQr().solve(rhs);

  Signal out;
  out.nodes.assign(x.begin(), x.end());
  out.amplitudes.resize(static_cast<std::size_t>(d));
  for (int j = 0; j < n; ++j) out.amplitudes[static_cast<std::size_t>(j)] = a(j);
  for (int j = n; j < d; ++j)
    out.amplitudes[static_cast<std::size_t>(j)] = free_amps[static_cast<std::size_t>(j - n)];
  return out;
}

Signal amplitudes_closed_form(const MomentVector& mu, std::span<const double> x) {
  const std::size_t d = x.size();
  if (d == 0) throw Error(Errc::InvalidArgument, "empty node vector");
  require_moments(mu, d, "closed-form amplitudes need d moments");
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  if (d > 1 && !(min_gap(sorted) > 0.0)) throw Error(Errc::CollidingNodes, "nodes must be distinct");

  Signal out;
  out.nodes.assign(x.begin(), x.end());
  out.amplitudes.resize(d);
  std::vector<double> rest(d - 1);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0, r = 0; j < d; ++j)
      if (j != i) rest[r++] = x[j];
    out.amplitudes[i] = p_poly(mu, rest) / lagrange_denominator(x, i);
  }
  return out;
}

AffineSubspace linear_subspace(const MomentVector& mu, int q, double rank_tol) {
  const int d = mu.d;
  if (d < 1) throw Error(Errc::InvalidArgument, "model order must be positive");
  if (q < d || q > 2 * d - 1) throw Error(Errc::InvalidArgument, "linear_subspace needs d <= q <= 2d-1");
  require_moments(mu, static_cast<std::size_t>(q) + 1, "linear_subspace needs q+1 moments");

  const int rows = q - d + 1;
  Eigen::MatrixXd a(rows, d);
  Eigen::VectorXd b(rows);
  for (int r = 0; r < rows; ++r) {
    const int l = d + r;
    for (int i = 1; i <= d; ++i) a(r, i - 1) = mu.values[static_cast<std::size_t>(l - i)];
    b(r) = -mu.values[static_cast<std::size_t>(l)];
  }

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = rank_tol * (sv.size() > 0 ? sv(0) : 0.0);
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > cut && sv(k) > 0.0) ++rank;

  Eigen::VectorXd anchor = Eigen::VectorXd::Zero(d);
  for (int k = 0; k < rank; ++k)
    anchor += (svd.matrixU().col(k).dot(b) / sv(k)) * svd.matrixV().col(k);

  AffineSubspace out;
  out.anchor.assign(anchor.data(), anchor.data() + d);
  for (int k = rank; k < d; ++k) {
    const Eigen::VectorXd col = svd.matrixV().col(k);
    out.basis.emplace_back(col.data(), col.data() + d);
  }
  out.residual = (a * anchor - b).norm();
  out.empty = out.residual > rank_tol * (1.0 + mu.head(static_cast<std::size_t>(q) + 1).norm());
  out.defect = out.empty ? 0 : std::max(0, static_cast<int>(out.dimension()) - (2 * d - q - 1));
  return out;
}

double recurrence_residual(const MomentVector& mu, std::span<const double> sigma, int q) {
  const int d = static_cast<int>(sigma.size());
  require_moments(mu, static_cast<std::size_t>(q) + 1, "recurrence needs q+1 moments");
  double worst = 0.0;
  for (int l = d; l <= q; ++l) {
    CompensatedSum acc;
    double scale = std::abs(mu.values[static_cast<std::size_t>(l)]);
    acc.add(mu.values[static_cast<std::size_t>(l)]);
    for (int i = 1; i <= d; ++i) {
      const double term = mu.values[static_cast<std::size_t>(l - i)] * sigma[static_cast<std::size_t>(i - 1)];
      acc.add(term);
      scale += std::abs(term);
    }
    if (scale > 0.0) worst = std::max(worst, std::abs(acc.value()) / scale);
  }
  return worst;
}

bool nodes_member(const MomentVector& mu, std::span<const double> x, int q, double tol) {
  const int d = static_cast<int>(x.size());
  if (q < d || q > 2 * d - 1) throw Error(Errc::InvalidArgument, "nodes_member needs d <= q <= 2d-1");
  const std::vector<double> sigma = vieta_coeffs(x);
  return recurrence_residual(mu, sigma, q) <= tol;
}

std::vector<Signal> sample_variety(const MomentVector& mu, int q, const SamplingGrid& grid) {
  const int d = mu.d;
  if (d < 1 || q < 0 || q > 2 * d - 1) throw Error(Errc::InvalidArgument, "q outside 0..2d-1");
  require_moments(mu, static_cast<std::size_t>(q) + 1, "sampling needs q+1 moments");

  constexpr double kOutputTol = 1e-7;
  std::vector<Signal> out;

  if (q <= d - 1) {
    const std::vector<double> nodes = linspace(grid.node_lo, grid.node_hi, grid.node_count);
    const std::vector<double> amps = linspace(grid.amp_lo, grid.amp_hi, grid.amp_count);
    const auto n_free = static_cast<std::size_t>(d - q - 1);
    for_each_increasing(nodes, static_cast<std::size_t>(d), [&](const std::vector<double>& x) {
      for_each_tuple(amps, n_free, [&](const std::vector<double>& free) {
        Signal s = amplitudes_cramer(mu, x, free, q);
        if (is_member(mu, s, q, kOutputTol)) out.push_back(std::move(s));
      });
    });
    return out;
  }

  const AffineSubspace sub = linear_subspace(mu, q);
  if (sub.empty) throw Error(Errc::EmptyVariety, "L_q(mu) is empty");
  const std::vector<double> coords = linspace(grid.coeff_lo, grid.coeff_hi, grid.coeff_count);
  for_each_tuple(coords, sub.dimension(), [&](const std::vector<double>& c) {
    const RootStatus rs = root_map(MonicPolynomial{sub.point(c)});
    if (rs.kind != RootKind::Hyperbolic) return;
    Signal s = amplitudes_closed_form(mu, rs.roots);
    if (is_member(mu, s, q, kOutputTol)) out.push_back(std::move(s));
  });
  return out;
}

}  // namespace prony
