#include "prony/amplify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "prony/error.hpp"
#include "prony/solver.hpp"
#include "prony/variety.hpp"

namespace prony {

namespace {

std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double median_of(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t m = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + m, v.end());
  const double hi = v[m];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + m);
  return 0.5 * (lo + hi);
}

void validate(const AmplifyConfig& c) {
  if (c.d < 1 || c.d > 4) throw Error(Errc::InvalidArgument, "amplify supports 1 <= d <= 4");
  if (c.h_grid.size() < 2) throw Error(Errc::InvalidArgument, "h grid needs at least two values");
  for (double h : c.h_grid)
    if (!(h > 0.0 && h < 0.5)) throw Error(Errc::InvalidArgument, "h must lie in (0, 0.5)");
  if (!(c.eps >= 0.0) || !std::isfinite(c.eps)) throw Error(Errc::InvalidArgument, "eps must be >= 0");
  if (c.trials < 100) throw Error(Errc::InvalidArgument, "at least 100 trials required");
  if (c.q_list.empty()) throw Error(Errc::InvalidArgument, "empty q list");
  for (int q : c.q_list)
    if (q < 0 || q > 2 * c.d - 1) throw Error(Errc::InvalidArgument, "q must lie in 0..2d-1");
}

}  // namespace

Signal cluster_signal(int d, double h) {
  Signal s;
  s.amplitudes.assign(d, 1.0);
  s.nodes.resize(d);
  for (int j = 0; j < d; ++j) s.nodes[j] = d == 1 ? 0.0 : -0.5 * h + j * h / (d - 1);
  return s;
}

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t trial,
                       std::uint64_t k) noexcept {
  std::uint64_t x = splitmix64(seed);
  x = splitmix64(x ^ stream);
  x = splitmix64(x ^ trial);
  x = splitmix64(x ^ k);
  return 2.0 * (static_cast<double>(x >> 11) * 0x1.0p-53) - 1.0;
}

double variety_distance(const MomentVector& mu_true, const Signal& noisy, int q, double h) {
  const int d = static_cast<int>(noisy.size());
  if (q <= d - 1) {
    const std::vector<double> res = residuals(mu_true, noisy, q);
    Eigen::MatrixXd V(q + 1, d);
    Eigen::VectorXd r(q + 1);
    for (int j = 0; j < d; ++j) {
      double p = 1.0;
      for (int k = 0; k <= q; ++k, p *= noisy.nodes[j]) V(k, j) = p;
    }
    for (int k = 0; k <= q; ++k) r(k) = -res[k];
    return V.completeOrthogonalDecomposition().solve(r).norm();
  }

  const AffineSubspace sub = linear_subspace(mu_true, q);
  if (sub.empty) return std::numeric_limits<double>::quiet_NaN();
  const std::vector<double> sigma = vieta_coeffs(noisy.nodes);
  Eigen::VectorXd rhs(d);
  Eigen::MatrixXd B(d, static_cast<Eigen::Index>(sub.dimension()));
  double w = 1.0;
  for (int k = 0; k < d; ++k) {
    w /= h;
    rhs(k) = w * (sigma[k] - sub.anchor[k]);
    for (std::size_t c = 0; c < sub.dimension(); ++c) B(k, c) = w * sub.basis[c][k];
  }
  if (B.cols() == 0) return rhs.norm();
  const Eigen::VectorXd coords = B.completeOrthogonalDecomposition().solve(rhs);
  return (B * coords - rhs).norm();
}

std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

AmplifyResult amplify(const AmplifyConfig& config) {
  validate(config);
  const int d = config.d;
  const std::size_t nq = config.q_list.size(), nh = config.h_grid.size();
  // dist[q][h] holds the finite distances of every trial
  std::vector<std::vector<std::vector<double>>> dist(nq, std::vector<std::vector<double>>(nh));
  std::vector<std::vector<int>> failures(nq, std::vector<int>(nh, 0));

  for (std::size_t hi = 0; hi < nh; ++hi) {
    const MomentVector mu_true = moments(cluster_signal(d, config.h_grid[hi]), 2 * d - 1);
    for (int trial = 0; trial < config.trials; ++trial) {
      MomentVector noisy = mu_true;
      for (int k = 0; k < 2 * d; ++k)
        noisy.values[k] += config.eps * counter_uniform(config.seed, hi, trial, k);
      const SolveOutcome out = solve(noisy);
      for (std::size_t qi = 0; qi < nq; ++qi) {
        double v = std::numeric_limits<double>::quiet_NaN();
        if (out.kind == SolveKind::Unique) v = variety_distance(mu_true, *out.signal, config.q_list[qi], config.h_grid[hi]);
        if (std::isfinite(v))
          dist[qi][hi].push_back(v);
        else
          ++failures[qi][hi];
      }
    }
  }

  AmplifyResult result;
  for (std::size_t qi = 0; qi < nq; ++qi) {
    std::vector<double> lx, ly;
    bool fit_ok = true;
    for (std::size_t hi = 0; hi < nh; ++hi) {
      const auto& v = dist[qi][hi];
      AmplifyPoint p;
      p.q = config.q_list[qi];
      p.h = config.h_grid[hi];
      p.count = static_cast<int>(v.size());
      p.failures = failures[qi][hi];
      p.worst = v.empty() ? std::numeric_limits<double>::quiet_NaN() : *std::max_element(v.begin(), v.end());
      p.median = median_of(v);
      fit_ok = fit_ok && p.worst > 0.0;
      lx.push_back(std::log(p.h));
      ly.push_back(std::log(p.worst));
      result.points.push_back(p);
    }
    AmplifyFit f;
    f.q = config.q_list[qi];
    if (fit_ok) {
      std::tie(f.slope, f.intercept) = linear_fit(lx, ly);
    } else {
      f.slope = f.intercept = std::numeric_limits<double>::quiet_NaN();
    }
    result.fits.push_back(f);
  }
  return result;
}

}  // namespace prony
