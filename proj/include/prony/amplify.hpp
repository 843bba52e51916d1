#pragma once

// Monte Carlo measurement of how moment noise of size eps is amplified
// into parameter error when d nodes cluster at scale h.

#include <cstdint>
#include <vector>

#include "prony/algebra.hpp"

namespace prony {

struct AmplifyConfig {
  int d = 2;
  std::vector<double> h_grid{0.4, 0.2, 0.1, 0.05};
  double eps = 1e-8;
  int trials = 1000;
  std::vector<int> q_list{0, 1, 2, 3};
  std::uint64_t seed = 7;
};

struct AmplifyPoint {
  int q = 0;
  double h = 0.0;
  double worst = 0.0;
  double median = 0.0;
  int count = 0;     ///< trials with a finite distance
  int failures = 0;  ///< trials where the noisy system or the lift broke down
};

struct AmplifyFit {
  int q = 0;
  double slope = 0.0;  ///< NaN when some worst-case distance is zero
  double intercept = 0.0;
};

struct AmplifyResult {
  std::vector<AmplifyPoint> points;  ///< q-major, then h in grid order
  std::vector<AmplifyFit> fits;
};

/// d nodes equispaced on [-h/2, h/2] (0 for d = 1) with unit amplitudes.
Signal cluster_signal(int d, double h);

/// Uniform in [-1, 1), a pure function of its four keys.
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t trial,
                       std::uint64_t k) noexcept;

/// Distance from a noisy solution to S_q(mu_true) for a cluster of scale h
/// centred at 0.
///  q <= d-1: smallest amplitude change at the noisy nodes that restores the
///            first q+1 equations.
///  q >= d:   distance of the noisy coefficient vector to L_q(mu_true) in the
///            cluster-scaled coordinates sigma_k / h^k (weighted orthogonal
///            projection).
/// Returns NaN when L_q(mu_true) is empty.
double variety_distance(const MomentVector& mu_true, const Signal& noisy, int q, double h);

/// Throws InvalidArgument for d outside 1..4, h outside (0, 0.5), eps < 0,
/// trials < 100, q outside 0..2d-1 or a grid with fewer than two values.
AmplifyResult amplify(const AmplifyConfig& config);

/// Least-squares slope and intercept of y against x.
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace prony
