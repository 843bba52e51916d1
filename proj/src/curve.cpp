#include "prony/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/LU>

#include "prony/error.hpp"

namespace prony {

namespace {

bool is_hyperbolic(const CurveParam& param, double t, double tol) {
  return root_map(q_at(param, t), tol).kind == RootKind::Hyperbolic;
}

// Boundary of the hyperbolic set between a (classified ha) and b.
double bisect_boundary(const CurveParam& param, double a, double b, bool ha, double tol) {
  while (std::abs(b - a) > 1e-10 * (1.0 + std::abs(0.5 * (a + b)))) {
    const double mid = 0.5 * (a + b);
    if (mid == a || mid == b) break;
    if (is_hyperbolic(param, mid, tol) == ha)
      a = mid;
    else
      b = mid;
  }
  return 0.5 * (a + b);
}

bool leq_slack(double a, double b) { return a <= b + 1e-9 * std::max(std::abs(a), std::abs(b)); }

// Distinct-or-multiple root count of q on the closed interval [lo, hi]
// (hi may be +inf).
int count_closed(const MonicPolynomial& q, double lo, double hi) {
  const double a = lo - 1e-12 * (1.0 + std::abs(lo));
  const double b = std::isinf(hi) ? std::max(cauchy_bound(q), a + 1.0) : hi;
  if (!(a < b)) return 0;
  try {
    return sturm_count(q, a, b);
  } catch (const Error& e) {
    if (e.code() != Errc::DegenerateSequence) throw;
    return root_count_with_multiplicity(q, a, b);
  }
}

}  // namespace

CurveParam parametrize(const MomentVector& mu, double rank_tol) {
  const int d = mu.d;
  if (d < 1) throw Error(Errc::InvalidArgument, "model order must be positive");
  if (mu.size() < static_cast<std::size_t>(2 * d - 1))
    throw Error(Errc::InsufficientMoments, "the curve needs mu_0..mu_{2d-2}");

  CurveParam out;
  out.moments = mu.head(static_cast<std::size_t>(2 * d - 1));
  const HankelSummary h = hankel(out.moments, rank_tol);
  out.delta = h.delta;
  out.eta = h.eta;
  if (h.rank < d) throw Error(Errc::SingularHankel, "moment Hankel matrix is singular");

  // Row l = d..2d-1 holds (mu_{l-1}, ..., mu_{l-d}).
  Eigen::MatrixXd a(d, d);
  for (int r = 0; r < d; ++r)
    for (int i = 1; i <= d; ++i) a(r, i - 1) = out.moments.values[static_cast<std::size_t>(d + r - i)];
  Eigen::VectorXd rhs_beta = Eigen::VectorXd::Zero(d);
  for (int r = 0; r + 1 < d; ++r) rhs_beta(r) = -out.moments.values[static_cast<std::size_t>(d + r)];
  Eigen::VectorXd rhs_alpha = Eigen::VectorXd::Zero(d);
  rhs_alpha(d - 1) = -1.0;

  const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  const Eigen::VectorXd beta = lu.solve(rhs_beta);
  const Eigen::VectorXd alpha = lu.solve(rhs_alpha);
  out.alpha.assign(alpha.data(), alpha.data() + d);
  out.beta.assign(beta.data(), beta.data() + d);
  return out;
}

CurveParam make_pencil(std::vector<double> alpha, std::vector<double> beta) {
  if (alpha.size() != beta.size() || alpha.empty())
    throw Error(Errc::DimensionMismatch, "alpha and beta must have the same positive length");
  CurveParam out;
  out.alpha = std::move(alpha);
  out.beta = std::move(beta);
  out.moments.d = out.d();
  return out;
}

MonicPolynomial q_at(const CurveParam& param, double t) {
  MonicPolynomial q;
  q.sigma.resize(param.alpha.size());
  for (std::size_t k = 0; k < q.sigma.size(); ++k) q.sigma[k] = param.alpha[k] * t + param.beta[k];
  return q;
}

CurveParam reverse_direction(const CurveParam& param) {
  CurveParam out = param;
  for (double& a : out.alpha) a = -a;
  return out;
}

CurveParam reflect_roots(const CurveParam& param) {
  CurveParam out = param;
  for (std::size_t k = 0; k < out.alpha.size(); ++k) {
    if (k % 2 == 0) {  // sigma_{k+1} with k+1 odd
      out.alpha[k] = -out.alpha[k];
      out.beta[k] = -out.beta[k];
    }
  }
  return out;
}

MomentVector full_moments(const CurveParam& param, double t) {
  MomentVector mu = param.moments;
  mu.values.push_back(t);
  return mu;
}

bool HyperbolicityDomain::contains(double t) const noexcept {
  return std::any_of(intervals.begin(), intervals.end(),
                     [t](const Interval& iv) { return iv.contains(t); });
}

HyperbolicityDomain hyperbolicity_domain(const CurveParam& param, double t_lo, double t_hi,
                                         int n_scan, double collision_tol) {
  if (!(t_lo < t_hi) || !std::isfinite(t_lo) || !std::isfinite(t_hi))
    throw Error(Errc::InvalidWindow, "window needs finite t_lo < t_hi");
  if (n_scan < 2) throw Error(Errc::InvalidWindow, "scan needs at least two points");

  HyperbolicityDomain out;
  out.scan_lo = t_lo;
  out.scan_hi = t_hi;
  const std::vector<double> ts = linspace(t_lo, t_hi, n_scan);
  std::vector<bool> hyp(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) hyp[k] = is_hyperbolic(param, ts[k], collision_tol);

  std::size_t k = 0;
  while (k < ts.size()) {
    if (!hyp[k]) {
      ++k;
      continue;
    }
    const std::size_t first = k;
    while (k + 1 < ts.size() && hyp[k + 1]) ++k;
    const std::size_t last = k;
    ++k;

    Interval iv;
    if (first == 0) {
      const double probe = t_lo - 10.0 * std::max(1.0, std::abs(t_lo));
      iv.lo = is_hyperbolic(param, probe, collision_tol) ? -std::numeric_limits<double>::infinity() : t_lo;
    } else {
      iv.lo = bisect_boundary(param, ts[first], ts[first - 1], true, collision_tol);
    }
    if (last + 1 == ts.size()) {
      const double probe = t_hi + 10.0 * std::max(1.0, std::abs(t_hi));
      iv.hi = is_hyperbolic(param, probe, collision_tol) ? std::numeric_limits<double>::infinity() : t_hi;
    } else {
      iv.hi = bisect_boundary(param, ts[last], ts[last + 1], true, collision_tol);
    }
    out.intervals.push_back(iv);
  }
  return out;
}

Signal curve_point(const CurveParam& param, double t, double collision_tol) {
  const RootStatus rs = root_map(q_at(param, t), collision_tol);
  if (rs.kind != RootKind::Hyperbolic) throw Error(Errc::NotHyperbolic, "Q_t is not hyperbolic");
  return amplitudes_closed_form(param.moments, rs.roots);
}

StratumDistance stratum_distance(std::span<const double> x, std::size_t i, int s) {
  const auto d = static_cast<int>(x.size());
  if (i >= x.size()) throw Error(Errc::IndexOutOfRange, "index outside node vector");
  if (s < 2 || s > d) throw Error(Errc::InvalidStratum, "stratum size must lie in 2..d");

  std::vector<std::size_t> others;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (j != i) others.push_back(j);

  StratumDistance best;
  best.value = std::numeric_limits<double>::infinity();
  const auto m = static_cast<std::size_t>(s - 1);
  std::vector<std::size_t> pick(m);
  for (std::size_t k = 0; k < m; ++k) pick[k] = k;
  while (true) {
    std::vector<std::size_t> subset{i};
    for (std::size_t k : pick) subset.push_back(others[k]);
    std::sort(subset.begin(), subset.end());
    double mean = 0.0;
    for (std::size_t r : subset) mean += x[r];
    mean /= static_cast<double>(subset.size());
    double ss = 0.0;
    for (std::size_t r : subset) ss += (x[r] - mean) * (x[r] - mean);
    const double dist = std::sqrt(ss);
    if (dist < best.value) {
      best.value = dist;
      best.witness_subset = subset;
      best.witness_point.assign(x.begin(), x.end());
      for (std::size_t r : subset) best.witness_point[r] = mean;
    }
    // next combination of m out of others.size()
    std::size_t p = m;
    const std::size_t n = others.size();
    while (p > 0 && pick[p - 1] == n - m + (p - 1)) --p;
    if (p == 0) break;
    ++pick[p - 1];
    for (std::size_t j = p; j < m; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

std::vector<std::size_t> cluster_witness(std::span<const double> x, std::size_t i, int s) {
  const StratumDistance sd = stratum_distance(x, i, s);
  std::vector<std::size_t> out;
  for (std::size_t r : sd.witness_subset)
    if (r != i) out.push_back(r);
  return out;
}

AmplitudeBoundChain amplitude_bound_chain(const CurveParam& param, double t, double D,
                                          std::size_t i, int s) {
  const int d = param.d();
  if (!(D > 1.0)) throw Error(Errc::InvalidArgument, "box radius D must exceed 1");
  if (i >= static_cast<std::size_t>(d)) throw Error(Errc::IndexOutOfRange, "node index outside 0..d-1");
  if (s < 2 || s > d) throw Error(Errc::InvalidStratum, "stratum size must lie in 2..d");

  const Signal sig = curve_point(param, t);
  for (double xj : sig.nodes)
    if (std::abs(xj) > D) throw Error(Errc::NodeOutOfBox, "a node lies outside [-D, D]");

  AmplitudeBoundChain out;
  out.nodes = sig.nodes;
  out.dist = stratum_distance(sig.nodes, i, s).value;
  out.lagrange = std::abs(lagrange_denominator(sig.nodes, i));
  std::vector<double> rest;
  for (std::size_t j = 0; j < sig.nodes.size(); ++j)
    if (j != i) rest.push_back(sig.nodes[j]);
  out.p_value = std::abs(p_poly(param.moments, rest));

  const double dd = d;
  const double sqrt_d = std::sqrt(dd);
  double nu = 0.0;
  for (int k = 0; k < d; ++k) nu = std::max(nu, std::abs(param.moments.values[static_cast<std::size_t>(k)]));
  const double c2 = 1.0 / (std::pow(D, d - 1) * sqrt_d);
  const double c3 = nu * std::pow(1.0 + D, d - 1);
  const double c1_corrected = 1.0 / (std::pow(2.0, d - 1) * std::pow(D, 2 * d - s - 1) * sqrt_d);
  const double c1_literal = 1.0 / (std::pow(2.0, d) * std::pow(D, 2 * d - s - 1) * sqrt_d);

  out.lower_strat = c1_corrected * param.eta / std::pow(out.dist, s - 1);
  out.literal_lower = c1_literal * param.eta / std::pow(out.dist, s);
  out.lower_lagrange = c2 * param.eta / out.lagrange;
  out.actual = std::abs(sig.amplitudes[i]);
  out.upper = c3 / out.lagrange;

  const bool tail = leq_slack(out.lower_lagrange, out.actual) && leq_slack(out.actual, out.upper);
  out.holds = leq_slack(out.lower_strat, out.lower_lagrange) && tail;
  out.literal_holds = leq_slack(out.literal_lower, out.lower_lagrange) && tail;
  return out;
}

double falling_factorial(int n, int m) {
  double p = 1.0;
  for (int j = n - m + 1; j <= n; ++j) p *= j;
  return p;
}

EscapeConstants escape_constants(const CurveParam& param) {
  const int d = param.d();
  if (d < 1) throw Error(Errc::InvalidArgument, "empty pencil");
  const double a1 = param.alpha[0];
  double amax = 0.0;
  for (double a : param.alpha) amax = std::max(amax, std::abs(a));
  if (a1 == 0.0 || std::abs(a1) <= 1e-14 * amax) throw Error(Errc::DegeneratePencil, "alpha_1 = 0");

  EscapeConstants c;
  for (int k = 0; k < d; ++k)
    c.t0 = std::max(c.t0, 20.0 * std::abs(param.beta[static_cast<std::size_t>(k)] / a1));

  // B(k, r) = A(d-k, r) / A(d-1, r), for 2 <= k <= d and r <= d-k.
  double m = 0.0;
  for (int k = 2; k <= d; ++k) {
    const double ratio = std::abs(param.alpha[static_cast<std::size_t>(k - 1)] / a1) + 1.0 / 20.0;
    for (int r = 0; r <= d - k; ++r)
      m = std::max(m, falling_factorial(d - k, r) / falling_factorial(d - 1, r) * ratio);
  }
  c.lambda0 = std::max(20.0 * d * m, 1.0);

  // C(r) = (d - r) / d over r = 0..d-1.
  c.c1 = 1.0 / d;
  c.c2 = 1.0;
  c.t1_unscaled = 2.0 * c.lambda0 / c.c1;
  c.t1 = c.t1_unscaled / std::min(1.0, std::abs(a1));
  c.A1 = 0.5 * c.c1 * std::abs(a1);
  c.A2 = 2.0 * c.c2 * std::abs(a1);
  return c;
}

double normalized_derivative(const MonicPolynomial& q, double l, int r) {
  const int d = static_cast<int>(q.degree());
  if (r < 0 || r > d) throw Error(Errc::IndexOutOfRange, "derivative order outside 0..d");
  const std::vector<double> der = q.derivatives_at(l);
  return der[static_cast<std::size_t>(r)] / (falling_factorial(d, r) * std::pow(l, d - r));
}

double normalized_derivative_formula(const CurveParam& param, double t, double l, int r) {
  const int d = param.d();
  if (r < 0 || r > d) throw Error(Errc::IndexOutOfRange, "derivative order outside 0..d");
  if (r == d) return 1.0;
  const double a1 = param.alpha[0];
  const double c = static_cast<double>(d - r) / d;
  double inner = 1.0 + param.beta[0] / (a1 * t);
  for (int k = 2; k <= d - r; ++k) {
    const double b = falling_factorial(d - k, r) / falling_factorial(d - 1, r);
    const auto kk = static_cast<std::size_t>(k - 1);
    inner += b / std::pow(l, k - 1) * (param.alpha[kk] / a1 + param.beta[kk] / (a1 * t));
  }
  return 1.0 + c * t * a1 / l * inner;
}

EscapeReport escape_check(const CurveParam& param, double t) {
  EscapeReport rep;
  rep.constants = escape_constants(param);
  const EscapeConstants& c = rep.constants;
  if (t < std::max(c.t0, c.t1))
    throw Error(Errc::PreconditionT, "t must be at least max(t0, t1) = " + std::to_string(std::max(c.t0, c.t1)));

  const int d = param.d();
  const double a1 = param.alpha[0];
  rep.t = t;
  rep.alpha_positive = a1 > 0.0;
  const MonicPolynomial q = q_at(param, t);
  const double inf = std::numeric_limits<double>::infinity();
  const double l1 = c.A1 * t, l2 = c.A2 * t;

  auto add = [&](std::string name, double lo, double hi, int expected) {
    EscapeClaim cl{std::move(name), lo, hi, expected, count_closed(q, lo, hi), false};
    cl.pass = cl.count == cl.expected;
    rep.claims.push_back(std::move(cl));
  };
  if (rep.alpha_positive) {
    add("no_roots_beyond_lambda0", c.lambda0, inf, 0);
  } else {
    add("no_roots_lambda0_to_A1t", c.lambda0, l1, 0);
    add("one_root_A1t_to_A2t", l1, l2, 1);
    add("no_roots_beyond_A2t", l2, inf, 0);
  }

  rep.kappa_ok = true;
  for (double lam : {c.lambda0, l1, l2}) {
    for (int r = 0; r < d; ++r) {
      KappaSample ks;
      ks.lambda = lam;
      ks.r = r;
      ks.normalized = normalized_derivative(q, lam, r);
      const double cr = static_cast<double>(d - r) / d;
      ks.kappa = (ks.normalized - 1.0) * lam / (cr * t * a1) - 1.0;
      rep.max_kappa = std::max(rep.max_kappa, std::abs(ks.kappa));
      rep.kappa.push_back(ks);
    }
  }
  rep.kappa_ok = rep.max_kappa <= 0.1;
  rep.pass = rep.kappa_ok &&
             std::all_of(rep.claims.begin(), rep.claims.end(), [](const EscapeClaim& cl) { return cl.pass; });
  return rep;
}

std::vector<double> chebyshev_points(double lo, double hi, int n) {
  if (n < 1) throw Error(Errc::InvalidArgument, "need at least one point");
  std::vector<double> out(static_cast<std::size_t>(n));
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (int k = 0; k < n; ++k)
    out[static_cast<std::size_t>(k)] = mid - half * std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * n));
  return out;
}

std::vector<TraceRow> trace(const CurveParam& param, const HyperbolicityDomain& domain, int n,
                            double collision_tol) {
  if (n < 1) throw Error(Errc::InvalidArgument, "need at least one sample per interval");
  std::vector<TraceRow> rows;
  const int d = param.d();
  for (std::size_t iv = 0; iv < domain.intervals.size(); ++iv) {
    const double lo = std::max(domain.intervals[iv].lo, domain.scan_lo);
    const double hi = std::min(domain.intervals[iv].hi, domain.scan_hi);
    if (!(lo < hi)) continue;
    for (double t : chebyshev_points(lo, hi, n)) {
      TraceRow row;
      row.t = t;
      row.interval = static_cast<int>(iv);
      const Signal sig = curve_point(param, t, collision_tol);
      row.nodes = sig.nodes;
      row.amplitudes = sig.amplitudes;
      row.min_gap = min_gap(sig.nodes);
      if (d >= 2)
        for (std::size_t i = 0; i < sig.size(); ++i)
          row.dist_strata.push_back(stratum_distance(sig.nodes, i, 2).value);
      for (double r : residuals(full_moments(param, t), sig, 2 * d - 1))
        row.residual = std::max(row.residual, std::abs(r));
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace prony
