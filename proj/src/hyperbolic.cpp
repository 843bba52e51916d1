#include "prony/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Eigenvalues>

#include "prony/algebra.hpp"
#include "prony/error.hpp"

namespace prony {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Pairs of conjugate eigenvalues closer to the real axis than this (relative)
// are re-examined with a local quadratic model before being called complex.
constexpr double kNearRealPair = 1e-6;

// Coefficient vectors below are dense, highest degree first.
using Poly = std::vector<double>;

void strip_leading_zeros(Poly& p) {
  auto it = std::find_if(p.begin(), p.end(), [](double c) { return c != 0.0; });
  p.erase(p.begin(), it);
}

double max_abs(const Poly& p) {
  double m = 0.0;
  for (double c : p) m = std::max(m, std::abs(c));
  return m;
}

void normalize(Poly& p) {
  const double m = max_abs(p);
  if (m > 0.0)
    for (double& c : p) c /= m;
}

Poly derivative(const Poly& p) {
  if (p.size() <= 1) return {};
  const std::size_t n = p.size() - 1;
  Poly out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = p[k] * static_cast<double>(n - k);
  return out;
}

double horner(const Poly& p, double z) {
  double v = 0.0;
  for (double c : p) v = v * z + c;
  return v;
}

// Long division p = q*s + r; returns (q, r). s must have a nonzero lead.
std::pair<Poly, Poly> divide(const Poly& p, const Poly& s) {
  if (p.size() < s.size()) return {Poly{}, p};
  Poly r = p;
  Poly q(p.size() - s.size() + 1, 0.0);
  for (std::size_t k = 0; k < q.size(); ++k) {
    const double f = r[k] / s[0];
    q[k] = f;
    for (std::size_t j = 0; j < s.size(); ++j) r[k + j] -= f * s[j];
  }
  Poly rem(r.end() - static_cast<std::ptrdiff_t>(s.size() - 1), r.end());
  return {q, rem};
}

// Zero out coefficients that are rounding noise relative to `scale`.
void clamp(Poly& p, double scale, double rel) {
  for (double& c : p)
    if (std::abs(c) <= rel * scale) c = 0.0;
  strip_leading_zeros(p);
}

constexpr double kGcdTol = 1e-9;

Poly gcd(Poly a, Poly b) {
  strip_leading_zeros(a);
  strip_leading_zeros(b);
  normalize(a);
  normalize(b);
  while (!b.empty()) {
    auto [q, r] = divide(a, b);
    clamp(r, std::max(max_abs(a), max_abs(b)), kGcdTol);
    a = std::move(b);
    b = std::move(r);
    normalize(b);
  }
  return a;
}

// a - b with coefficients aligned at the constant term, noise clamped.
Poly subtract_aligned(const Poly& a, const Poly& b) {
  const std::size_t n = std::max(a.size(), b.size());
  Poly aa(n, 0.0), bb(n, 0.0), out(n);
  std::copy(a.begin(), a.end(), aa.end() - static_cast<std::ptrdiff_t>(a.size()));
  std::copy(b.begin(), b.end(), bb.end() - static_cast<std::ptrdiff_t>(b.size()));
  for (std::size_t k = 0; k < n; ++k) out[k] = aa[k] - bb[k];
  clamp(out, std::max(max_abs(aa), max_abs(bb)), kGcdTol);
  return out;
}

MonicPolynomial to_monic(const Poly& p) {
  MonicPolynomial m;
  for (std::size_t k = 1; k < p.size(); ++k) m.sigma.push_back(p[k] / p[0]);
  return m;
}

// Taylor coefficients T_r = Q^{(r)}(c)/r!, r = 0..d.
std::vector<double> taylor(const Poly& p, double c) {
  Poly work = p;
  const std::size_t n = p.size();
  std::vector<double> t(n);
  for (std::size_t r = 0; r < n; ++r) {
    // synthetic division of work[0..n-1-r] by (z - c)
    const std::size_t len = n - r;
    for (std::size_t k = 1; k < len; ++k) work[k] += c * work[k - 1];
    t[r] = work[len - 1];
  }
  return t;
}

// Parlett-Reinsch balancing in place.
void balance(Eigen::MatrixXd& a) {
  constexpr double radix = 2.0;
  const Eigen::Index n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix, f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        g = 1.0 / f;
        a.row(i) *= g;
        a.col(i) *= f;
      }
    }
  }
}

std::vector<std::complex<double>> companion_eigenvalues(const MonicPolynomial& q) {
  const auto d = static_cast<Eigen::Index>(q.degree());
  if (d == 1) return {std::complex<double>(-q.sigma[0], 0.0)};
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) c(0, k) = -q.sigma[static_cast<std::size_t>(k)];
  for (Eigen::Index k = 1; k < d; ++k) c(k, k - 1) = 1.0;
  balance(c);
  Eigen::EigenSolver<Eigen::MatrixXd> es(c, false);
  std::vector<std::complex<double>> out;
  for (Eigen::Index k = 0; k < d; ++k) out.push_back(es.eigenvalues()(k));
  return out;
}

double newton_polish(const MonicPolynomial& q, double x) {
  const Poly p = q.coefficients();
  const Poly dp = derivative(p);
  double fx = horner(p, x);
  for (int it = 0; it < 5 && fx != 0.0; ++it) {
    const double dfx = horner(dp, x);
    if (dfx == 0.0) break;
    const double xn = x - fx / dfx;
    const double fn = horner(p, xn);
    if (!(std::abs(fn) < std::abs(fx))) break;
    x = xn;
    fx = fn;
  }
  return x;
}

enum class PairKind { Complex, Real };

// Local quadratic model of Q around c: T2 w^2 + T1 w + T0. Decides whether
// a near-double cluster is a real pair (possibly collided) or complex.
PairKind resolve_pair(const MonicPolynomial& q, double c, double& r1, double& r2) {
  const Poly p = q.coefficients();
  const std::vector<double> t = taylor(p, c);
  Poly absp(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) absp[k] = std::abs(p[k]);
  const std::vector<double> ta = taylor(absp, std::abs(c));
  const double gamma = 4.0 * static_cast<double>(p.size() + 1) * kEps;
  const double e0 = gamma * ta[0], e1 = gamma * ta[1], e2 = gamma * ta[2];
  const double t0 = t[0], t1 = t[1], t2 = t[2];
  double disc = t1 * t1 - 4.0 * t0 * t2;
  const double noise = 2.0 * std::abs(t1) * e1 + 4.0 * (std::abs(t2) * e0 + std::abs(t0) * e2) +
                       4.0 * e0 * e2 + e1 * e1;
  if (disc < -noise) return PairKind::Complex;
  if (disc <= noise) disc = 0.0;
  if (t2 == 0.0) {
    r1 = r2 = c;
    return PairKind::Real;
  }
  if (disc == 0.0) {
    r1 = r2 = c - t1 / (2.0 * t2);
    return PairKind::Real;
  }
  const double s = std::sqrt(disc);
  // numerically stable quadratic roots
  const double qq = -0.5 * (t1 + std::copysign(s, t1));
  if (qq == 0.0) {
    r1 = r2 = c;
  } else {
    const double w1 = qq / t2, w2 = t0 / qq;
    r1 = c + std::min(w1, w2);
    r2 = c + std::max(w1, w2);
  }
  return PairKind::Real;
}

}  // namespace

double MonicPolynomial::operator()(double z) const noexcept {
  double v = 1.0;
  for (double s : sigma) v = v * z + s;
  return v;
}

std::vector<double> MonicPolynomial::coefficients() const {
  Poly p;
  p.reserve(sigma.size() + 1);
  p.push_back(1.0);
  p.insert(p.end(), sigma.begin(), sigma.end());
  return p;
}

std::vector<double> MonicPolynomial::derivatives_at(double l) const {
  std::vector<double> t = taylor(coefficients(), l);
  double fact = 1.0;
  for (std::size_t r = 0; r < t.size(); ++r) {
    if (r > 0) fact *= static_cast<double>(r);
    t[r] *= fact;
  }
  return t;
}

double MonicPolynomial::magnitude_at(double z) const noexcept {
  double v = 1.0;
  const double az = std::abs(z);
  for (double s : sigma) v = v * az + std::abs(s);
  return v;
}

RootStatus root_map(const MonicPolynomial& q, double tol) {
  if (q.degree() == 0) throw Error(Errc::InvalidArgument, "root_map needs degree >= 1");
  if (!(tol > 0.0)) throw Error(Errc::InvalidArgument, "tolerance must be positive");

  RootStatus out;
  const auto eig = companion_eigenvalues(q);

  std::vector<double> roots;
  std::vector<double> pair_centres;
  for (const auto& z : eig) {
    const double re = z.real(), im = z.imag();
    if (std::abs(im) <= tol * (1.0 + std::abs(re))) {
      roots.push_back(newton_polish(q, re));
    } else if (im > 0.0) {
      if (im <= kNearRealPair * (1.0 + std::abs(re))) {
        pair_centres.push_back(re);
      } else {
        out.kind = RootKind::HasComplexPair;
        return out;
      }
    }
  }
  for (double c : pair_centres) {
    double r1 = 0.0, r2 = 0.0;
    if (resolve_pair(q, c, r1, r2) == PairKind::Complex) {
      out.kind = RootKind::HasComplexPair;
      return out;
    }
    roots.push_back(r1);
    roots.push_back(r2);
  }
  std::sort(roots.begin(), roots.end());

  // Near-coincident real candidates: settle split vs. collision with the same
  // local model used for near-real pairs.
  for (std::size_t j = 1; j < roots.size(); ++j) {
    const double gap = roots[j] - roots[j - 1];
    const double mid = 0.5 * (roots[j] + roots[j - 1]);
    if (gap > kNearRealPair * (1.0 + std::abs(mid))) continue;
    double r1 = 0.0, r2 = 0.0;
    if (resolve_pair(q, mid, r1, r2) == PairKind::Complex) {
      r1 = r2 = mid;  // indistinguishable from a double root
    }
    roots[j - 1] = r1;
    roots[j] = r2;
  }
  std::sort(roots.begin(), roots.end());

  double scale = 0.0;
  for (double r : roots) scale = std::max(scale, std::abs(r));
  out.roots = std::move(roots);
  out.min_gap = min_gap(out.roots);
  out.kind = out.min_gap > tol * (1.0 + scale) ? RootKind::Hyperbolic : RootKind::RealWithCollisions;
  if (out.kind == RootKind::RealWithCollisions) out.min_gap = std::max(0.0, out.min_gap);
  return out;
}

std::vector<double> real_eigenvalue_roots(const MonicPolynomial& q, double imag_tol) {
  std::vector<double> out;
  for (const auto& z : companion_eigenvalues(q))
    if (std::abs(z.imag()) <= imag_tol * (1.0 + std::abs(z.real()))) out.push_back(z.real());
  std::sort(out.begin(), out.end());
  return out;
}

MonicPolynomial vieta_map(std::span<const double> x) {
  if (x.empty()) throw Error(Errc::InvalidArgument, "vieta_map needs at least one node");
  return MonicPolynomial{vieta_coeffs(x)};
}

int sign_changes(std::span<const double> seq, double zero_tol) {
  int changes = 0;
  int last = 0;
  for (double v : seq) {
    if (std::abs(v) <= zero_tol) continue;
    const int s = v > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

int budan_fourier_variations(const MonicPolynomial& q, double l) {
  const std::vector<double> seq = q.derivatives_at(l);
  return sign_changes(seq, 0.0);
}

BudanFourierBound budan_fourier(const MonicPolynomial& q, double a, double b) {
  if (!(a < b)) throw Error(Errc::InvalidInterval, "budan_fourier needs a < b");
  BudanFourierBound out;
  out.bound = budan_fourier_variations(q, a) - budan_fourier_variations(q, b);
  out.parity = out.bound % 2;
  return out;
}

double cauchy_bound(const MonicPolynomial& q) noexcept {
  double m = 0.0;
  for (double s : q.sigma) m = std::max(m, std::abs(s));
  return 1.0 + m;
}

namespace {

// Moves an endpoint that is numerically a root to the right by a tiny amount.
double nudge_off_root(const MonicPolynomial& q, double x) {
  for (int k = 0; k < 8; ++k) {
    const double noise = 4.0 * static_cast<double>(q.degree() + 1) * kEps * q.magnitude_at(x);
    if (std::abs(q(x)) > noise) return x;
    x += 1e-12 * (1.0 + std::abs(x)) * std::pow(2.0, k);
  }
  return x;
}

int sturm_chain_count(const std::vector<Poly>& chain, double x) {
  std::vector<double> vals;
  vals.reserve(chain.size());
  for (const Poly& p : chain) vals.push_back(horner(p, x));
  return sign_changes(vals, 0.0);
}

}  // namespace

int sturm_count(const MonicPolynomial& q, double a, double b) {
  if (!(a < b)) throw Error(Errc::InvalidInterval, "sturm_count needs a < b");
  if (q.degree() == 0) return 0;

  std::vector<Poly> chain;
  chain.push_back(q.coefficients());
  chain.push_back(derivative(chain.front()));
  normalize(chain.back());
  while (true) {
    const Poly& prev = chain[chain.size() - 2];
    const Poly& cur = chain.back();
    auto [quot, rem] = divide(prev, cur);
    clamp(rem, std::max(max_abs(prev), max_abs(cur)), 1e-10);
    if (rem.empty()) break;
    for (double& c : rem) c = -c;
    normalize(rem);
    chain.push_back(std::move(rem));
  }
  if (chain.back().size() > 1)
    throw Error(Errc::DegenerateSequence, "polynomial is not square-free");

  const double lo = nudge_off_root(q, a);
  const double hi = nudge_off_root(q, b);
  return sturm_chain_count(chain, lo) - sturm_chain_count(chain, hi);
}

std::vector<MonicPolynomial> squarefree_decomposition(const MonicPolynomial& q) {
  const Poly f = q.coefficients();
  const Poly df = derivative(f);
  std::vector<MonicPolynomial> out;
  if (f.size() == 1) return out;

  Poly a = gcd(f, df);
  Poly b = divide(f, a).first;
  Poly c = divide(df, a).first;
  Poly dd = subtract_aligned(c, derivative(b));
  while (b.size() > 1) {
    Poly ai = dd.empty() ? b : gcd(b, dd);
    out.push_back(to_monic(ai));
    const Poly bn = divide(b, ai).first;
    const Poly cn = dd.empty() ? Poly{} : divide(dd, ai).first;
    Poly dn = subtract_aligned(cn, derivative(bn));
    b = bn;
    dd = dn;
  }
  while (!out.empty() && out.back().degree() == 0) out.pop_back();
  return out;
}

int root_count_with_multiplicity(const MonicPolynomial& q, double a, double b) {
  const auto factors = squarefree_decomposition(q);
  int total = 0;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    if (factors[k].degree() == 0) continue;
    total += static_cast<int>(k + 1) * sturm_count(factors[k], a, b);
  }
  return total;
}

}  // namespace prony
