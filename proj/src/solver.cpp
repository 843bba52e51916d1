#include "prony/solver.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "prony/error.hpp"

namespace prony {

namespace {

double residual_norm(const MomentVector& mu, const Signal& s) {
  double r2 = 0.0;
  for (double r : residuals(mu, s, 2 * mu.d - 1)) r2 += r * r;
  return std::sqrt(r2);
}

// Newton on the full square system; a step is kept only if the residual drops
// and the nodes stay strictly increasing.
void polish(const MomentVector& mu, Signal& s, double& res, int steps) {
  const int d = mu.d;
  for (int it = 0; it < steps && res > 0.0; ++it) {
    Eigen::MatrixXd J(2 * d, 2 * d);
    Eigen::VectorXd r(2 * d);
    const std::vector<double> rv = residuals(mu, s, 2 * d - 1);
    for (int k = 0; k < 2 * d; ++k) {
      r(k) = rv[k];
      for (int j = 0; j < d; ++j) {
        const double x = s.nodes[j];
        J(k, j) = std::pow(x, k);
        J(k, d + j) = k == 0 ? 0.0 : s.amplitudes[j] * k * std::pow(x, k - 1);
      }
    }
    const Eigen::VectorXd step = J.colPivHouseholderQr().solve(-r);
    if (!step.allFinite()) return;
    Signal next = s;
    for (int j = 0; j < d; ++j) {
      next.amplitudes[j] += step(j);
      next.nodes[j] += step(d + j);
    }
    if (!next.valid()) return;
    const double nres = residual_norm(mu, next);
    if (!(nres < res)) return;
    s = std::move(next);
    res = nres;
  }
}

}  // namespace

std::string_view to_string(SolveKind kind) noexcept {
  switch (kind) {
    case SolveKind::Unique: return "Unique";
    case SolveKind::Empty: return "Empty";
    case SolveKind::NonHyperbolic: return "NonHyperbolic";
    case SolveKind::DegenerateHankel: return "DegenerateHankel";
  }
  return "Unknown";
}

SolveOutcome solve(const MomentVector& mu, const SolveOptions& options) {
  const int d = mu.d;
  if (d < 1) throw Error(Errc::InvalidArgument, "model order must be positive");
  const auto full = static_cast<std::size_t>(2 * d);
  if (mu.size() < full) throw Error(Errc::InsufficientMoments, "solve needs 2d moments");
  if (mu.size() > full) throw Error(Errc::DimensionMismatch, "solve takes exactly 2d moments");

  SolveOutcome out;
  const HankelSummary h = hankel(mu, options.rank_tol);
  out.diagnostics.delta = h.delta;
  out.diagnostics.eta = h.eta;

  AffineSubspace sub = linear_subspace(mu, 2 * d - 1, options.rank_tol);
  if (sub.empty) {
    out.kind = SolveKind::Empty;
    out.diagnostics.residual_norm = sub.residual;
    return out;
  }
  if (sub.dimension() > 0) {
    out.kind = SolveKind::DegenerateHankel;
    out.subspace = std::move(sub);
    return out;
  }

  const RootStatus roots = root_map(MonicPolynomial{sub.anchor}, options.collision_tol);
  if (roots.kind != RootKind::Hyperbolic) {
    out.kind = SolveKind::NonHyperbolic;
    out.diagnostics.residual_norm = sub.residual;
    return out;
  }

  Signal signal = amplitudes_closed_form(mu, roots.roots);
  double res = residual_norm(mu, signal);
  polish(mu, signal, res, options.polish_steps);
  out.diagnostics.residual_norm = res;
  out.kind = SolveKind::Unique;
  out.signal = std::move(signal);
  return out;
}

}  // namespace prony
