#pragma once

// Classical inversion of the full Prony system (q = 2d-1):
// moments -> coefficient vector -> nodes -> amplitudes.

#include <optional>
#include <string_view>

#include "prony/algebra.hpp"
#include "prony/hyperbolic.hpp"
#include "prony/variety.hpp"

namespace prony {

enum class SolveKind { Unique, Empty, NonHyperbolic, DegenerateHankel };

std::string_view to_string(SolveKind kind) noexcept;

struct SolveDiagnostics {
  double delta = 0.0;  ///< det M_d(mu)
  double eta = 0.0;    ///< smallest singular value of M_d(mu)
  double residual_norm = 0.0;
};

struct SolveOutcome {
  SolveKind kind = SolveKind::Empty;
  std::optional<Signal> signal;  ///< present iff kind == Unique
  SolveDiagnostics diagnostics;
  std::optional<AffineSubspace> subspace;  ///< set for DegenerateHankel
};

struct SolveOptions {
  double rank_tol = kRankTol;
  double collision_tol = kCollisionTol;
  int polish_steps = 3;  ///< Newton steps on the full system; 0 disables
};

/// Solves sum_j a_j x_j^k = mu_k, k = 0..2d-1. mu must hold exactly 2d values.
SolveOutcome solve(const MomentVector& mu, const SolveOptions& options = {});

}  // namespace prony
