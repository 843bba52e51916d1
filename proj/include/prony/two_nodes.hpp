#pragma once

// Closed-form geometry of the d = 2 Prony curve in the node plane: the
// set of (x1, x2) with mu0 x1 x2 - mu1 (x1 + x2) + mu2 = 0.

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace prony {

enum class TwoNodeKind { HyperbolaNonSingular, DegenerateCross, Line, Empty, WholePlane };

std::string_view to_string(TwoNodeKind kind) noexcept;

struct TwoNodeCase {
  TwoNodeKind kind = TwoNodeKind::WholePlane;
  std::optional<double> center;    ///< c = mu1/mu0; the curve is centred at (c, c)
  std::optional<double> level;     ///< (mu0 mu2 - mu1^2) / mu0^2
  std::optional<double> line_sum;  ///< x1 + x2 = mu2/mu1
};

using Triple = std::array<double, 3>;

/// Exact case analysis when zero_tol = 0. With zero_tol > 0, |mu0|, |mu1|,
/// |mu2| <= zero_tol count as zero and the determinant mu0 mu2 - mu1^2 is
/// compared against zero_tol * (mu0^2 + mu1^2 + mu2^2).
TwoNodeCase classify2(const Triple& mu, double zero_tol = 0.0);

/// mu0 x1 x2 - mu1 (x1 + x2) + mu2.
double two_node_equation(const Triple& mu, double x1, double x2) noexcept;

/// Number of points where the line mu1 s1 + mu0 s2 = -mu2 meets the parabola
/// s2 = s1^2/4 (2, 1 or 0), computed along the line from its least-squares
/// parametrization. Returns nullopt when the line is not one-dimensional.
std::optional<int> parabola_crossings(const Triple& mu, double rel_tol = 1e-9);

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;
};

struct Branch {
  std::vector<Point2> points;  ///< ordered along the curve
  std::vector<std::size_t> marked;  ///< indices of diagonal (collision) points
};

struct FigureGroup {
  Triple mu{};
  TwoNodeCase classification;
  std::vector<Branch> branches;  ///< ordered by infimum of x1
};

/// Samples the part of the curve inside [lo, hi]^2 with x1 <= x2, n points
/// per branch, by walking the coefficient line L_2(mu) through the hyperbolic
/// region. Collision points on the diagonal are kept and marked.
FigureGroup figure_curve(const Triple& mu, double lo, double hi, int n);

std::vector<FigureGroup> figure_curves(std::span<const Triple> lines, double lo, double hi, int n);

/// Two-node amplitudes on S_1: a1 = (mu0 x2 - mu1)/(x2 - x1),
/// a2 = (mu1 - mu0 x1)/(x2 - x1).
std::pair<double, double> two_node_amplitudes(double mu0, double mu1, double x1, double x2);

}  // namespace prony
