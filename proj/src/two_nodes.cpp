#include "prony/two_nodes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "prony/algebra.hpp"
#include "prony/error.hpp"
#include "prony/variety.hpp"

namespace prony {

namespace {

struct CoefficientLine {
  double p1, p2;  // anchor
  double v1, v2;  // unit direction
};

std::optional<CoefficientLine> coefficient_line(const Triple& mu) {
  const MomentVector m{{mu[0], mu[1], mu[2]}, 2};
  const AffineSubspace sub = linear_subspace(m, 2);
  if (sub.empty || sub.dimension() != 1) return std::nullopt;
  return CoefficientLine{sub.anchor[0], sub.anchor[1], sub.basis[0][0], sub.basis[0][1]};
}

// disc(s) = s1(s)^2 - 4 s2(s) = qa s^2 + qb s + qc along the line.
struct Quadratic {
  double qa, qb, qc;
};

Quadratic discriminant_along(const CoefficientLine& l) {
  return {l.v1 * l.v1, 2.0 * l.p1 * l.v1 - 4.0 * l.v2, l.p1 * l.p1 - 4.0 * l.p2};
}

// Real zeros of the quadratic, ascending, with a double zero reported once.
std::vector<double> zeros(const Quadratic& q, double rel_tol) {
  const double scale = std::abs(q.qa) + std::abs(q.qb) + std::abs(q.qc);
  if (std::abs(q.qa) <= rel_tol * scale) {
    if (std::abs(q.qb) <= rel_tol * scale) return {};
    return {-q.qc / q.qb};
  }
  const double delta = q.qb * q.qb - 4.0 * q.qa * q.qc;
  const double noise = rel_tol * (q.qb * q.qb + 4.0 * std::abs(q.qa * q.qc));
  if (delta < -noise) return {};
  if (delta <= noise) return {-q.qb / (2.0 * q.qa)};
  const double s = std::sqrt(delta);
  const double w = -0.5 * (q.qb + std::copysign(s, q.qb));
  double r1 = w / q.qa, r2 = q.qc / w;
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}

// Parameter range of the line inside the coefficient box that contains the
// image of [lo, hi]^2.
std::optional<std::pair<double, double>> clip_to_box(const CoefficientLine& l, double lo, double hi) {
  const double m = std::max(lo * lo, hi * hi);
  const double bounds[2][2] = {{-2.0 * hi, -2.0 * lo}, {-m, m}};
  const double p[2] = {l.p1, l.p2};
  const double v[2] = {l.v1, l.v2};
  double smin = -std::numeric_limits<double>::infinity();
  double smax = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 2; ++k) {
    if (std::abs(v[k]) < 1e-300) {
      if (p[k] < bounds[k][0] || p[k] > bounds[k][1]) return std::nullopt;
      continue;
    }
    double a = (bounds[k][0] - p[k]) / v[k], b = (bounds[k][1] - p[k]) / v[k];
    if (a > b) std::swap(a, b);
    smin = std::max(smin, a);
    smax = std::min(smax, b);
  }
  if (!(smin < smax)) return std::nullopt;
  return std::make_pair(smin, smax);
}

}  // namespace

std::string_view to_string(TwoNodeKind kind) noexcept {
  switch (kind) {
    case TwoNodeKind::HyperbolaNonSingular: return "HyperbolaNonSingular";
    case TwoNodeKind::DegenerateCross: return "DegenerateCross";
    case TwoNodeKind::Line: return "Line";
    case TwoNodeKind::Empty: return "Empty";
    case TwoNodeKind::WholePlane: return "WholePlane";
  }
  return "Unknown";
}

TwoNodeCase classify2(const Triple& mu, double zero_tol) {
  const auto is_zero = [zero_tol](double v) { return std::abs(v) <= zero_tol; };
  const double m0 = mu[0], m1 = mu[1], m2 = mu[2];
  TwoNodeCase out;
  if (!is_zero(m0)) {
    const double det = m0 * m2 - m1 * m1;
    out.center = m1 / m0;
    const bool singular = std::abs(det) <= zero_tol * (m0 * m0 + m1 * m1 + m2 * m2);
    out.level = singular ? 0.0 : det / (m0 * m0);
    out.kind = singular ? TwoNodeKind::DegenerateCross : TwoNodeKind::HyperbolaNonSingular;
  } else if (!is_zero(m1)) {
    out.kind = TwoNodeKind::Line;
    out.line_sum = m2 / m1;
  } else if (!is_zero(m2)) {
    out.kind = TwoNodeKind::Empty;
  } else {
    out.kind = TwoNodeKind::WholePlane;
  }
  return out;
}

double two_node_equation(const Triple& mu, double x1, double x2) noexcept {
  return mu[0] * x1 * x2 - mu[1] * (x1 + x2) + mu[2];
}

std::optional<int> parabola_crossings(const Triple& mu, double rel_tol) {
  const auto line = coefficient_line(mu);
  if (!line) return std::nullopt;
  return static_cast<int>(zeros(discriminant_along(*line), rel_tol).size());
}

FigureGroup figure_curve(const Triple& mu, double lo, double hi, int n) {
  if (!(lo < hi)) throw Error(Errc::InvalidWindow, "figure window needs lo < hi");
  if (n < 2) throw Error(Errc::InvalidArgument, "need at least two points per branch");

  FigureGroup out;
  out.mu = mu;
  out.classification = classify2(mu);
  const auto line = coefficient_line(mu);
  if (!line) return out;
  const auto range = clip_to_box(*line, lo, hi);
  if (!range) return out;

  const Quadratic disc = discriminant_along(*line);
  std::vector<double> cuts{range->first};
  for (double z : zeros(disc, 1e-12))
    if (z > range->first && z < range->second) cuts.push_back(z);
  cuts.push_back(range->second);
  const double slack = 1e-12 * (1.0 + std::max(std::abs(lo), std::abs(hi)));

  struct Sample {
    Point2 x;
    bool collided = false;
  };
  // roots of z^2 + s1 z + s2 at parameter s; on_cut forces the double root
  const auto eval = [&](double s, bool on_cut) -> std::optional<Sample> {
    const double s1 = line->p1 + s * line->v1;
    const double s2 = line->p2 + s * line->v2;
    double dv = s1 * s1 - 4.0 * s2;
    const bool collided = on_cut || std::abs(dv) <= 1e-12 * (s1 * s1 + 4.0 * std::abs(s2));
    if (collided) dv = 0.0;
    if (dv < 0.0) return std::nullopt;
    Sample out{{-0.5 * s1, -0.5 * s1}, collided};
    const double w = -0.5 * (s1 + std::copysign(std::sqrt(dv), s1));
    if (!collided && w != 0.0) {
      out.x = {w, s2 / w};
      if (out.x.x1 > out.x.x2) std::swap(out.x.x1, out.x.x2);
    }
    return out;
  };
  const auto inside = [&](const std::optional<Sample>& p) {
    return p && p->x.x1 >= lo - slack && p->x.x2 <= hi + slack;
  };

  constexpr int kScan = 512;
  for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
    const double a = cuts[seg], b = cuts[seg + 1];
    const double mid = 0.5 * (a + b);
    if (!((disc.qa * mid + disc.qb) * mid + disc.qc > 0.0)) continue;
    const bool cut_a = seg > 0, cut_b = seg + 2 < cuts.size();

    // the part of a branch inside the window is connected: find its ends
    const std::vector<double> scan = linspace(a, b, kScan);
    int first = -1, last = -1;
    for (int k = 0; k < kScan; ++k) {
      if (!inside(eval(scan[k], (k == 0 && cut_a) || (k == kScan - 1 && cut_b)))) continue;
      if (first < 0) first = k;
      last = k;
    }
    if (first < 0) continue;
    const auto refine = [&](double out_s, double in_s) {
      for (int it = 0; it < 80; ++it) {
        const double m = 0.5 * (out_s + in_s);
        (inside(eval(m, false)) ? in_s : out_s) = m;
      }
      return in_s;
    };
    const double s_lo = first == 0 ? a : refine(scan[first - 1], scan[first]);
    const double s_hi = last == kScan - 1 ? b : refine(scan[last + 1], scan[last]);

    Branch br;
    const std::vector<double> ss = s_lo < s_hi ? linspace(s_lo, s_hi, n) : std::vector<double>{s_lo};
    for (double s : ss) {
      const auto p = eval(s, (s == a && cut_a) || (s == b && cut_b));
      if (!inside(p)) continue;
      if (p->collided) br.marked.push_back(br.points.size());
      br.points.push_back(p->x);
    }
    if (!br.points.empty()) out.branches.push_back(std::move(br));
  }

  std::stable_sort(out.branches.begin(), out.branches.end(), [](const Branch& l, const Branch& r) {
    const auto inf = [](const Branch& b) {
      double m = std::numeric_limits<double>::infinity();
      for (const Point2& p : b.points) m = std::min(m, p.x1);
      return m;
    };
    return inf(l) < inf(r);
  });
  return out;
}

std::vector<FigureGroup> figure_curves(std::span<const Triple> lines, double lo, double hi, int n) {
  std::vector<FigureGroup> out;
  out.reserve(lines.size());
  for (const Triple& mu : lines) out.push_back(figure_curve(mu, lo, hi, n));
  return out;
}

std::pair<double, double> two_node_amplitudes(double mu0, double mu1, double x1, double x2) {
  if (!(x1 != x2)) throw Error(Errc::CollidingNodes, "two-node amplitudes need x1 != x2");
  const double h = x2 - x1;
  return {(mu0 * x2 - mu1) / h, (-mu0 * x1 + mu1) / h};
}

}  // namespace prony
