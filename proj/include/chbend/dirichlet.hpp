#pragma once

// Dirichlet polygons of real surface groups in the invariant real plane.
//
// The real plane of the BALL form is the Beltrami-Klein disk {x^2 + y^2 < 1},
// where bisectors are straight chords, so the polygon is a convex Euclidean
// polygon cut out by half-planes <w, z - gz> >= 0.

#include <array>
#include <vector>

#include "chbend/fuchsian.hpp"

namespace chbend {

using Vec2 = Eigen::Vector2d;

struct PolygonSide {
  Word word;  ///< side lies on the bisector of z and word(z)
  Vec2 start;
  Vec2 end;
};

enum class PolygonStatus { Complete, Incomplete };

struct DirichletPolygon {
  BallPoint center;
  std::vector<PolygonSide> sides;  ///< counter-clockwise
  int truncation_depth = 0;
  PolygonStatus status = PolygonStatus::Incomplete;
  std::size_t candidates = 0;  ///< distinct orbit points considered

  std::vector<Vec2> vertices() const;
};

/// Point on the axis of g_alpha (real plane for real groups, BALL coordinates)
/// minimizing the summed generator displacement over one period of the axis.
BallPoint axis_center(const MarkedGroup& g);

/// Polygon from all reduced words of length <= depth. The center must be a
/// real interior point. Status is Incomplete when the truncated polygon still
/// reaches the boundary circle.
DirichletPolygon dirichlet_polygon(const MarkedGroup& g, const BallPoint& center, int depth);

/// Exactly two sides meet the axis of g_alpha and they are paired by g_alpha.
bool two_side_check(const DirichletPolygon& poly, const MarkedGroup& g);

/// Area in the K = -1/4 normalization (4x the curvature -1 angle defect).
double polygon_area(const DirichletPolygon& poly);

/// Interior angles (Riemannian, at each vertex) in the order of vertices().
std::vector<double> polygon_angles(const DirichletPolygon& poly);

/// Right-triangle configuration behind the two-side lemma: z on the axis, m
/// on the axis at distance l/2 from z (on the bisector of z and g_alpha z),
/// w at distance 2 delta from m along the perpendicular. Returns
/// d(m, z) - d(m, w); zero exactly when the bisector of z and w passes m.
double two_side_lemma_residual(double ell, double delta);

/// Root delta of two_side_lemma_residual(ell, .) by bisection.
double two_side_lemma_boundary_delta(double ell);

}  // namespace chbend
