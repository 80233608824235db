#pragma once

// Collar-lemma calculators for a marked geodesic A = axis(g_alpha) of a real
// surface group. Lengths are in the project's K = -1/4 normalization on the
// invariant real plane, so the inequalities take the form
//   sinh(l/4) sinh(d(A, gA)/4) >= 1/2       (every g outside <g_alpha>)
//   sinh(l/4) sinh(delta/2)   <= 1/2       (precisely invariant collar).

#include <string>
#include <vector>

#include "chbend/fuchsian.hpp"

namespace chbend {

/// Largest collar radius allowed by sinh(l/4) sinh(delta/2) <= 1/2.
double collar_bound(double ell);

/// (1/2) csch(ln 63 / 4) ~ 0.406114: the threshold on sinh(l/2).
double collar_threshold_constant();

/// Length below which sinh(l/2) stays under collar_threshold_constant().
double collar_threshold_length();

/// Left-hand side of sinh(l/4) sinh(d/4) >= 1/2.
double collar_product(double ell, double axis_distance);

/// Distance between the geodesics with boundary endpoints (a1, a2) and
/// (b1, b2), given as null SIEGEL lifts spanning a real plane; 0 if they meet.
/// Uses the endpoint cross-ratio: cosh(d/2) = |<a1,b1><a2,b2> - <a1,b2><a2,b1>|
///   / (|<a1,a2>| |<b1,b2>|).
double geodesic_distance(const Vec3& a1, const Vec3& a2, const Vec3& b1, const Vec3& b2);

/// d(A, gA) for the vertical axis A = (0, inf) of a normalized group.
double axis_translate_distance(const Isometry& g);

/// True iff g maps the vertical axis to itself (g in the stabilizer).
bool preserves_vertical_axis(const Isometry& g, double tol = 1e-9);

struct CollarWitness {
  Word word;
  double distance;
  double slack;  ///< collar_product - 1/2
};

struct CollarReport {
  double ell = 0.0;
  double delta_max = 0.0;
  bool pass = true;
  double min_slack = 0.0;
  std::size_t words_checked = 0;
  /// Violations plus the tightest words, smallest slack first.
  std::vector<CollarWitness> witnesses;
};

/// Checks the collar inequality over all reduced words of length <= depth
/// that do not stabilize the axis. Needs a normalized real group.
CollarReport collar_check(const MarkedGroup& g, int depth, std::size_t keep_witnesses = 8);

}  // namespace chbend
