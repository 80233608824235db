#pragma once

// Cartan's angular invariant of boundary triples and the nontriviality /
// injectivity certificates for bent groups.
//
// Sign convention: A = arg(-<x0,x1><x1,x2><x2,x0>) on SIEGEL null lifts,
// which gives +pi/2 for the vertical chain ((0,-1), (0,1), inf).

#include <optional>
#include <vector>

#include "chbend/bending.hpp"

namespace chbend {

struct BoundaryTriple {
  HeisenbergPoint x0, x1, x2;
};

/// Value in [-pi/2, pi/2]. DomainError for coincident points.
double cartan_angle(const BoundaryTriple& t);

/// Same on arbitrary null lifts in the given form.
double cartan_angle_lifts(const Vec3& a, const Vec3& b, const Vec3& c, FormTag form);

struct Certificate {
  double eta = 0.0;
  BoundaryTriple triple;  ///< (x1, 0, x2_eta)
  double angle = 0.0;
  Word x1_word;        ///< G1 word carrying the seed to x1
  Word x2_generator;   ///< bent generator whose attracting fixed point gives x2
  int pull_power = 0;  ///< x2_eta = g_alpha^{-pull_power} fix(chi(x2_generator))
  bool applicable = false;  ///< false for eta = 0
  bool pass = false;        ///< 1e-6 < |angle| < pi/2 - 1e-6
};

/// Triple from the proof of non-rigidity: x1 a G1 limit point on the
/// negative real ray (words of length <= depth), the origin, and the fixed
/// point of the bent first G2 generator (HNN: the bent stable letter) pulled
/// toward the origin by powers of g_alpha.
Certificate nontriviality_certificate(const BentGroup& b, int depth);

struct InjectivityScan {
  std::vector<Certificate> rows;
  double min_gap = 0.0;  ///< smallest pairwise |angle difference|
  bool pass = false;     ///< min_gap > 1e-6
};

/// Certificates for each eta (zeta fixed across the scan). Duplicate etas are
/// rejected with DomainError.
InjectivityScan injectivity_scan(const MarkedGroup& g, const std::vector<double>& etas, int depth,
                                 double zeta = kPi / 6.0);

}  // namespace chbend
