#pragma once

#include <random>

#include "chbend/bending.hpp"
#include "chbend/heisenberg.hpp"
#include "oracles.hpp"

namespace test {

using namespace chbend;

inline Vec3 random_vec(std::mt19937_64& rng) {
  Vec3 v;
  for (int k = 0; k < 3; ++k) v(k) = cplx(oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1));
  return v;
}

inline BallPoint random_ball_point(std::mt19937_64& rng) {
  for (;;) {
    const BallPoint p{cplx(oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1)),
                      cplx(oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1))};
    if (p.norm_squared() < 0.95) return p;
  }
}

inline BallPoint random_real_ball_point(std::mt19937_64& rng) {
  for (;;) {
    const BallPoint p{cplx(oracle::uniform(rng, -1, 1)), cplx(oracle::uniform(rng, -1, 1))};
    if (p.norm_squared() < 0.95) return p;
  }
}

inline HeisenbergPoint random_heisenberg(std::mt19937_64& rng, double scale = 2.0) {
  return {cplx(oracle::uniform(rng, -scale, scale), oracle::uniform(rng, -scale, scale)),
          oracle::uniform(rng, -scale, scale), false};
}

/// Product of Heisenberg similarities and the inversion (SIEGEL form).
inline Isometry random_isometry(std::mt19937_64& rng) {
  const Isometry t1 = heisenberg_translation(cplx(oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1)),
                                             oracle::uniform(rng, -1, 1));
  const Isometry t2 = heisenberg_translation(cplx(oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1)),
                                             oracle::uniform(rng, -1, 1));
  return t1 * dilation(oracle::uniform(rng, 0.5, 2.0)) * rotation_u(oracle::uniform(rng, -3, 3)) *
         siegel_inversion() * t2;
}

/// genus2_group(0.5, 0) normalized, built once.
inline const MarkedGroup& genus2_half() {
  static const MarkedGroup g = normalize_axis(genus2_group(0.5, 0.0));
  return g;
}

inline BentGroup bent_half(double eta) { return bend_group(genus2_half(), BendingParams(eta, default_zeta(genus2_half(), eta))); }

}  // namespace test
