#pragma once

namespace tge {

// Cosine pair describing how one scalar feature rotates between two
// consecutive snapshots. Satisfies cos_alpha^2 + cos_beta^2 = 1.
struct AnglePair {
  double cos_alpha;
  double cos_beta;
};

inline constexpr double kDefaultZeroTol = 1e-12;

// Rotation cosines for a feature value moving from `value_now` to
// `value_next`. Inputs with magnitude below `zero_tol` are treated as
// exact zeros; the function is total.
AnglePair givens_angles(double value_now, double value_next,
                        double zero_tol = kDefaultZeroTol);

}  // namespace tge
