#include "tge/givens.hpp"

#include <cmath>

namespace tge {

namespace {

double snap_to_zero(double v, double zero_tol) {
  return (v == 0.0 || std::abs(v) < zero_tol) ? 0.0 : v;
}

}  // namespace

AnglePair givens_angles(double value_now, double value_next,
                        double zero_tol) {
  const double x = snap_to_zero(value_now, zero_tol);
  const double y = snap_to_zero(value_next, zero_tol);
  if (y == 0.0) {
    return {1.0, 0.0};
  }
  if (std::abs(y) > std::abs(x)) {
    const double tmp = -x / y;
    const double cos_beta = 1.0 / std::sqrt(1.0 + tmp * tmp);
    return {tmp * cos_beta, cos_beta};
  }
  const double tmp = -y / x;
  const double cos_alpha = 1.0 / std::sqrt(1.0 + tmp * tmp);
  return {cos_alpha, tmp * cos_alpha};
}

}  // namespace tge
