#include "commflow/fixed_point.hpp"

#include <cmath>
#include <string>

namespace commflow {

double fixed_point_max(int frac_bits) {
  return std::ldexp(1.0, frac_bits) - std::ldexp(1.0, -frac_bits);
}

FixedPointVector quantize(const Eigen::VectorXd& x, int frac_bits) {
  if (frac_bits < 1) throw std::invalid_argument("frac_bits must be >= 1");
  const double scale = std::ldexp(1.0, frac_bits);
  const double max_index = std::ldexp(1.0, 2 * frac_bits) - 1.0;
  FixedPointVector out;
  out.frac_bits = frac_bits;
  out.values.resize(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]))
      throw FixedPointOverflow("non-finite value at index " +
                               std::to_string(i));
    // nearbyint under the default FE_TONEAREST mode rounds ties to even.
    const double k = std::nearbyint(x[i] * scale);
    if (std::abs(k) > max_index)
      throw FixedPointOverflow(
          "value " + std::to_string(x[i]) + " at index " + std::to_string(i) +
          " exceeds the L=" + std::to_string(frac_bits) + " range");
    out.values[i] = k / scale;
  }
  return out;
}

bool is_representable(const Eigen::VectorXd& x, int frac_bits) {
  const double scale = std::ldexp(1.0, frac_bits);
  const double max_index = std::ldexp(1.0, 2 * frac_bits) - 1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) return false;
    const double k = std::nearbyint(x[i] * scale);
    if (std::abs(k) > max_index) return false;
  }
  return true;
}

}  // namespace commflow
