#include "commflow/lp.hpp"

#include <cmath>

#include "commflow/fixed_point.hpp"
#include "commflow/lewis.hpp"

namespace commflow {

void DistributedLP::validate() const {
  const int rows = a.rows();
  if (partition.size() != rows)
    throw std::invalid_argument("partition size mismatch");
  partition.validate();
  if (b.size() != a.cols()) throw std::invalid_argument("b size mismatch");
  if (c.size() != rows || l.size() != rows || u.size() != rows)
    throw std::invalid_argument("c/l/u size mismatch");
  for (int i = 0; i < rows; ++i)
    if (!(l[i] <= u[i])) throw std::invalid_argument("box requires l <= u");
  const double bound = fixed_point_max(bits);
  if (a.max_abs() > bound || b.cwiseAbs().maxCoeff() > bound ||
      c.cwiseAbs().maxCoeff() > bound)
    throw std::invalid_argument("entries exceed the configured bit bound");
}

StepConstants StepConstants::conforming_constants(int m, int n, double C) {
  StepConstants k;
  k.C = C;
  k.alpha = 1.0 / (4.0 * std::log(4.0 * double(m) / double(n)));
  k.p = 1.0 - k.alpha;
  k.epsilon = k.alpha / C;
  k.lambda = C * std::log(C * double(m) / (k.epsilon * k.epsilon)) / k.epsilon;
  k.gamma = k.epsilon / (C * k.lambda);
  k.C_norm = C / (1.0 - k.p);
  k.C_valid = k.C_norm;
  k.r = k.epsilon * k.gamma / (k.C_norm * std::sqrt(double(n)));
  k.conforming = true;
  return k;
}

StepConstants StepConstants::practical(int m, int n, double epsilon,
                                       double band, double stability) {
  StepConstants k;
  k.alpha = 1.0 / (4.0 * std::log(4.0 * double(m) / double(n)));
  k.p = 1.0 - k.alpha;
  k.epsilon = epsilon;
  k.lambda = band / epsilon;
  k.gamma = stability / (k.lambda * k.lambda * std::cosh(band));
  k.r = k.gamma * k.lambda * std::sinh(band / 2.0) / std::sqrt(double(n));
  // Back-solve C_norm (= C_valid) so r = eps*gamma/(C_norm sqrt(n)) holds
  // exactly; C is the implied eps = alpha/C ratio.
  k.C_norm = k.epsilon * k.gamma / (k.r * std::sqrt(double(n)));
  k.C_valid = k.C_norm;
  k.C = k.alpha / k.epsilon;
  k.conforming = false;
  return k;
}

}  // namespace commflow
