#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "commflow/types.hpp"

namespace commflow {

struct BarrierValue {
  double phi;
  double d1;
  double d2;
};

// Two-sided log barrier phi(x) = -log(x - l) - log(u - x) on (l, u).
inline BarrierValue barrier(double x, double l, double u) {
  if (!(x > l && x < u))
    throw BarrierDomainError("barrier argument outside the open box");
  const double a = x - l;
  const double b = u - x;
  return {-std::log(a) - std::log(b), -1.0 / a + 1.0 / b,
          1.0 / (a * a) + 1.0 / (b * b)};
}

struct BarrierVectors {
  Eigen::VectorXd d1;
  Eigen::VectorXd d2;
};

inline BarrierVectors barrier_derivatives(const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& l,
                                          const Eigen::VectorXd& u) {
  BarrierVectors out;
  out.d1.resize(x.size());
  out.d2.resize(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const BarrierValue b = barrier(x[i], l[i], u[i]);
    out.d1[i] = b.d1;
    out.d2[i] = b.d2;
  }
  return out;
}

}  // namespace commflow
