#pragma once

#include <cstddef>
#include <vector>

#include "thermogeo/numerics.hpp"

namespace thermogeo {

/// A point of control space: inverse temperature plus mechanical parameters.
/// Component 0 is beta, component j >= 1 is lambda^j.
struct ParamPoint {
  double beta = 1.0;
  std::vector<double> lambda;

  std::size_t size() const { return lambda.size() + 1; }
  double operator[](std::size_t i) const { return i == 0 ? beta : lambda[i - 1]; }
  double& operator[](std::size_t i) { return i == 0 ? beta : lambda[i - 1]; }

  RealVector to_vector() const {
    RealVector v(static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < size(); ++i) v(static_cast<Eigen::Index>(i)) = (*this)[i];
    return v;
  }
  static ParamPoint from_vector(const RealVector& v) {
    ParamPoint p;
    p.beta = v(0);
    p.lambda.assign(v.data() + 1, v.data() + v.size());
    return p;
  }
};

}  // namespace thermogeo
