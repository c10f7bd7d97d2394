#include "thermogeo/curve.hpp"

#include <cmath>
#include <sstream>

#include "thermogeo/errors.hpp"

namespace thermogeo {

namespace {

double wrap_unit(double t) {
  if (t >= 0.0 && t <= 1.0) return t;
  return t - std::floor(t);
}

}  // namespace

ControlCurve::ControlCurve(PointFn point, VelocityFn velocity)
    : point_(std::move(point)), velocity_(std::move(velocity)) {
  if (!point_) throw ArgumentError("ControlCurve: missing point map");
}

ParamPoint ControlCurve::operator()(double t) const { return point_(wrap_unit(t)); }

RealVector ControlCurve::velocity(double t) const {
  if (velocity_) return velocity_(wrap_unit(t));
  const double h = kDifferenceStep;
  return ((*this)(t + h).to_vector() - (*this)(t - h).to_vector()) / (2.0 * h);
}

std::size_t ControlCurve::size() const { return point_(0.0).size(); }

double ControlCurve::closure_gap() const {
  return max_abs(point_(0.0).to_vector() - point_(1.0).to_vector());
}

void ControlCurve::require_closed(double tol) const {
  const double gap = closure_gap();
  if (gap > tol) {
    std::ostringstream os;
    os << "control curve is not closed: |Λ(0) - Λ(1)| = " << gap;
    throw TopologyError(os.str());
  }
}

ControlCurve ControlCurve::reparameterized(std::function<double(double)> phi,
                                           std::function<double(double)> phi_dot) const {
  const ControlCurve base = *this;
  return ControlCurve(
      [base, phi](double t) { return base.point_(phi(t)); },
      [base, phi, phi_dot](double t) {
        return RealVector(base.velocity(phi(t)) * phi_dot(t));
      });
}

ControlCurve ControlCurve::shifted(double offset) const {
  const ControlCurve base = *this;
  return ControlCurve([base, offset](double t) { return base(t + offset); },
                      [base, offset](double t) { return base.velocity(t + offset); });
}

}  // namespace thermogeo
