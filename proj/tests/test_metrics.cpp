#include <doctest.h>

#include <cmath>

#include "thermogeo/errors.hpp"
#include "thermogeo/fock.hpp"
#include "thermogeo/metrics.hpp"
#include "thermogeo/models.hpp"

using namespace thermogeo;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Periodic trapezoid on [0, 1]; spectrally accurate for smooth closed curves.
template <typename Fn>
double periodic_trapezoid(Fn&& f, int n = 4000) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += f(static_cast<double>(i) / n);
  return s / n;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("m and g are symmetric PSD on the coupled model") {
    const QuadraticModel model = coupled_oscillators();
    for (double b : {0.8, 2.0, 4.0}) {
      for (double w : {1.0, 1.7}) {
        const MetricPair p = metrics_at(model, {b, {w, 0.5}});
        CHECK(is_symmetric(p.m.entries()));
        CHECK(is_symmetric(p.g.entries()));
        CHECK(p.m.is_psd());
        CHECK(p.g.is_psd());
        CHECK(p.m(0, 0) == 0.0);
        CHECK(p.m(0, 1) == 0.0);
        CHECK(p.diagnostics.g_asymmetry < 1e-10);
      }
    }
  }

  TEST_CASE("g in the beta direction is the energy variance") {
    const double w = 1.3;
    const double b = 0.9;
    const MetricTensor g = metric_g(single_ho(), {b, {w}});
    CHECK(g(0, 0) == doctest::Approx(w * w / (4.0 * std::pow(std::sinh(0.5 * b * w), 2)))
                         .epsilon(1e-12));
  }

  TEST_CASE("closed-form and quadrature bar_X agree") {
    const QuadraticModel model = coupled_oscillators();
    const ParamPoint p{1.7, {1.2, 0.35}};
    const ThermalGaussianState st = thermal_covariance(model, p);
    const ForceSet forces = conjugate_forces(model, p);
    for (std::size_t j = 0; j < forces.size(); ++j) {
      const ComplexMatrix a = bar_X(st, forces[j], BarMethod::closed_form);
      const ComplexMatrix b = bar_X(st, forces[j], BarMethod::quadrature);
      CHECK(max_abs(a - b) / max_abs(a) < 1e-8);
    }
  }

  TEST_CASE("Gaussian and Fock metrics agree for a single oscillator") {
    const FockModel fock(single_ho(), 80);
    const ParamPoint p{1.0, {1.5}};
    const MetricPair gauss = metrics_at(single_ho(), p);
    const MetricTensor mf = metric_m_fock(fock, p);
    const MetricTensor gf = metric_g_fock(fock, p);
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        CHECK(std::abs(mf(j, k) - gauss.m(j, k)) <= 1e-8 * std::abs(gauss.m(1, 1)));
        CHECK(std::abs(gf(j, k) - gauss.g(j, k)) <= 1e-8 * std::abs(gauss.g(1, 1)));
      }
    }
  }

  TEST_CASE("classical Fisher metric in temperature coordinates") {
    const double t = 0.7;
    const double w = 1.9;
    const MetricTensor f = metric_classical_fisher(classical_ho(), {1.0 / t, {w}},
                                                   TemperatureCoordinate::temperature);
    CHECK(f(0, 0) == doctest::Approx(1.0 / (t * t)).epsilon(1e-12));
    CHECK(f(0, 1) == doctest::Approx(-1.0 / (w * t)).epsilon(1e-12));
    CHECK(f(1, 1) == doctest::Approx(2.0 / (w * w)).epsilon(1e-12));
    // β coordinates: dT = −T² dβ.
    const MetricTensor fb = metric_classical_fisher(classical_ho(), {1.0 / t, {w}});
    CHECK(fb(0, 0) == doctest::Approx(t * t).epsilon(1e-12));
    CHECK(fb(0, 1) == doctest::Approx(t / w).epsilon(1e-12));
  }

  TEST_CASE("combined metric endpoints") {
    const QuadraticModel model = coupled_oscillators();
    const ParamPoint p{2.0, {1.1, 0.4}};
    const MetricPair pair = metrics_at(model, p);
    const double bc = 4.0;
    const double work = -0.5;
    const MetricTensor m1 = combined_metric(pair.m, pair.g, 1.0, bc, work);
    const MetricTensor m0 = combined_metric(pair.m, pair.g, 0.0, bc, work);
    CHECK(max_abs(m1.entries() - bc * bc * pair.m.entries()) < 1e-14);
    CHECK(max_abs(m0.entries() - pair.g.entries() / (2.0 * bc * 0.5)) < 1e-14);
    CHECK_THROWS_AS(combined_metric(pair.m, pair.g, 1.5, bc, work), ArgumentError);
    CHECK_THROWS_AS(require_work_extracting(0.1), CycleDirectionError);
  }

  TEST_CASE("adiabatic work of the coupled cycle matches the normal-mode line integral") {
    const ProtocolSpec spec = preset_protocol(fig1_preset());
    // <dH/dν_k> = ½coth(βν_k/2) for each normal mode ν₁ = √(ω²+2κ), ν₂ = ω.
    const double oracle = periodic_trapezoid([&](double t) {
      const ParamPoint p = spec.curve(t);
      const RealVector v = spec.curve.velocity(t);
      const double w = p.lambda[0];
      const double k = p.lambda[1];
      const double n1 = std::sqrt(w * w + 2.0 * k);
      const double dn1 = (w * v(1) + v(2)) / n1;
      return 0.5 / std::tanh(0.5 * p.beta * n1) * dn1 + 0.5 / std::tanh(0.5 * p.beta * w) * v(1);
    });
    const double work = adiabatic_work(coupled_oscillators(), spec.curve);
    CHECK(rel(work, oracle) < 1e-10);
    CHECK(work == doctest::Approx(-0.4587107955730427).epsilon(1e-10));
  }

  TEST_CASE("classical adiabatic work is the loop integral of T/ω") {
    const ProtocolSpec spec = preset_protocol(classical_preset(0.5));
    const double oracle = periodic_trapezoid([&](double t) {
      const ParamPoint p = spec.curve(t);
      return p.lambda[0] > 0 ? spec.curve.velocity(t)(1) / (p.beta * p.lambda[0]) : 0.0;
    });
    const double work = adiabatic_work(classical_ho(), spec.curve, 200, Regime::classical);
    CHECK(rel(work, oracle) < 1e-10);
    CHECK(work < 0.0);
  }

  TEST_CASE("adiabatic work does not depend on the parameterization") {
    const ProtocolSpec spec = preset_protocol(fig1_preset());
    const ControlCurve re = spec.curve.reparameterized(
        [](double t) { return t + 0.1 * std::sin(2 * M_PI * t) / (2 * M_PI); },
        [](double t) { return 1.0 + 0.1 * std::cos(2 * M_PI * t); });
    const double a = adiabatic_work(coupled_oscillators(), spec.curve);
    const double b = adiabatic_work(coupled_oscillators(), re);
    CHECK(rel(a, b) < 1e-10);
  }

  TEST_CASE("scaling model satisfies the commuting reduction") {
    RealMatrix base = RealMatrix::Zero(4, 4);
    base.diagonal() << 1.0, 1.0, 2.5, 1.0;
    base(0, 2) = base(2, 0) = -0.3;
    for (double b : {0.5, 1.0, 3.0}) {
      const MetricPair p = metrics_at(scaling_model(base), {b, {1.4}});
      CHECK(rel(p.g(1, 1), b * b * p.m(1, 1)) < 1e-9);
    }
  }
}
