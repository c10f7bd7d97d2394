#include <doctest.h>

#include <cmath>

#include "thermogeo/errors.hpp"
#include "thermogeo/gaussian.hpp"
#include "thermogeo/models.hpp"

using namespace thermogeo;

namespace {

RealMatrix ho_g(double w) {
  RealMatrix g = RealMatrix::Zero(2, 2);
  g(0, 0) = w * w;
  g(1, 1) = 1.0;
  return g;
}

}  // namespace

TEST_SUITE("gaussian") {
  TEST_CASE("symplectic form layout") {
    const RealMatrix o = symplectic_form(2);
    CHECK(o(0, 1) == 1.0);
    CHECK(o(1, 0) == -1.0);
    CHECK(o(2, 3) == 1.0);
    CHECK(o(0, 2) == 0.0);
    CHECK(max_abs(o * o + RealMatrix::Identity(4, 4)) == 0.0);
  }

  TEST_CASE("Williamson of a single oscillator") {
    const Williamson w = williamson(ho_g(1.7));
    CHECK(w.frequencies(0) == doctest::Approx(1.7).epsilon(1e-14));
    const RealMatrix& s = w.symplectic;
    const RealMatrix o = symplectic_form(1);
    CHECK(max_abs(s.transpose() * o * s - o) < 1e-13);
    CHECK(max_abs(s.transpose() * ho_g(1.7) * s - 1.7 * RealMatrix::Identity(2, 2)) < 1e-13);
  }

  TEST_CASE("Williamson of coupled oscillators gives the normal-mode frequencies") {
    const QuadraticModel model = coupled_oscillators();
    const double w = 1.3;
    const double k = 0.4;
    const std::vector<double> lambda{w, k};
    const RealMatrix g = model.coefficients(lambda);
    const Williamson wi = williamson(g);
    // Normal modes (x1 ± x2)/√2 have frequencies √(ω² + 2κ) and ω.
    CHECK(wi.frequencies(0) == doctest::Approx(std::sqrt(w * w + 2 * k)).epsilon(1e-13));
    CHECK(wi.frequencies(1) == doctest::Approx(w).epsilon(1e-13));
    const RealMatrix o = symplectic_form(2);
    CHECK(max_abs(wi.symplectic.transpose() * o * wi.symplectic - o) < 1e-12);
  }

  TEST_CASE("thermal covariance of a single oscillator") {
    const double w = 2.0;
    const double b = 0.8;
    const ThermalGaussianState st = thermal_state(ho_g(w), b);
    const double c = 0.5 / std::tanh(0.5 * b * w);
    CHECK(st.sigma(0, 0) == doctest::Approx(c / w).epsilon(1e-14));
    CHECK(st.sigma(1, 1) == doctest::Approx(c * w).epsilon(1e-14));
    CHECK(std::abs(st.sigma(0, 1)) < 1e-15);
    CHECK(mean_energy(st) == doctest::Approx(w * c).epsilon(1e-14));
    CHECK(st.log_partition ==
          doctest::Approx(-std::log(2.0 * std::sinh(0.5 * b * w))).epsilon(1e-14));
  }

  TEST_CASE("classical covariance is T G^-1") {
    const double w = 1.5;
    const double b = 2.0;
    const ThermalGaussianState st = thermal_state(ho_g(w), b, Regime::classical);
    CHECK(st.sigma(0, 0) == doctest::Approx(1.0 / (b * w * w)));
    CHECK(st.sigma(1, 1) == doctest::Approx(1.0 / b));
    CHECK(mean_energy(st) == doctest::Approx(1.0 / b));
  }

  TEST_CASE("thermal states are physical") {
    const QuadraticModel model = coupled_oscillators();
    for (double b : {0.1, 1.0, 10.0, 60.0}) {
      const ThermalGaussianState st = thermal_covariance(model, {b, {1.0, 0.3}});
      CHECK(physicality_margin(st) > -1e-12);
    }
  }

  TEST_CASE("energy variance of an oscillator") {
    const double w = 1.2;
    const double b = 1.7;
    const ThermalGaussianState st = thermal_state(ho_g(w), b);
    const double expected = w * w / (4.0 * std::pow(std::sinh(0.5 * b * w), 2));
    CHECK(quadratic_covariance(st, ho_g(w), ho_g(w)) == doctest::Approx(expected).epsilon(1e-13));
  }

  TEST_CASE("relative entropy against a Boltzmann sum") {
    const double w = 0.9;
    const double b1 = 1.1;
    const double b2 = 2.3;
    const ThermalGaussianState s1 = thermal_state(ho_g(w), b1);
    const ThermalGaussianState s2 = thermal_state(ho_g(w), b2);
    // Same eigenbasis: S = Σ p ln(p/q) with geometric level populations.
    double sum = 0.0;
    const double z1 = 1.0 / (1.0 - std::exp(-b1 * w));
    const double z2 = 1.0 / (1.0 - std::exp(-b2 * w));
    for (int n = 0; n < 2000; ++n) {
      const double p = std::exp(-b1 * w * n) / z1;
      sum += p * ((b2 - b1) * w * n + std::log(z2 / z1));
    }
    CHECK(relative_entropy(s1, s2) == doctest::Approx(sum).epsilon(1e-12));
    CHECK(relative_entropy(s1, s1) == doctest::Approx(0.0));
  }

  TEST_CASE("relative entropy is nonnegative for random pairs") {
    const QuadraticModel model = coupled_oscillators();
    for (int i = 0; i < 20; ++i) {
      const double a = 0.3 + 0.1 * i;
      const ThermalGaussianState s1 = thermal_covariance(model, {a, {1.0 + 0.05 * i, 0.2}});
      const ThermalGaussianState s2 = thermal_covariance(model, {1.5, {1.4, 0.1 + 0.02 * i}});
      CHECK(relative_entropy(s1, s2) >= -1e-13);
    }
  }

  TEST_CASE("imaginary-time propagator is a one-parameter group") {
    const QuadraticModel model = coupled_oscillators();
    const RealMatrix g = model.coefficients(std::vector<double>{1.1, 0.3});
    const RealMatrix o = symplectic_form(2);
    const ComplexMatrix p1 = imaginary_time_propagator(g, o, 0.3);
    const ComplexMatrix p2 = imaginary_time_propagator(g, o, 0.5);
    const ComplexMatrix p3 = imaginary_time_propagator(g, o, 0.8);
    CHECK(max_abs(p1 * p2 - p3) < 1e-12);
    CHECK(max_abs(imaginary_time_propagator(g, o, 0.0) - ComplexMatrix::Identity(4, 4)) <
          1e-15);
  }

  TEST_CASE("preconditions") {
    CHECK_THROWS_AS(thermal_state(ho_g(1.0), -1.0), ArgumentError);
    const ThermalGaussianState q = thermal_state(ho_g(1.0), 1.0);
    const ThermalGaussianState c = thermal_state(ho_g(1.0), 1.0, Regime::classical);
    CHECK_THROWS_AS(relative_entropy(q, c), ArgumentError);
    CHECK_THROWS_AS(quadratic_covariance(q, RealMatrix::Identity(4, 4), ho_g(1.0)),
                    DimensionError);
  }
}
