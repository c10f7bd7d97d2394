#include <doctest.h>

#include <cmath>

#include "thermogeo/errors.hpp"
#include "thermogeo/models.hpp"
#include "thermogeo/protocol.hpp"

using namespace thermogeo;

namespace {

constexpr double kStretch = 0.5;

double stretch(double t) { return t + kStretch * std::sin(2 * M_PI * t) / (2 * M_PI); }
double stretch_dot(double t) { return 1.0 + kStretch * std::cos(2 * M_PI * t); }

// Circle of radius r in (λ¹, λ²) at fixed β, traversed at nonuniform speed,
// under the Euclidean metric.
Geometry euclidean_circle(double r) {
  ControlCurve curve(
      [r](double t) {
        const double a = 2 * M_PI * stretch(t);
        return ParamPoint{1.0, {r * std::cos(a), r * std::sin(a)}};
      },
      [r](double t) {
        const double a = 2 * M_PI * stretch(t);
        const double da = 2 * M_PI * stretch_dot(t);
        RealVector v(3);
        v << 0.0, -r * std::sin(a) * da, r * std::cos(a) * da;
        return v;
      });
  MetricFn metrics = [](const ParamPoint&) {
    const MetricTensor id(RealMatrix::Identity(3, 3));
    return MetricPair{id, id, {}};
  };
  return {curve, metrics, {1.0, 1.0}};
}

Geometry fig1_geometry() {
  const Preset preset = fig1_preset();
  const ProtocolSpec spec = preset_protocol(preset);
  const QuadraticModel model = preset_model(preset);
  const double work = adiabatic_work(model, spec.curve);
  return {spec.curve, gaussian_metrics(model), step_cycle_weights(spec.beta_cold, work)};
}

}  // namespace

TEST_SUITE("protocol") {
  TEST_CASE("length of a Euclidean circle") {
    const Geometry geo = euclidean_circle(0.7);
    for (double eps : {0.0, 0.3, 1.0}) {
      CHECK(thermodynamic_length(geo, eps) == doctest::Approx(2 * M_PI * 0.7).epsilon(1e-9));
    }
  }

  TEST_CASE("optimal schedule undoes a nonuniform parameterization") {
    const Geometry geo = euclidean_circle(1.0);
    const CurveSampling cs(geo);
    const Schedule s = optimal_schedule(cs, 0.5);
    double worst = 0.0;
    for (std::size_t i = 0; i < s.grid_t().size(); ++i) {
      worst = std::max(worst, std::abs(stretch(s.grid_phi()[i]) - s.grid_t()[i]));
    }
    CHECK(worst < 1e-8);
    CHECK(s.phi(0.0) == doctest::Approx(0.0));
    CHECK(s.phi(1.0) == doctest::Approx(1.0));
  }

  TEST_CASE("constant-speed curve keeps the identity schedule") {
    Geometry geo = euclidean_circle(1.0);
    geo.curve = ControlCurve([](double t) {
      return ParamPoint{1.0, {std::cos(2 * M_PI * t), std::sin(2 * M_PI * t)}};
    });
    const Schedule s = optimal_schedule(CurveSampling(geo), 0.2);
    for (double t : {0.1, 0.37, 0.5, 0.93}) CHECK(s.phi(t) == doctest::Approx(t).epsilon(1e-7));
  }

  TEST_CASE("optimal schedules saturate the length bound and beat random ones") {
    const Geometry geo = fig1_geometry();
    const CurveSampling cs(geo);
    const int n = 50;
    for (double eps : {0.0, 0.5, 0.75}) {
      const double len = thermodynamic_length(cs, eps);
      const Schedule opt = optimal_schedule(cs, eps);
      const double best = objective_value(geo, opt, n, eps).objective;
      CHECK(best == doctest::Approx(len * len / n).epsilon(1e-6));
      CHECK(constant_speed_variation(geo, opt) < 1e-3);
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        CHECK(objective_value(geo, random_schedule(seed), n, eps).objective >= best);
      }
    }
  }

  TEST_CASE("pure fluctuation schedule diverges in the deficit") {
    const Geometry geo = fig1_geometry();
    const CurveSampling cs(geo);
    const ObjectiveReport r = objective_value(geo, optimal_schedule(cs, 1.0), 50, 1.0);
    CHECK(std::isinf(r.deficit));
    CHECK(std::isfinite(r.variance));
    CHECK(r.objective == doctest::Approx(r.variance));
  }

  TEST_CASE("front slope follows the scalarization weight") {
    const Geometry geo = fig1_geometry();
    const CurveSampling cs(geo);
    for (double eps : {0.3, 0.5, 0.7}) {
      const double h = 0.005;
      const auto pts = pareto_sweep(geo, cs, {eps - h, eps + h}, 50);
      const double dv = pts[1].fluctuation * pts[1].fluctuation -
                        pts[0].fluctuation * pts[0].fluctuation;
      const double dd = pts[1].deficit - pts[0].deficit;
      CHECK(dv / dd == doctest::Approx(-(1 - eps) / eps).epsilon(1e-3));
    }
  }

  TEST_CASE("pareto_sweep does not depend on the thread count") {
    const Geometry geo = fig1_geometry();
    const CurveSampling cs(geo);
    const auto grid = uniform_epsilon_grid(9);
    const auto a = pareto_sweep(geo, cs, grid, 50, 1);
    const auto b = pareto_sweep(geo, cs, grid, 50, 3);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].deficit == b[i].deficit);
      CHECK(a[i].fluctuation == b[i].fluctuation);
      CHECK(a[i].objective == b[i].objective);
    }
  }

  TEST_CASE("slow-driving check") {
    const Schedule id = Schedule::identity();
    CHECK(slow_driving_check(id, 50).pass);
    CHECK(slow_driving_check(id, 50).max_ratio == doctest::Approx(1.0 / 2500));
    CHECK_FALSE(slow_driving_check(id, 5).pass);
  }

  TEST_CASE("random schedules are monotone and pinned") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const Schedule s = random_schedule(seed);
      CHECK(s.phi(0.0) == doctest::Approx(0.0));
      CHECK(s.phi(1.0) == doctest::Approx(1.0));
      for (double d : s.grid_phi_dot()) CHECK(d > 0.0);
    }
  }

  TEST_CASE("schedule preconditions") {
    CHECK_THROWS_AS(Schedule::from_functions([](double t) { return 0.9 * t; },
                                             [](double) { return 0.9; }),
                    RangeError);
    CHECK_THROWS_AS(Schedule::from_functions(
                        [](double t) { return t + 0.3 * std::sin(2 * M_PI * t); },
                        [](double t) { return 1.0 + 0.6 * M_PI * std::cos(2 * M_PI * t); }),
                    MonotonicityError);
    Geometry geo = fig1_geometry();
    geo.curve = ControlCurve([](double) { return ParamPoint{2.0, {1.0, 0.4}}; });
    CHECK_THROWS_AS(optimal_schedule(CurveSampling(geo), 0.5), DegenerateCycleError);
    CHECK_THROWS_AS(speed_integrand(fig1_geometry(), 1.2, 0.1), ArgumentError);
    CHECK_THROWS_AS(step_cycle_weights(4.0, 0.3), CycleDirectionError);
  }

  TEST_CASE("uniform epsilon grid") {
    const auto g = uniform_epsilon_grid(5);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 1.0);
    CHECK(g[2] == doctest::Approx(0.5));
  }
}

TEST_SUITE("curve") {
  TEST_CASE("finite-difference velocity of a closed curve") {
    const ControlCurve c([](double t) {
      return ParamPoint{1.0 + 0.5 * std::sin(2 * M_PI * t), {std::cos(2 * M_PI * t)}};
    });
    CHECK_FALSE(c.has_analytic_velocity());
    for (double t : {0.0, 0.3, 1.0}) {
      const RealVector v = c.velocity(t);
      CHECK(v(0) == doctest::Approx(M_PI * std::cos(2 * M_PI * t)).epsilon(1e-8));
      CHECK(v(1) == doctest::Approx(-2 * M_PI * std::sin(2 * M_PI * t)).epsilon(1e-8));
    }
    CHECK(c.closure_gap() < 1e-12);
  }

  TEST_CASE("open curves are rejected") {
    const ControlCurve c([](double t) { return ParamPoint{1.0 + t, {1.0}}; });
    CHECK_THROWS_AS(c.require_closed(), TopologyError);
  }

  TEST_CASE("shifted curve traces the same path") {
    const ProtocolSpec spec = preset_protocol(fig1_preset());
    const ControlCurve s = spec.curve.shifted(0.25);
    CHECK(s(0.0).beta == doctest::Approx(spec.curve(0.25).beta));
    CHECK(s(0.8).lambda[0] == doctest::Approx(spec.curve(0.05).lambda[0]));
  }
}
