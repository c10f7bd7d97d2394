#include "thermogeo/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "thermogeo/errors.hpp"

namespace thermogeo {

MetricFn gaussian_metrics(QuadraticModel model, MetricOptions options) {
  return [model = std::move(model), options](const ParamPoint& p) {
    return metrics_at(model, p, options);
  };
}

MetricFn classical_metrics(QuadraticModel model) {
  return [model = std::move(model)](const ParamPoint& p) {
    const MetricTensor fisher =
        metric_classical_fisher(model, p, TemperatureCoordinate::inverse_temperature);
    RealMatrix m = fisher.entries() / (p.beta * p.beta);
    m.row(0).setZero();
    m.col(0).setZero();
    MetricPair pair;
    pair.m = MetricTensor(m);
    pair.g = fisher;
    return pair;
  };
}

ObjectiveWeights step_cycle_weights(double beta_cold, double adiabatic_work) {
  require_work_extracting(adiabatic_work);
  if (!(beta_cold > 0.0)) throw ArgumentError("step_cycle_weights: beta_cold must be positive");
  return {beta_cold * beta_cold, 1.0 / (2.0 * beta_cold * std::abs(adiabatic_work))};
}

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw ArgumentError("epsilon must lie in [0, 1]");
  }
}

struct Forms {
  double fluct;
  double eff;
};

Forms quadratic_forms(const MetricPair& pair, const RealVector& v) {
  return {pair.m.quadratic_form(v), pair.g.quadratic_form(v)};
}

double combine(const ObjectiveWeights& w, double epsilon, double fluct, double eff) {
  return epsilon * w.fluctuation * fluct + (1.0 - epsilon) * w.efficiency * eff;
}

double checked_sqrt(const ObjectiveWeights& w, double epsilon, double fluct, double eff,
                    double where) {
  const double a = epsilon * w.fluctuation * fluct;
  const double b = (1.0 - epsilon) * w.efficiency * eff;
  const double q = a + b;
  if (q < -1e-12 * std::max(1.0, std::abs(a) + std::abs(b))) {
    std::ostringstream os;
    os << "speed integrand: metric quadratic form " << q << " is negative at t = "
       << where;
    throw PositivityError(os.str());
  }
  return std::sqrt(std::max(q, 0.0));
}

}  // namespace

double speed_integrand(const Geometry& geometry, double epsilon, double t) {
  check_epsilon(epsilon);
  const ParamPoint p = geometry.curve(t);
  const RealVector v = geometry.curve.velocity(t);
  const Forms f = quadratic_forms(geometry.metrics(p), v);
  return checked_sqrt(geometry.weights, epsilon, f.fluct, f.eff, t);
}

CurveSampling::CurveSampling(const Geometry& geometry, int panels, int order)
    : panels_(panels), order_(order), weights_(geometry.weights) {
  if (panels < 1 || order < 2) {
    throw ArgumentError("CurveSampling: need panels >= 1 and order >= 2");
  }
  geometry.curve.require_closed();
  const QuadratureRule rule = QuadratureRule::gauss_legendre(order);
  const std::size_t count = static_cast<std::size_t>(panels) * order;
  nodes_.resize(count);
  node_weights_.resize(count);
  fluct_.resize(count);
  eff_.resize(count);
  for (int p = 0; p < panels; ++p) {
    for (int j = 0; j < order; ++j) {
      const std::size_t i = static_cast<std::size_t>(p) * order + j;
      nodes_[i] = (p + rule.nodes[j]) / panels;
      node_weights_[i] = rule.weights[j] / panels;
      const ParamPoint point = geometry.curve(nodes_[i]);
      const MetricPair pair = geometry.metrics(point);
      const Forms f = quadratic_forms(pair, geometry.curve.velocity(nodes_[i]));
      fluct_[i] = f.fluct;
      eff_[i] = f.eff;
      max_asymmetry_ = std::max(max_asymmetry_, pair.diagnostics.g_asymmetry);
    }
  }
}

std::vector<double> CurveSampling::combined_form(double epsilon) const {
  check_epsilon(epsilon);
  std::vector<double> q(nodes_.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    q[i] = combine(weights_, epsilon, fluct_[i], eff_[i]);
    if (q[i] < -1e-12 * std::max(1.0, std::abs(fluct_[i]) + std::abs(eff_[i]))) {
      std::ostringstream os;
      os << "CurveSampling: metric quadratic form " << q[i] << " is negative at u = "
         << nodes_[i];
      throw PositivityError(os.str());
    }
  }
  return q;
}

// Arc length u ↦ ∫₀^u √Q(s) ds with Q the panelwise polynomial through the
// sampled node values. Q is smooth, its square root may have kinks at zero
// speed, so the root is integrated adaptively.
class ArcLength {
 public:
  ArcLength(const CurveSampling& sampling, double epsilon)
      : panels_(sampling.panels()),
        order_(sampling.order()),
        values_(sampling.combined_form(epsilon)),
        fluctuation_(sampling.fluctuation_form()),
        efficiency_(sampling.efficiency_form()),
        rule_(QuadratureRule::gauss_legendre(sampling.order())) {
    bary_.resize(order_);
    for (int j = 0; j < order_; ++j) {
      double prod = 1.0;
      for (int k = 0; k < order_; ++k) {
        if (k != j) prod *= rule_.nodes[j] - rule_.nodes[k];
      }
      bary_[j] = 1.0 / prod;
    }
    double estimate = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      estimate += sampling.node_weights()[i] * std::sqrt(std::max(values_[i], 0.0));
    }
    tolerance_ = 1e-13 * std::max(estimate, std::numeric_limits<double>::min());
    for (int p = 0; p < panels_; ++p) {
      const double a = static_cast<double>(p) / panels_;
      const double b = static_cast<double>(p + 1) / panels_;
      subdivide(a, b, segment(a, b), 0);
    }
    cumulative_.resize(leaf_a_.size() + 1);
    cumulative_[0] = 0.0;
    for (std::size_t i = 0; i < leaf_a_.size(); ++i) {
      cumulative_[i + 1] = cumulative_[i] + leaf_value_[i];
    }

    // Refinement bottoms out at zero-speed points, so a leaf edge sits next
    // to each of them.
    const double q_floor = 1e-10 * largest(values_);
    const double fluct_floor = 1e-7 * largest(fluctuation_);
    const double eff_floor = 1e-7 * largest(efficiency_);
    for (std::size_t i = 0; i <= leaf_a_.size(); ++i) {
      const double u = i < leaf_a_.size() ? leaf_a_[i] : 1.0;
      if (q(u) > q_floor) continue;
      divergent_variance_ = divergent_variance_ || interpolate(fluctuation_, u) > fluct_floor;
      divergent_deficit_ = divergent_deficit_ || interpolate(efficiency_, u) > eff_floor;
    }
  }

  double total() const { return cumulative_.back(); }

  double q(double u) const { return interpolate(values_, u); }

  /// True when the speed vanishes where the fluctuation (efficiency) form
  /// does not, so ∫ m(Λ̇, Λ̇) φ̇² dt (∫ g(Λ̇, Λ̇) φ̇² dt) diverges.
  bool divergent_variance() const { return divergent_variance_; }
  bool divergent_deficit() const { return divergent_deficit_; }

  std::size_t leaf_count() const { return leaf_a_.size(); }
  double leaf_begin(std::size_t i) const { return leaf_a_[i]; }
  double leaf_end(std::size_t i) const { return leaf_b_[i]; }

  double speed(double u) const { return std::sqrt(std::max(q(u), 0.0)); }

  /// Leftmost u with ∫₀^u √Q = target.
  double inverse(double target) const {
    if (target <= 0.0) return 0.0;
    if (target >= total()) return 1.0;
    const auto it = std::lower_bound(cumulative_.begin() + 1, cumulative_.end(), target);
    const std::size_t leaf = static_cast<std::size_t>(it - cumulative_.begin()) - 1;
    const double a = leaf_a_[leaf];
    const double remainder = target - cumulative_[leaf];
    double lo = a;
    double hi = leaf_b_[leaf];
    for (int iter = 0; iter < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi;
         ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (segment(a, mid) >= remainder) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return 0.5 * (lo + hi);
  }

 private:
  double segment(double a, double b) const {
    double sum = 0.0;
    for (int j = 0; j < order_; ++j) {
      sum += rule_.weights[j] * speed(a + (b - a) * rule_.nodes[j]);
    }
    return sum * (b - a);
  }

  double interpolate(const std::vector<double>& values, double u) const {
    u = std::clamp(u, 0.0, 1.0);
    const int p = std::min(static_cast<int>(u * panels_), panels_ - 1);
    const double x = u * panels_ - p;
    const double* y = values.data() + static_cast<std::size_t>(p) * order_;
    double num = 0.0;
    double den = 0.0;
    for (int j = 0; j < order_; ++j) {
      const double d = x - rule_.nodes[j];
      if (d == 0.0) return y[j];
      const double c = bary_[j] / d;
      num += c * y[j];
      den += c;
    }
    return num / den;
  }

  static double largest(const std::vector<double>& values) {
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    return scale;
  }

  void subdivide(double a, double b, double whole, int depth) {
    const double m = 0.5 * (a + b);
    const double left = segment(a, m);
    const double right = segment(m, b);
    const double change = std::abs(left + right - whole);
    // Near a double root Q sits at roundoff level and √Q is noise; the width
    // floor stops refinement there.
    if (depth >= 50 || b - a <= 1e-13 || change <= tolerance_ * (b - a) ||
        change <= 1e-14 * (std::abs(left) + std::abs(right))) {
      leaf_a_.push_back(a);
      leaf_b_.push_back(m);
      leaf_value_.push_back(left);
      leaf_a_.push_back(m);
      leaf_b_.push_back(b);
      leaf_value_.push_back(right);
      return;
    }
    subdivide(a, m, left, depth + 1);
    subdivide(m, b, right, depth + 1);
  }

  int panels_;
  int order_;
  std::vector<double> values_;
  std::vector<double> fluctuation_;
  std::vector<double> efficiency_;
  QuadratureRule rule_;
  std::vector<double> bary_;
  double tolerance_ = 0.0;
  std::vector<double> leaf_a_;
  std::vector<double> leaf_b_;
  std::vector<double> leaf_value_;
  std::vector<double> cumulative_;
  bool divergent_variance_ = false;
  bool divergent_deficit_ = false;
};

namespace {

std::vector<double> uniform_grid(int grid) {
  if (grid < 2) throw ArgumentError("Schedule: grid needs at least two points");
  std::vector<double> t(grid);
  for (int k = 0; k < grid; ++k) t[k] = static_cast<double>(k) / (grid - 1);
  t.back() = 1.0;
  return t;
}

}  // namespace

Schedule Schedule::identity(int grid) {
  return from_functions([](double t) { return t; }, [](double) { return 1.0; }, grid);
}

Schedule Schedule::from_functions(Map phi, Map phi_dot, int grid, double epsilon,
                                  double length) {
  if (!phi || !phi_dot) throw ArgumentError("Schedule: missing map");
  Schedule s;
  s.phi_ = std::move(phi);
  s.phi_dot_ = std::move(phi_dot);
  s.epsilon_ = epsilon;
  s.length_ = length;
  s.t_ = uniform_grid(grid);
  s.phi_grid_.resize(grid);
  s.phi_dot_grid_.resize(grid);
  for (int k = 0; k < grid; ++k) {
    s.phi_grid_[k] = s.phi_(s.t_[k]);
    s.phi_dot_grid_[k] = s.phi_dot_(s.t_[k]);
  }
  if (std::abs(s.phi_grid_.front()) > 1e-12 || std::abs(s.phi_grid_.back() - 1.0) > 1e-12) {
    throw RangeError("Schedule: endpoint conditions phi(0) = 0, phi(1) = 1 violated");
  }
  s.phi_grid_.front() = 0.0;
  s.phi_grid_.back() = 1.0;
  for (int k = 1; k < grid; ++k) {
    if (s.phi_grid_[k] < s.phi_grid_[k - 1]) {
      std::ostringstream os;
      os << "Schedule: phi decreases at t = " << s.t_[k];
      throw MonotonicityError(os.str());
    }
  }
  s.interpolant_ = MonotoneCubic(s.t_, s.phi_grid_);
  return s;
}

double Schedule::phi(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return phi_(t);
}

double Schedule::phi_dot(double t) const { return phi_dot_(std::clamp(t, 0.0, 1.0)); }

ControlCurve Schedule::apply(const ControlCurve& curve) const {
  const Schedule self = *this;
  return curve.reparameterized([self](double t) { return self.phi(t); },
                               [self](double t) { return self.phi_dot(t); });
}

double thermodynamic_length(const CurveSampling& sampling, double epsilon) {
  return ArcLength(sampling, epsilon).total();
}

double thermodynamic_length(const Geometry& geometry, double epsilon, int panels) {
  return thermodynamic_length(CurveSampling(geometry, panels), epsilon);
}

Schedule optimal_schedule(const CurveSampling& sampling, double epsilon, int grid) {
  if (grid < 1001) throw ArgumentError("optimal_schedule: grid must be >= 1001");
  auto arc = std::make_shared<const ArcLength>(sampling, epsilon);
  const double length = arc->total();
  if (!(length > 0.0)) {
    throw DegenerateCycleError(
        "optimal_schedule: thermodynamic length is zero, the cycle is degenerate");
  }
  Schedule s = Schedule::from_functions(
      [arc, length](double t) { return arc->inverse(t * length); },
      [arc, length](double t) {
        const double speed = arc->speed(arc->inverse(t * length));
        return speed > 0.0 ? length / speed : std::numeric_limits<double>::infinity();
      },
      grid, epsilon, length);
  s.arc_ = std::move(arc);
  return s;
}

Schedule random_schedule(std::uint64_t seed, int harmonics, int grid) {
  if (harmonics < 1) throw ArgumentError("random_schedule: need at least one harmonic");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> amp(harmonics);
  std::vector<double> phase(harmonics);
  double total = 0.0;
  for (int k = 0; k < harmonics; ++k) {
    amp[k] = unit(rng);
    phase[k] = M_PI * unit(rng);
    total += std::abs(amp[k]);
  }
  const double budget = 0.9 * std::abs(unit(rng));
  for (double& a : amp) a *= budget / total;
  auto phi = [amp, phase](double t) {
    double v = t;
    for (std::size_t k = 0; k < amp.size(); ++k) {
      const double f = 2.0 * M_PI * (k + 1);
      v += amp[k] * (std::sin(f * t + phase[k]) - std::sin(phase[k])) / f;
    }
    return v;
  };
  auto phi_dot = [amp, phase](double t) {
    double v = 1.0;
    for (std::size_t k = 0; k < amp.size(); ++k) {
      v += amp[k] * std::cos(2.0 * M_PI * (k + 1) * t + phase[k]);
    }
    return v;
  };
  return Schedule::from_functions(phi, phi_dot, grid);
}

SlowDrivingReport slow_driving_check(const Schedule& schedule, int steps) {
  if (steps < 1) throw ArgumentError("slow_driving_check: steps must be positive");
  SlowDrivingReport report;
  for (double d : schedule.grid_phi_dot()) {
    const double r = std::pow(std::abs(d) / steps, 2);
    report.max_ratio = std::max(report.max_ratio, r);
  }
  report.pass = report.max_ratio < 0.01;
  return report;
}

struct Integrals {
  double fluct = 0.0;
  double eff = 0.0;
};

namespace {

// ∫ form(Λ̇∘φ) φ̇² dt at Gauss-Legendre nodes in t.
Integrals integrate_in_time(const Geometry& geometry, const Schedule& schedule,
                            const ObjectiveOptions& options) {
  const QuadratureRule rule = QuadratureRule::gauss_legendre(options.order);
  Integrals out;
  for (int p = 0; p < options.panels; ++p) {
    for (std::size_t j = 0; j < rule.size(); ++j) {
      const double t = (p + rule.nodes[j]) / options.panels;
      const double w = rule.weights[j] / options.panels;
      const double u = schedule.phi(t);
      const double rate = schedule.phi_dot(t);
      if (!std::isfinite(rate)) {
        throw NumericError("objective: schedule derivative is not finite", t);
      }
      const RealVector v = geometry.curve.velocity(u) * rate;
      const Forms f = quadratic_forms(geometry.metrics(geometry.curve(u)), v);
      out.fluct += w * f.fluct;
      out.eff += w * f.eff;
    }
  }
  return out;
}

}  // namespace

// For an optimal schedule φ̇ = L/s(φ) blows up at zero-speed points; with
// u = φ(t) the integrals become L ∫ form(Λ̇(u))/s(u) du, which stay bounded
// unless the arc length flags a divergence. The quadrature follows the
// adaptive leaves of the arc length, which cluster at the kinks.
Integrals Schedule::integrate_in_arc(const Geometry& geometry, int order) const {
  const QuadratureRule rule = QuadratureRule::gauss_legendre(order);
  const double eps = epsilon_;
  Integrals out;
  for (std::size_t i = 0; i < arc_->leaf_count(); ++i) {
    const double a = arc_->leaf_begin(i);
    const double b = arc_->leaf_end(i);
    for (std::size_t j = 0; j < rule.size(); ++j) {
      const double u = a + (b - a) * rule.nodes[j];
      const Forms f =
          quadratic_forms(geometry.metrics(geometry.curve(u)), geometry.curve.velocity(u));
      const double speed = checked_sqrt(geometry.weights, eps, f.fluct, f.eff, u);
      if (speed == 0.0) continue;
      const double w = rule.weights[j] * (b - a) * length_ / speed;
      out.fluct += w * f.fluct;
      out.eff += w * f.eff;
    }
  }
  const double inf = std::numeric_limits<double>::infinity();
  if (arc_->divergent_variance()) out.fluct = inf;
  if (arc_->divergent_deficit()) out.eff = inf;
  return out;
}

ObjectiveReport scaled_objective_value(const Geometry& geometry, const Schedule& schedule,
                                       double divisor, double epsilon,
                                       const ObjectiveOptions& options) {
  check_epsilon(epsilon);
  if (!(divisor > 0.0)) throw ArgumentError("objective: divisor must be positive");
  if (!(geometry.weights.fluctuation > 0.0) || !(geometry.weights.efficiency > 0.0)) {
    throw CycleDirectionError("objective: objective weights must be positive");
  }
  const Integrals in = schedule.arc_ ? schedule.integrate_in_arc(geometry, options.order)
                                     : integrate_in_time(geometry, schedule, options);
  ObjectiveReport report;
  report.epsilon = epsilon;
  report.variance = geometry.weights.fluctuation * in.fluct / divisor;
  report.deficit = geometry.weights.efficiency * in.eff / divisor;
  // A divergent term with zero weight drops out.
  report.objective = (epsilon > 0.0 ? epsilon * report.variance : 0.0) +
                     (epsilon < 1.0 ? (1.0 - epsilon) * report.deficit : 0.0);
  return report;
}

ObjectiveReport objective_value(const Geometry& geometry, const Schedule& schedule,
                                int steps, double epsilon,
                                const ObjectiveOptions& options) {
  if (steps < 2) throw ArgumentError("objective_value: need N >= 2");
  ObjectiveReport report = scaled_objective_value(geometry, schedule, steps, epsilon, options);
  report.steps = steps;
  const SlowDrivingReport slow = slow_driving_check(schedule, steps);
  report.slow_driving = slow.pass;
  report.slow_driving_ratio = slow.max_ratio;
  if (options.enforce_slow_driving && !slow.pass) {
    throw ConvergenceError("objective_value: slow-driving condition violated",
                           slow.max_ratio);
  }
  return report;
}

double constant_speed_variation(const Geometry& geometry, const Schedule& schedule) {
  if (schedule.epsilon() < 0.0) {
    throw ArgumentError("constant_speed_variation: schedule is not an optimum");
  }
  const auto& t = schedule.grid_t();
  std::vector<double> values;
  values.reserve(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double rate = schedule.grid_phi_dot()[k];
    if (!std::isfinite(rate)) continue;  // grid point exactly on a zero-speed point
    values.push_back(speed_integrand(geometry, schedule.epsilon(), schedule.grid_phi()[k]) *
                     rate);
  }
  if (values.empty()) throw NumericError("constant_speed_variation: no finite samples");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= values.size();
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= values.size();
  return std::sqrt(var) / mean;
}

std::vector<double> uniform_epsilon_grid(int count) {
  if (count < 2) throw ArgumentError("uniform_epsilon_grid: need at least two points");
  std::vector<double> grid(count);
  for (int k = 0; k < count; ++k) grid[k] = static_cast<double>(k) / (count - 1);
  grid.back() = 1.0;
  return grid;
}

std::vector<ParetoPoint> pareto_sweep(const Geometry& geometry,
                                      const CurveSampling& sampling,
                                      const std::vector<double>& epsilons, int steps,
                                      int threads, const ObjectiveOptions& options) {
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    check_epsilon(epsilons[i]);
    if (i > 0 && epsilons[i] < epsilons[i - 1]) {
      throw ArgumentError("pareto_sweep: epsilon grid must be sorted");
    }
  }
  std::vector<ParetoPoint> out(epsilons.size());
  std::vector<std::exception_ptr> errors(epsilons.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next++; i < epsilons.size(); i = next++) {
      try {
        const double eps = epsilons[i];
        const Schedule s = optimal_schedule(sampling, eps);
        const ObjectiveReport r = objective_value(geometry, s, steps, eps, options);
        out[i] = {eps, r.deficit, std::sqrt(r.variance), s.length(), r.objective,
                  r.slow_driving_ratio};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::clamp<int>(threads, 1, std::max<int>(1, epsilons.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace thermogeo
