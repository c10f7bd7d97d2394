// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number
// of failed criteria. An optional argument names the CLI binary, which is then
// also checked for byte-identical pareto output across two processes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "thermogeo/discrete.hpp"
#include "thermogeo/errors.hpp"
#include "thermogeo/fock.hpp"
#include "thermogeo/lindblad.hpp"
#include "thermogeo/models.hpp"
#include "thermogeo/protocol.hpp"

using namespace thermogeo;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [" << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double budget_seconds,
               const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail << " [exception: " << e.what() << "]";
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_seconds > 0.0 && elapsed > budget_seconds) {
    out.pass = false;
    out.detail << " [runtime " << elapsed << " s over " << budget_seconds << " s]";
  }
  if (!out.pass) ++failures;
  std::printf("%s %d %s (%.2f s)%s\n", out.pass ? "PASS" : "FAIL", id, name.c_str(), elapsed,
              out.detail.str().c_str());
  std::fflush(stdout);
}

struct Cycle {
  QuadraticModel model;
  ProtocolSpec spec;
  Regime regime;
  double work;
  Geometry geometry;
  Reservoirs reservoirs;
};

Cycle make_cycle(const Preset& preset) {
  QuadraticModel model = preset_model(preset);
  ProtocolSpec spec = preset_protocol(preset);
  const Regime regime = preset_regime(preset);
  const double work = adiabatic_work(model, spec.curve, 200, regime);
  MetricFn metrics =
      regime == Regime::classical ? classical_metrics(model) : gaussian_metrics(model);
  Geometry geometry{spec.curve, metrics, step_cycle_weights(spec.beta_cold, work)};
  Reservoirs reservoirs{spec.beta_cold, spec.beta_hot};
  return {model, spec, regime, work, geometry, reservoirs};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Oracle equivalence of the Gaussian and truncated-Fock metrics.
void fock_equivalence(Outcome& out) {
  double worst = 0.0;
  for (double w : {0.5, 1.0, 2.0, 5.0}) {
    for (double b : {0.5, 1.0, 2.0, 5.0}) {
      const ParamPoint p{b, {w}};
      const FockModel fock(single_ho(), 120);
      const MetricPair gauss = metrics_at(single_ho(), p);
      const MetricTensor mf = metric_m_fock(fock, p);
      const MetricTensor gf = metric_g_fock(fock, p);
      for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
          // Structural zeros (the β row of m) compare absolutely.
          if (gauss.m(j, k) == 0.0) {
            out.require(std::abs(mf(j, k)) < 1e-12, "m structural zero");
          } else {
            worst = std::max(worst, rel(mf(j, k), gauss.m(j, k)));
          }
          worst = std::max(worst, rel(gf(j, k), gauss.g(j, k)));
        }
      }
    }
  }
  out.detail << " max rel diff " << worst;
  out.require(worst < 1e-6, "m/g entries differ by more than 1e-6");
}

void entropy_identity(Outcome& out) {
  const Cycle c = make_cycle(fig1_preset());
  double worst = 0.0;
  for (int n : {10, 50, 200}) {
    const CycleLedger l = run_cycle(c.model, c.spec.curve, n, c.reservoirs);
    worst = std::max(worst, l.identity_residual(c.reservoirs.beta_cold));
  }
  out.detail << " max residual " << worst;
  out.require(worst < 1e-10, "identity residual");
}

void geometric_convergence(Outcome& out) {
  const Cycle c = make_cycle(fig1_preset());
  const std::vector<int> steps{50, 100, 200, 400, 800};
  const ConvergenceTable t = convergence_study(c.model, c.spec.curve, Schedule::identity(),
                                               steps, c.reservoirs, c.geometry.metrics);
  const double rv = t.rows.back().scaled_variance / t.variance_limit;
  const double rd = t.rows.back().scaled_deficit / t.deficit_limit;
  out.detail << " var exponent " << t.variance_exponent << " ratio " << rv
             << "; deficit exponent " << t.deficit_exponent << " ratio " << rd;
  out.require(std::abs(t.variance_exponent - 1.0) <= 0.3, "variance exponent");
  out.require(std::abs(t.deficit_exponent - 1.0) <= 0.3, "deficit exponent");
  out.require(rv >= 0.99 && rv <= 1.01, "variance ratio at N=800");
  out.require(rd >= 0.99 && rd <= 1.01, "deficit ratio at N=800");
}

void cauchy_schwarz(Outcome& out) {
  const Cycle c = make_cycle(fig1_preset());
  const CurveSampling cs(c.geometry);
  const int n = fig1_preset().steps;
  double worst_bound = 0.0;
  double worst_cv = 0.0;
  int beaten = 0;
  for (double eps : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double len = thermodynamic_length(cs, eps);
    const Schedule opt = optimal_schedule(cs, eps);
    const double best = objective_value(c.geometry, opt, n, eps).objective;
    worst_bound = std::max(worst_bound, rel(best, len * len / n));
    worst_cv = std::max(worst_cv, constant_speed_variation(c.geometry, opt));
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      const double other = objective_value(c.geometry, random_schedule(seed), n, eps).objective;
      if (other < best) ++beaten;
    }
  }
  out.detail << " max |I - L^2/N|/I " << worst_bound << ", random schedules beating optimum "
             << beaten << ", max CV " << worst_cv;
  out.require(worst_bound < 1e-6, "I != L^2/N");
  out.require(beaten == 0, "a random schedule beat the optimum");
  out.require(worst_cv < 1e-3, "constant-speed variation");
}

void fluctuation_bound(Outcome& out) {
  const Cycle c = make_cycle(fig1_preset());
  const CurveSampling cs(c.geometry);
  const int n = 500;
  const double l1 = thermodynamic_length(cs, 1.0);
  const Schedule opt = optimal_schedule(cs, 1.0);
  const double var_opt = run_cycle(c.model, opt.apply(c.spec.curve), n, c.reservoirs).variance;
  const double var_lin = run_cycle(c.model, c.spec.curve, n, c.reservoirs).variance;
  const double bc = c.reservoirs.beta_cold;
  const double lhs = var_opt * n * bc * bc;
  const double rhs = l1 * l1 * (1.0 - 5.0 / n);
  out.detail << " Var N/T_c^2 = " << lhs << " vs L1^2(1-5/N) = " << rhs
             << ", linear/optimal Var = " << var_lin / var_opt;
  out.require(lhs >= rhs, "bound violated");
  out.require(var_lin > var_opt, "linear schedule not worse");
}

struct Front {
  std::vector<ParetoPoint> points;  // finite points only
  double work = 0.0;
  double beta_cold = 0.0;
};

Front front(const Preset& preset) {
  const Cycle c = make_cycle(preset);
  const CurveSampling cs(c.geometry);
  Front f;
  f.work = c.work;
  f.beta_cold = c.spec.beta_cold;
  for (const ParetoPoint& p :
       pareto_sweep(c.geometry, cs, uniform_epsilon_grid(51), preset.steps)) {
    if (std::isfinite(p.deficit) && std::isfinite(p.fluctuation)) f.points.push_back(p);
  }
  return f;
}

// Smallest change of slope along the front, for y = ΔW̃ or y = Var(W̃).
double min_slope_change(const Front& f, bool variance) {
  auto y = [&](std::size_t i) {
    const double d = f.points[i].fluctuation;
    return variance ? d * d : d;
  };
  double worst = INFINITY;
  for (std::size_t i = 1; i + 1 < f.points.size(); ++i) {
    const double s0 = (y(i) - y(i - 1)) / (f.points[i].deficit - f.points[i - 1].deficit);
    const double s1 = (y(i + 1) - y(i)) / (f.points[i + 1].deficit - f.points[i].deficit);
    worst = std::min(worst, s1 - s0);
  }
  return worst;
}

bool non_dominating(const Front& f) {
  for (std::size_t i = 1; i < f.points.size(); ++i) {
    if (!(f.points[i].deficit > f.points[i - 1].deficit)) return false;
    if (!(f.points[i].fluctuation < f.points[i - 1].fluctuation)) return false;
  }
  return true;
}

void check_front(Outcome& out, const Front& f, const std::string& label, double* worst) {
  out.require(f.points.size() >= 3, label + ": too few finite points");
  out.require(non_dominating(f), label + ": dominated point");
  const double a = min_slope_change(f, false);
  const double b = min_slope_change(f, true);
  *worst = std::min({*worst, a, b});
  out.require(a >= -1e-9 && b >= -1e-9, label + ": not convex");
}

void pareto_fronts(Outcome& out) {
  double worst = INFINITY;
  for (double r : {0.25, 0.5, 0.75, 1.0}) {
    check_front(out, front(fig2_preset(2.0 * r, 0.8)), "fig2 T_c=" + std::to_string(2.0 * r),
                &worst);
  }
  for (double k : {0.1, 0.2, 0.3, 0.4}) {
    Preset p = fig1_preset();
    p.kappa0 = k;
    check_front(out, front(p), "fig2 kappa=" + std::to_string(k), &worst);
  }

  // Classical fronts: higher T_c sits further from the origin in both objectives.
  std::vector<Front> classical;
  const std::vector<double> cold{0.25, 0.5, 0.75, 1.0};
  for (double tc : cold) {
    classical.push_back(front(classical_preset(tc)));
    check_front(out, classical.back(), "classical T_c=" + std::to_string(tc), &worst);
  }
  bool nested = true;
  for (std::size_t i = 1; i < classical.size(); ++i) {
    const Front& lo = classical[i - 1];
    const Front& hi = classical[i];
    nested = nested && hi.points.front().deficit > lo.points.front().deficit;
    const std::size_t n = std::min(lo.points.size(), hi.points.size());
    for (std::size_t j = 0; j < n; ++j) {
      const double a = lo.points[j].fluctuation / (lo.beta_cold * std::abs(lo.work));
      const double b = hi.points[j].fluctuation / (hi.beta_cold * std::abs(hi.work));
      nested = nested && b > a;
    }
  }
  out.require(nested, "classical T_c ordering");

  // Same ordering from the discrete oracle at N = 50: δη at ε = 0, ΔW/|𝒲| at ε = 0 and ½.
  bool oracle_nested = true;
  for (double eps : {0.0, 0.5}) {
    double prev_deficit = -INFINITY;
    double prev_rel = -INFINITY;
    for (double tc : cold) {
      const Preset preset = classical_preset(tc);
      const Cycle c = make_cycle(preset);
      const Schedule s = optimal_schedule(CurveSampling(c.geometry), eps);
      const CycleLedger l = run_cycle(c.model, s.apply(c.spec.curve), preset.steps,
                                      c.reservoirs, Regime::classical);
      const double r = std::sqrt(l.variance) / std::abs(c.work);
      oracle_nested = oracle_nested && l.engine && r > prev_rel;
      if (eps == 0.0) oracle_nested = oracle_nested && l.deficit > prev_deficit;
      prev_deficit = l.deficit;
      prev_rel = r;
    }
  }
  out.require(oracle_nested, "discrete-oracle T_c ordering");
  out.detail << " 12 fronts, min slope change " << worst;
}

void commuting_reduction(Outcome& out) {
  RealMatrix base = RealMatrix::Zero(4, 4);
  base.diagonal() << 1.0, 1.0, 2.0, 1.0;
  base(0, 2) = base(2, 0) = -0.4;
  const QuadraticModel model = scaling_model(base);
  const LindbladModel open = thermal_damping(model, 0.2);
  double closed_worst = 0.0;
  double open_worst = 0.0;
  for (double b : {0.8, 1.5, 2.5, 4.0}) {
    for (double c : {0.5, 1.0, 1.7}) {
      const ParamPoint p{b, {c}};
      const MetricPair cm = metrics_at(model, p);
      closed_worst = std::max(closed_worst, rel(cm.g(1, 1), b * b * cm.m(1, 1)));
      const MetricPair om = open_metrics(open, p).metrics;
      open_worst = std::max(open_worst, rel(om.g(1, 1), b * b * om.m(1, 1)));
    }
  }
  out.detail << " closed " << closed_worst << ", open " << open_worst;
  out.require(closed_worst < 1e-9, "closed pipeline");
  out.require(open_worst < 1e-9, "open pipeline");
}

void lindblad_gates(Outcome& out) {
  const LindbladModel ho = damped_ho_lindblad(0.1);
  const Preset preset = fig1_preset();
  double gap = 0.0;
  double residual = 0.0;
  bool sym_psd = true;
  auto gate = [&](const OpenMetricReport& r) {
    residual = std::max(residual, r.max_lyapunov_residual);
    const MetricPair& m = r.metrics;
    sym_psd = sym_psd && is_symmetric(m.m.entries()) && is_symmetric(m.g.entries()) &&
              m.m.is_psd() && m.g.is_psd();
  };
  // β from 1/T_h to 1/T_c, ω over the protocol's range ω₀[1, 2].
  for (int i = 0; i <= 20; ++i) {
    const double b = 1.0 / preset.temperature_hot +
                     (1.0 / preset.temperature_cold - 1.0 / preset.temperature_hot) * i / 20.0;
    for (double w : {1.0, 1.25, 1.5, 1.75, 2.0}) {
      const ParamPoint p{b, {w}};
      LyapunovReport rep;
      steady_covariance(ho, p, &rep);
      residual = std::max(residual, rep.residual);
      gap = std::max(gap, detailed_balance_gap(ho, p));
      gate(open_metrics(ho, p));
    }
  }
  // Coupled oscillators along the whole cycle.
  const LindbladModel coupled = thermal_damping(coupled_oscillators(), 0.1);
  const ProtocolSpec spec = preset_protocol(preset);
  for (int i = 0; i < 40; ++i) {
    const OpenMetricReport r = open_metrics(coupled, spec.curve(i / 40.0));
    gap = std::max(gap, r.detailed_balance_gap);
    gate(r);
  }
  out.detail << " max Lyapunov residual " << residual << ", max steady-state gap " << gap;
  out.require(residual < 1e-10, "Lyapunov residual");
  out.require(gap < 1e-8, "steady state is not thermal");
  out.require(sym_psd, "open metrics not symmetric PSD");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void determinism(Outcome& out, const std::string& binary) {
  const cli::RunConfig cfg = cli::parse_config(R"({"epsilon_count": 11})");
  std::ostringstream a;
  std::ostringstream b;
  std::ostringstream c;
  cli::cmd_pareto(cfg, a, 1);
  cli::cmd_pareto(cfg, b, 1);
  cli::cmd_pareto(cfg, c, 4);
  out.require(!a.str().empty(), "empty output");
  out.require(a.str() == b.str(), "repeat run differs");
  out.require(a.str() == c.str(), "thread count changes output");
  out.detail << " in-process " << a.str().size() << " bytes";
  if (!binary.empty()) {
    const std::string f1 = "acceptance_pareto_1.csv";
    const std::string f2 = "acceptance_pareto_2.csv";
    const std::string base = "\"" + binary + "\" pareto --preset fig2 --out ";
    const int r1 = std::system((base + f1).c_str());
    const int r2 = std::system((base + f2 + " --threads 2").c_str());
    out.require(r1 == 0 && r2 == 0, "CLI run failed");
    const std::string t1 = read_file(f1);
    out.require(!t1.empty() && t1 == read_file(f2), "CLI outputs differ");
    out.detail << ", CLI " << t1.size() << " bytes";
    std::remove(f1.c_str());
    std::remove(f2.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  const std::string binary = argc > 1 ? argv[1] : "";
  criterion(1, "Gaussian/Fock oracle equivalence", 30.0, fock_equivalence);
  criterion(2, "entropy-production identity", 10.0, entropy_identity);
  criterion(3, "geometric convergence", 120.0, geometric_convergence);
  criterion(4, "Cauchy-Schwarz optimality", 0.0, cauchy_schwarz);
  criterion(5, "fluctuation bound", 0.0, fluctuation_bound);
  criterion(6, "Pareto-front properties", 0.0, pareto_fronts);
  criterion(7, "commuting-force reduction", 0.0, commuting_reduction);
  criterion(8, "Lindblad gates", 0.0, lindblad_gates);
  criterion(9, "determinism", 0.0, [&](Outcome& o) { determinism(o, binary); });
  return failures;
}
