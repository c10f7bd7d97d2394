#include "thermogeo/models.hpp"

#include <cmath>
#include <sstream>

#include "thermogeo/errors.hpp"

namespace thermogeo {

namespace {

QuadraticModel oscillator(const std::string& label) {
  return QuadraticModel(
      1, {label},
      [](std::span<const double> l) {
        RealMatrix g = RealMatrix::Zero(2, 2);
        g(0, 0) = l[0] * l[0];
        g(1, 1) = 1.0;
        return g;
      },
      [](std::span<const double> l, int) {
        RealMatrix d = RealMatrix::Zero(2, 2);
        d(0, 0) = 2.0 * l[0];
        return d;
      });
}

}  // namespace

QuadraticModel single_ho() { return oscillator("omega"); }

QuadraticModel classical_ho() { return oscillator("omega"); }

QuadraticModel scaling_model(const RealMatrix& base) {
  if (base.rows() != base.cols() || base.rows() % 2 != 0 || base.rows() == 0) {
    throw DimensionError("scaling_model: base must be square with even size");
  }
  if (!is_symmetric(base, 1e-12 * std::max(1.0, max_abs(base)))) {
    throw ArgumentError("scaling_model: base must be symmetric");
  }
  const int modes = static_cast<int>(base.rows()) / 2;
  return QuadraticModel(
      modes, {"c"}, [base](std::span<const double> l) { return RealMatrix(l[0] * base); },
      [base](std::span<const double>, int) { return base; });
}

QuadraticModel coupled_oscillators() {
  return QuadraticModel(
      2, {"omega", "kappa"},
      [](std::span<const double> l) {
        const double w2 = l[0] * l[0];
        const double k = l[1];
        if (!(w2 > 0.0) || !(w2 + 2.0 * k > 0.0)) {
          std::ostringstream os;
          os << "coupled_oscillators: G not positive definite at omega = " << l[0]
             << ", kappa = " << k;
          throw PositivityError(os.str());
        }
        RealMatrix g = RealMatrix::Zero(4, 4);
        g(0, 0) = g(2, 2) = w2 + k;
        g(0, 2) = g(2, 0) = -k;
        g(1, 1) = g(3, 3) = 1.0;
        return g;
      },
      [](std::span<const double> l, int j) {
        RealMatrix d = RealMatrix::Zero(4, 4);
        if (j == 1) {
          d(0, 0) = d(2, 2) = 2.0 * l[0];
        } else {
          d(0, 0) = d(2, 2) = 1.0;
          d(0, 2) = d(2, 0) = -1.0;
        }
        return d;
      });
}

ProtocolSpec harmonic_protocol(double beta_cold, double beta_hot, std::vector<double> base) {
  if (!(beta_hot > 0.0) || !(beta_hot < beta_cold)) {
    std::ostringstream os;
    os << "harmonic_protocol: need 0 < beta_h < beta_c, got beta_c = " << beta_cold
       << ", beta_h = " << beta_hot;
    throw ArgumentError(os.str());
  }
  if (base.empty()) throw ArgumentError("harmonic_protocol: no mechanical parameters");
  ProtocolSpec spec;
  spec.beta_cold = beta_cold;
  spec.beta_hot = beta_hot;
  spec.base = base;
  spec.curve = ControlCurve(
      [beta_cold, beta_hot, base](double t) {
        const double s = std::sin(M_PI * t);
        const double f = std::sin(M_PI * t + M_PI / 4.0);
        ParamPoint p;
        p.beta = beta_cold + (beta_hot - beta_cold) * s * s;
        p.lambda.resize(base.size());
        for (std::size_t j = 0; j < base.size(); ++j) p.lambda[j] = base[j] * (1.0 + f * f);
        return p;
      },
      [beta_cold, beta_hot, base](double t) {
        RealVector v(static_cast<Eigen::Index>(base.size() + 1));
        v(0) = (beta_hot - beta_cold) * M_PI * std::sin(2.0 * M_PI * t);
        const double c = M_PI * std::cos(2.0 * M_PI * t);
        for (std::size_t j = 0; j < base.size(); ++j) v(j + 1) = base[j] * c;
        return v;
      });
  return spec;
}

Preset fig1_preset() { return {"fig1", "coupled", 1.0, 0.4, 0.25, 1.25, 50}; }

Preset fig2_preset(double temperature_cold, double kappa0) {
  return {"fig2", "coupled", 2.0, kappa0, temperature_cold, temperature_cold + 2.0, 50};
}

Preset classical_preset(double temperature_cold) {
  return {"classical", "classical", 1.0, 0.0, temperature_cold, temperature_cold + 1.0, 50};
}

Preset preset_by_name(const std::string& name) {
  if (name == "fig1") return fig1_preset();
  if (name == "fig2") return fig2_preset(0.5, 0.8);
  if (name == "fig2-coupling") {
    Preset p = fig1_preset();
    p.name = name;
    return p;
  }
  if (name == "classical") return classical_preset(0.25);
  throw ArgumentError("unknown preset '" + name +
                      "' (expected fig1, fig2, fig2-coupling or classical)");
}

QuadraticModel preset_model(const Preset& preset) {
  if (preset.model == "coupled") return coupled_oscillators();
  if (preset.model == "single") return single_ho();
  if (preset.model == "classical") return classical_ho();
  throw ArgumentError("unknown model '" + preset.model +
                      "' (expected coupled, single or classical)");
}

ProtocolSpec preset_protocol(const Preset& preset) {
  if (!(preset.temperature_cold > 0.0) ||
      !(preset.temperature_hot > preset.temperature_cold)) {
    throw ArgumentError("preset: need 0 < T_c < T_h");
  }
  std::vector<double> base{preset.omega0};
  if (preset.model == "coupled") base.push_back(preset.kappa0);
  return harmonic_protocol(1.0 / preset.temperature_cold, 1.0 / preset.temperature_hot,
                           base);
}

Regime preset_regime(const Preset& preset) {
  return preset.model == "classical" ? Regime::classical : Regime::quantum;
}

}  // namespace thermogeo
