#pragma once

#include <string>
#include <vector>

#include "thermogeo/curve.hpp"
#include "thermogeo/gaussian.hpp"

namespace thermogeo {

/// H = ½(p² + ω²x²); parameter ω.
QuadraticModel single_ho();

/// H = c·H₀ for a fixed base coefficient matrix; parameter c. All conjugate
/// forces commute with H.
QuadraticModel scaling_model(const RealMatrix& base);

/// Two equal-frequency oscillators with spring coupling; parameters (ω, κ).
/// G = [[ω²+κ, 0, −κ, 0], [0, 1, 0, 0], [−κ, 0, ω²+κ, 0], [0, 0, 0, 1]].
/// Throws PositivityError from coefficients() when ω² + 2κ ≤ 0 or ω = 0.
QuadraticModel coupled_oscillators();

/// Classical unit-mass oscillator H = ½(p² + ω²x²) used with Regime::classical.
QuadraticModel classical_ho();

/// Closed harmonic protocol with analytic velocity:
/// β(t) = β_c + (β_h − β_c) sin²(πt), each λʲ(t) = λʲ₀ (1 + sin²(πt + π/4)).
struct ProtocolSpec {
  double beta_cold = 1.0;
  double beta_hot = 0.5;
  std::vector<double> base;  // λʲ₀
  ControlCurve curve;

  /// δβ(t) = (β(t) − β_c)/(β_h − β_c).
  double delta_beta(double beta) const {
    return (beta - beta_cold) / (beta_hot - beta_cold);
  }
};

/// Throws ArgumentError unless 0 < β_h < β_c and base is nonempty.
ProtocolSpec harmonic_protocol(double beta_cold, double beta_hot, std::vector<double> base);

/// Named parameter sets.
struct Preset {
  std::string name;
  std::string model;   // "coupled" | "single" | "classical"
  double omega0 = 1.0;
  double kappa0 = 0.0;
  double temperature_cold = 0.25;
  double temperature_hot = 1.25;
  int steps = 50;
};

/// fig1: ω₀ = 1, T_c = 0.25ω₀, T_h = T_c + ω₀, κ₀ = 0.4ω₀, N = 50.
Preset fig1_preset();
/// ω₀ = 2 variant of fig1 with the given cold temperature and coupling.
Preset fig2_preset(double temperature_cold, double kappa0);
/// Classical oscillator cycle with ω₀ = 1, T_h = T_c + ω₀, N = 50.
Preset classical_preset(double temperature_cold);
/// Looks up "fig1", "fig2", "classical"; throws ArgumentError otherwise.
Preset preset_by_name(const std::string& name);

/// Model and protocol for a preset.
QuadraticModel preset_model(const Preset& preset);
ProtocolSpec preset_protocol(const Preset& preset);
Regime preset_regime(const Preset& preset);

}  // namespace thermogeo
