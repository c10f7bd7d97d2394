#include "thermogeo/gaussian.hpp"

#include <cmath>
#include <sstream>

#include "thermogeo/errors.hpp"

namespace thermogeo {

QuadraticModel::QuadraticModel(int modes, std::vector<std::string> parameter_names,
                               CoefficientFn coefficients, DerivativeFn derivative)
    : modes_(modes),
      names_(std::move(parameter_names)),
      g_(std::move(coefficients)),
      dg_(std::move(derivative)) {
  if (modes_ < 1) throw ArgumentError("QuadraticModel: need at least one mode");
  if (!g_ || !dg_) throw ArgumentError("QuadraticModel: missing coefficient map");
}

void QuadraticModel::check_lambda(std::span<const double> lambda) const {
  if (static_cast<int>(lambda.size()) != parameter_count()) {
    std::ostringstream os;
    os << "QuadraticModel: expected " << parameter_count()
       << " mechanical parameters, got " << lambda.size();
    throw DimensionError(os.str());
  }
}

RealMatrix QuadraticModel::coefficients(std::span<const double> lambda) const {
  check_lambda(lambda);
  RealMatrix g = g_(lambda);
  if (g.rows() != dimension() || g.cols() != dimension()) {
    throw DimensionError("QuadraticModel: coefficient matrix has wrong shape");
  }
  if (!is_symmetric(g, 1e-12 * std::max(1.0, max_abs(g)))) {
    throw ArgumentError("QuadraticModel: coefficient matrix is not symmetric");
  }
  return g;
}

RealMatrix QuadraticModel::derivative(std::span<const double> lambda, int j) const {
  check_lambda(lambda);
  if (j < 1 || j > parameter_count()) {
    throw ArgumentError("QuadraticModel: derivative index out of range");
  }
  RealMatrix d = dg_(lambda, j);
  if (d.rows() != dimension() || d.cols() != dimension()) {
    throw DimensionError("QuadraticModel: derivative matrix has wrong shape");
  }
  return d;
}

RealMatrix symplectic_form(int modes) {
  if (modes < 1) throw ArgumentError("symplectic_form: need at least one mode");
  RealMatrix omega = RealMatrix::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

Williamson williamson(const RealMatrix& g) {
  if (g.rows() != g.cols() || g.rows() % 2 != 0 || g.rows() == 0) {
    throw DimensionError("williamson: expected a square matrix of even size");
  }
  if (!g.allFinite()) throw NumericError("williamson: non-finite entry");
  const int n = static_cast<int>(g.rows());
  const int modes = n / 2;
  Eigen::SelfAdjointEigenSolver<RealMatrix> spectral(symmetrized(g));
  const RealVector lam = spectral.eigenvalues();
  if (!(lam(0) > 1e-14 * std::max(1.0, lam(n - 1)))) {
    std::ostringstream os;
    os << "williamson: coefficient matrix is not positive definite (min eigenvalue "
       << lam(0) << ")";
    throw PositivityError(os.str());
  }
  const RealMatrix& q = spectral.eigenvectors();
  const RealMatrix g_inv_half =
      q * lam.cwiseSqrt().cwiseInverse().asDiagonal() * q.transpose();

  // i G^{-1/2} Ω G^{-1/2} is Hermitian with spectrum ±1/ν_k.
  const RealMatrix m = g_inv_half * symplectic_form(modes) * g_inv_half;
  const ComplexMatrix herm = Complex(0.0, 1.0) * m.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> modes_solver(herm);
  const RealVector mu = modes_solver.eigenvalues();

  RealMatrix o(n, n);
  Williamson out;
  out.frequencies.resize(modes);
  RealVector scale(n);
  for (int k = 0; k < modes; ++k) {
    const int idx = modes + k;  // positive half, ascending mu -> descending nu
    const ComplexVector v = modes_solver.eigenvectors().col(idx);
    o.col(2 * k) = std::sqrt(2.0) * v.imag();
    o.col(2 * k + 1) = std::sqrt(2.0) * v.real();
    const double nu = 1.0 / mu(idx);
    out.frequencies(k) = nu;
    scale(2 * k) = scale(2 * k + 1) = std::sqrt(nu);
  }
  out.symplectic = g_inv_half * o * scale.asDiagonal();

  const RealMatrix omega = symplectic_form(modes);
  const double sympl_residual =
      max_abs(out.symplectic.transpose() * omega * out.symplectic - omega);
  if (sympl_residual > 1e-8) {
    std::ostringstream os;
    os << "williamson: symplectic residual " << sympl_residual;
    throw ConsistencyError(os.str());
  }
  return out;
}

namespace {

double log_two_sinh_half(double y) {
  // ln(2 sinh(y/2)) without overflow for large y.
  const double h = 0.5 * y;
  return h + std::log1p(-std::exp(-2.0 * h));
}

}  // namespace

ThermalGaussianState thermal_state(const RealMatrix& g, double beta, Regime regime) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw ArgumentError("thermal_state: inverse temperature must be positive");
  }
  ThermalGaussianState st;
  st.regime = regime;
  st.beta = beta;
  st.g = g;
  st.normal_modes = williamson(g);
  const RealVector& nu = st.normal_modes.frequencies;
  const int modes = static_cast<int>(nu.size());
  RealVector occupation(2 * modes);
  double log_z = 0.0;
  for (int k = 0; k < modes; ++k) {
    const double y = beta * nu(k);
    const double value = regime == Regime::quantum ? 0.5 / std::tanh(0.5 * y) : 1.0 / y;
    occupation(2 * k) = occupation(2 * k + 1) = value;
    log_z -= regime == Regime::quantum ? log_two_sinh_half(y) : std::log(y);
  }
  const RealMatrix& s = st.normal_modes.symplectic;
  st.sigma = symmetrized(s * occupation.asDiagonal() * s.transpose());
  st.log_partition = log_z;
  return st;
}

ThermalGaussianState thermal_covariance(const QuadraticModel& model,
                                        const ParamPoint& point, Regime regime) {
  return thermal_state(model.coefficients(point.lambda), point.beta, regime);
}

ComplexMatrix two_point(const ThermalGaussianState& state) {
  ComplexMatrix c = state.sigma.cast<Complex>();
  if (state.regime == Regime::quantum) {
    c += Complex(0.0, 0.5) * symplectic_form(state.dimension() / 2).cast<Complex>();
  }
  return c;
}

double physicality_margin(const ThermalGaussianState& state) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(two_point(state),
                                                      Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

double mean_energy(const ThermalGaussianState& state) {
  return 0.5 * (state.g.cwiseProduct(state.sigma)).sum();
}

double quadratic_covariance(const ThermalGaussianState& state, const RealMatrix& a,
                            const RealMatrix& b) {
  if (a.rows() != state.dimension() || b.rows() != state.dimension()) {
    throw DimensionError("quadratic_covariance: dimension mismatch");
  }
  const ComplexMatrix c = two_point(state);
  return 0.5 * (a.cast<Complex>() * c * b.cast<Complex>() * c.transpose())
                   .trace()
                   .real();
}

double relative_entropy(const ThermalGaussianState& first,
                        const ThermalGaussianState& second) {
  if (first.dimension() != second.dimension()) {
    throw ArgumentError("relative_entropy: states have different dimensions");
  }
  if (first.regime != second.regime) {
    throw ArgumentError("relative_entropy: states belong to different regimes");
  }
  const double e22 = 0.5 * (second.g.cwiseProduct(first.sigma)).sum();
  const double e11 = 0.5 * (first.g.cwiseProduct(first.sigma)).sum();
  return second.beta * e22 - first.beta * e11 + second.log_partition -
         first.log_partition;
}

ComplexMatrix imaginary_time_propagator(const RealMatrix& g, const RealMatrix& omega,
                                        double x) {
  if (g.rows() != omega.rows() || g.cols() != omega.cols()) {
    throw DimensionError("imaginary_time_propagator: dimension mismatch");
  }
  return matrix_exp(ComplexMatrix(Complex(0.0, x) * (omega * g).cast<Complex>()));
}

}  // namespace thermogeo
