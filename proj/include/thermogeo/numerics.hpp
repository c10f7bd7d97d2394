#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace thermogeo {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

/// Largest absolute entry; 0 for an empty matrix.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_symmetric(const RealMatrix& m, double tol = 1e-12);
bool is_antisymmetric(const RealMatrix& m, double tol = 1e-12);
RealMatrix symmetrized(const RealMatrix& m);

/// e^A by scaling and squaring with a degree-13 Pade approximant.
ComplexMatrix matrix_exp(const ComplexMatrix& a);
RealMatrix matrix_exp(const RealMatrix& a);

struct EigenSystem {
  ComplexVector values;
  ComplexMatrix vectors;  // right eigenvectors, column per eigenvalue
  double residual = 0.0;  // max |A V - V diag(values)|
};

/// Eigen-decomposition of a general real square matrix.
/// Throws ConvergenceError (carrying the residual) when the solver fails or the
/// residual exceeds 1e-9 * max|A|.
EigenSystem eig_general(const RealMatrix& a);

struct LyapunovReport {
  double residual = 0.0;      // max |A^T Y + Y A + X|
  bool used_fallback = false;  // eigenbasis was ill-conditioned
};

/// Solves A^T Y + Y A = -X for Hurwitz A, i.e. Y = int_0^inf e^{vA^T} X e^{vA} dv.
/// Uses the eigenbasis transform; falls back to a dense Kronecker solve when A is
/// (nearly) defective.
RealMatrix solve_lyapunov(const RealMatrix& a, const RealMatrix& x,
                          LyapunovReport* report = nullptr);

/// Quadrature rule on [0, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  static QuadratureRule gauss_legendre(int points);
  std::size_t size() const { return nodes.size(); }
};

/// Composite application of `rule` over `panels` equal sub-intervals of [a, b].
double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    const QuadratureRule& rule, int panels);

/// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson slopes).
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double derivative(double x) const;
  /// Leftmost preimage of `target`; requires nondecreasing samples.
  double inverse(double target) const;
  std::span<const double> x() const { return x_; }
  std::span<const double> y() const { return y_; }

 private:
  std::size_t interval(double x) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> slope_;
};

/// Leftmost u with s(u) = target, where s is the monotone cubic through the
/// nondecreasing samples (u_i, s_i).
double monotone_inverse(std::span<const double> u, std::span<const double> s,
                        double target);

}  // namespace thermogeo
