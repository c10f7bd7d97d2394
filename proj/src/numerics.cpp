#include "thermogeo/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "thermogeo/errors.hpp"

namespace thermogeo {

bool is_symmetric(const RealMatrix& m, double tol) {
  return m.rows() == m.cols() && max_abs(m - m.transpose()) <= tol;
}

bool is_antisymmetric(const RealMatrix& m, double tol) {
  return m.rows() == m.cols() && max_abs(m + m.transpose()) <= tol;
}

RealMatrix symmetrized(const RealMatrix& m) { return 0.5 * (m + m.transpose()); }

namespace {

void require_square(Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (rows != cols) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << rows << "x" << cols;
    throw DimensionError(os.str());
  }
}

// Higham (2005) degree-13 coefficients and the matching 1-norm threshold.
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

}  // namespace

ComplexMatrix matrix_exp(const ComplexMatrix& a) {
  require_square(a.rows(), a.cols(), "matrix_exp");
  if (!a.allFinite()) throw NumericError("matrix_exp: non-finite entry in input");
  const Eigen::Index n = a.rows();
  if (n == 0) return a;

  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
  }
  const ComplexMatrix as = a / std::ldexp(1.0, squarings);
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a2 = as * as;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;
  const auto& b = kPade13;

  const ComplexMatrix u_inner =
      a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
      b[3] * a2 + b[1] * id;
  const ComplexMatrix u = as * u_inner;
  const ComplexMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
                          b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

  ComplexMatrix r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) r = r * r;
  if (!r.allFinite()) throw NumericError("matrix_exp: overflow in result");
  return r;
}

RealMatrix matrix_exp(const RealMatrix& a) {
  return matrix_exp(ComplexMatrix(a.cast<Complex>())).real();
}

EigenSystem eig_general(const RealMatrix& a) {
  require_square(a.rows(), a.cols(), "eig_general");
  if (!a.allFinite()) throw NumericError("eig_general: non-finite entry in input");
  Eigen::EigenSolver<RealMatrix> solver(a, true);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("eig_general: QR iteration did not converge",
                           std::numeric_limits<double>::infinity());
  }
  EigenSystem out{solver.eigenvalues(), solver.eigenvectors(), 0.0};
  const ComplexMatrix ac = a.cast<Complex>();
  out.residual =
      max_abs(ac * out.vectors - out.vectors * out.values.asDiagonal());
  const double scale = std::max(max_abs(a), 1e-300);
  if (out.residual > 1e-9 * scale) {
    throw ConvergenceError("eig_general: eigen-residual above tolerance",
                           out.residual);
  }
  return out;
}

namespace {

RealMatrix lyapunov_kronecker(const RealMatrix& a, const RealMatrix& x) {
  const Eigen::Index n = a.rows();
  const RealMatrix id = RealMatrix::Identity(n, n);
  RealMatrix op = RealMatrix::Zero(n * n, n * n);
  // Column-major vec: vec(A^T Y) = (I (x) A^T) vec(Y), vec(Y A) = (A^T (x) I) vec(Y).
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      op.block(i * n, j * n, n, n) += id(i, j) * a.transpose();
      op.block(i * n, j * n, n, n) += a(j, i) * id;
    }
  }
  const RealVector rhs = -Eigen::Map<const RealVector>(x.data(), n * n);
  const RealVector y = op.fullPivLu().solve(rhs);
  return Eigen::Map<const RealMatrix>(y.data(), n, n);
}

}  // namespace

RealMatrix solve_lyapunov(const RealMatrix& a, const RealMatrix& x,
                          LyapunovReport* report) {
  require_square(a.rows(), a.cols(), "solve_lyapunov(A)");
  require_square(x.rows(), x.cols(), "solve_lyapunov(X)");
  if (a.rows() != x.rows()) {
    throw DimensionError("solve_lyapunov: A and X dimensions differ");
  }
  const Eigen::Index n = a.rows();
  const EigenSystem es = eig_general(a);
  const double max_re = es.values.real().maxCoeff();
  if (!(max_re < 0.0)) {
    std::ostringstream os;
    os << "solve_lyapunov: drift matrix is not Hurwitz (eigenvalue real part "
       << max_re << ")";
    throw StabilityError(os.str(), max_re);
  }

  const auto residual_of = [&](const RealMatrix& y) {
    return max_abs(a.transpose() * y + y * a + x);
  };
  const double tol = 1e-10 * std::max(1.0, max_abs(x));

  LyapunovReport local;
  RealMatrix y;
  Eigen::JacobiSVD<ComplexMatrix> svd(es.vectors);
  const auto sv = svd.singularValues();
  const double cond = sv(0) / std::max(sv(n - 1), 1e-300);
  if (cond < 1e8) {
    // With A = V L V^{-1}: V^T (A^T Y + Y A) V = L Z + Z L for Z = V^T Y V.
    const ComplexMatrix& v = es.vectors;
    const ComplexMatrix xt = v.transpose() * x.cast<Complex>() * v;
    ComplexMatrix z(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        z(i, j) = -xt(i, j) / (es.values(i) + es.values(j));
      }
    }
    const ComplexMatrix vinv = v.inverse();
    y = (vinv.transpose() * z * vinv).real();
    local.residual = residual_of(y);
  }
  if (y.size() == 0 || local.residual > tol) {
    y = lyapunov_kronecker(a, x);
    local.used_fallback = true;
    local.residual = residual_of(y);
  }
  if (is_symmetric(x, 0.0)) {
    y = symmetrized(y);
    local.residual = residual_of(y);
  }
  if (report) *report = local;
  return y;
}

QuadratureRule QuadratureRule::gauss_legendre(int points) {
  if (points < 1) throw ArgumentError("gauss_legendre: need at least one node");
  QuadratureRule rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  const int n = points;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Map [-1, 1] onto [0, 1]; weights then sum to one.
    const double w = 1.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = 0.5 * (1.0 - z);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + z);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n == 1) {
    rule.nodes[0] = 0.5;
    rule.weights[0] = 1.0;
  }
  return rule;
}

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    const QuadratureRule& rule, int panels) {
  if (panels < 1) throw ArgumentError("integrate_1d: panels must be >= 1");
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double left = a + p * h;
    double panel = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double x = left + rule.nodes[k] * h;
      const double fx = f(x);
      if (!std::isfinite(fx)) {
        std::ostringstream os;
        os << "integrate_1d: non-finite integrand at x = " << x;
        throw NumericError(os.str(), x);
      }
      panel += rule.weights[k] * fx;
    }
    total += panel * h;
  }
  return total;
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) {
    throw ArgumentError("MonotoneCubic: need >= 2 samples of equal length");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) {
      throw MonotonicityError("MonotoneCubic: abscissae must be strictly increasing");
    }
  }
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  slope_.assign(n, 0.0);
  if (n == 2) {
    slope_[0] = slope_[1] = delta[0];
    return;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] > 0.0) {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      slope_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  const auto end_slope = [](double h0, double h1, double d0, double d1) {
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(d) > std::abs(3.0 * d0)) return 3.0 * d0;
    return d;
  };
  slope_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  slope_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

std::size_t MonotoneCubic::interval(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - x_.begin());
  if (i == 0) return 0;
  return std::min(i - 1, x_.size() - 2);
}

double MonotoneCubic::operator()(double x) const {
  const std::size_t i = interval(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * slope_[i] +
         (-2 * t3 + 3 * t2) * y_[i + 1] + (t3 - t2) * h * slope_[i + 1];
}

double MonotoneCubic::derivative(double x) const {
  const std::size_t i = interval(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * y_[i] + (-6 * t2 + 6 * t) * y_[i + 1]) / h +
         (3 * t2 - 4 * t + 1) * slope_[i] + (3 * t2 - 2 * t) * slope_[i + 1];
}

double MonotoneCubic::inverse(double target) const {
  for (std::size_t i = 1; i < y_.size(); ++i) {
    if (y_[i] < y_[i - 1]) {
      throw MonotonicityError("monotone_inverse: samples are not nondecreasing");
    }
  }
  if (target < y_.front() || target > y_.back()) {
    std::ostringstream os;
    os << "monotone_inverse: target " << target << " outside ["
       << y_.front() << ", " << y_.back() << "]";
    throw RangeError(os.str());
  }
  const auto it = std::lower_bound(y_.begin(), y_.end(), target);
  const std::size_t i = static_cast<std::size_t>(it - y_.begin());
  if (y_[i] == target) return x_[i];
  // y_[i-1] < target < y_[i]; the Hermite piece is monotone there.
  double lo = x_[i - 1];
  double hi = x_[i];
  for (int iter = 0; iter < 200 && hi - lo > 0.0; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if ((*this)(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

double monotone_inverse(std::span<const double> u, std::span<const double> s,
                        double target) {
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] < s[i - 1]) {
      throw MonotonicityError("monotone_inverse: samples are not nondecreasing");
    }
  }
  MonotoneCubic profile(std::vector<double>(u.begin(), u.end()),
                        std::vector<double>(s.begin(), s.end()));
  return profile.inverse(target);
}

}  // namespace thermogeo
