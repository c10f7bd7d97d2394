#include "thermogeo/fock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "thermogeo/errors.hpp"

namespace thermogeo {

namespace {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// x and p of one mode in a basis of `size` levels.
std::pair<ComplexMatrix, ComplexMatrix> mode_quadratures(int size, double reference) {
  ComplexMatrix a = ComplexMatrix::Zero(size, size);
  for (int i = 0; i + 1 < size; ++i) a(i, i + 1) = std::sqrt(static_cast<double>(i + 1));
  const ComplexMatrix ad = a.adjoint();
  const ComplexMatrix x = (a + ad) / std::sqrt(2.0 * reference);
  const ComplexMatrix p = Complex(0.0, std::sqrt(0.5 * reference)) * (ad - a);
  return {x, p};
}

}  // namespace

FockModel::FockModel(QuadraticModel model, int cutoff)
    : model_(std::move(model)), cutoff_(cutoff) {
  if (model_.modes() < 1 || model_.modes() > 2) {
    throw ArgumentError("FockModel: only one- and two-mode models are supported");
  }
  if (cutoff_ < 2) throw ArgumentError("FockModel: cutoff must be >= 2");
}

int FockModel::dimension() const {
  return modes() == 1 ? cutoff_ : cutoff_ * cutoff_;
}

std::vector<double> FockModel::natural_reference(std::span<const double> lambda) const {
  const RealMatrix g = model_.coefficients(lambda);
  std::vector<double> ref(modes());
  for (int k = 0; k < modes(); ++k) {
    const double gx = g(2 * k, 2 * k);
    const double gp = g(2 * k + 1, 2 * k + 1);
    if (!(gx > 0.0) || !(gp > 0.0)) {
      throw PositivityError("FockModel: diagonal coefficients must be positive");
    }
    ref[k] = std::sqrt(gx / gp);
  }
  return ref;
}

ComplexMatrix FockModel::quadrature(int index, std::span<const double> reference) const {
  if (index < 0 || index >= 2 * modes()) throw ArgumentError("FockModel: bad quadrature index");
  const int mode = index / 2;
  auto [x, p] = mode_quadratures(cutoff_, reference[mode]);
  const ComplexMatrix& local = index % 2 == 0 ? x : p;
  if (modes() == 1) return local;
  const ComplexMatrix id = ComplexMatrix::Identity(cutoff_, cutoff_);
  return mode == 0 ? kron(local, id) : kron(id, local);
}

ComplexMatrix FockModel::quadratic(const RealMatrix& a,
                                   std::span<const double> reference) const {
  const int dim2 = 2 * modes();
  if (a.rows() != dim2 || a.cols() != dim2) {
    throw DimensionError("FockModel: quadratic form has wrong shape");
  }
  if (static_cast<int>(reference.size()) != modes()) {
    throw DimensionError("FockModel: one reference frequency per mode required");
  }
  const int n = cutoff_;
  // Truncated single quadratures and exact truncated same-mode products.
  std::vector<ComplexMatrix> single(dim2);
  std::vector<ComplexMatrix> pair(dim2 * dim2);
  for (int k = 0; k < modes(); ++k) {
    auto [x, p] = mode_quadratures(n + 2, reference[k]);
    const ComplexMatrix ext[2] = {x, p};
    for (int r = 0; r < 2; ++r) {
      single[2 * k + r] = ext[r].topLeftCorner(n, n);
      for (int s = 0; s < 2; ++s) {
        pair[(2 * k + r) * dim2 + 2 * k + s] = (ext[r] * ext[s]).topLeftCorner(n, n);
      }
    }
  }
  if (modes() == 1) {
    ComplexMatrix h = ComplexMatrix::Zero(n, n);
    for (int r = 0; r < 2; ++r) {
      for (int s = 0; s < 2; ++s) h += 0.5 * a(r, s) * pair[r * dim2 + s];
    }
    return h;
  }
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  ComplexMatrix local0 = ComplexMatrix::Zero(n, n);
  ComplexMatrix local1 = ComplexMatrix::Zero(n, n);
  for (int r = 0; r < 2; ++r) {
    for (int s = 0; s < 2; ++s) {
      local0 += 0.5 * a(r, s) * pair[r * dim2 + s];
      local1 += 0.5 * a(2 + r, 2 + s) * pair[(2 + r) * dim2 + 2 + s];
    }
  }
  ComplexMatrix h = kron(local0, id) + kron(id, local1);
  // Cross-mode terms: ½(A_ab + A_ba) R_a R_b with a in mode 0, b in mode 1.
  for (int r = 0; r < 2; ++r) {
    for (int s = 0; s < 2; ++s) {
      const double c = 0.5 * (a(r, 2 + s) + a(2 + s, r));
      if (c != 0.0) h += c * kron(single[r], single[2 + s]);
    }
  }
  return h;
}

namespace {

FockState build_state(const FockModel& fock, const ParamPoint& point, double tail_tolerance) {
  if (!(point.beta > 0.0) || !std::isfinite(point.beta)) {
    throw ArgumentError("thermal_density: inverse temperature must be positive");
  }
  FockState st;
  st.beta = point.beta;
  st.reference = fock.natural_reference(point.lambda);
  const ComplexMatrix h = fock.quadratic(fock.model().coefficients(point.lambda), st.reference);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (h + h.adjoint()));
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("thermal_density: eigensolver failed", 0.0);
  }
  st.energies = solver.eigenvalues();
  st.eigenvectors = solver.eigenvectors();
  const Eigen::Index d = st.energies.size();
  st.populations.resize(d);
  double z = 0.0;
  for (Eigen::Index m = 0; m < d; ++m) {
    st.populations(m) = std::exp(-point.beta * (st.energies(m) - st.energies(0)));
    z += st.populations(m);
  }
  st.populations /= z;
  st.log_partition = -point.beta * st.energies(0) + std::log(z);
  st.density = st.eigenvectors * st.populations.cast<Complex>().asDiagonal() *
               st.eigenvectors.adjoint();

  const int n = fock.cutoff();
  for (Eigen::Index i = 0; i < d; ++i) {
    const bool top = fock.modes() == 1 ? i == n - 1 : (i / n == n - 1 || i % n == n - 1);
    if (top) st.tail_mass += st.density(i, i).real();
  }
  if (st.tail_mass >= tail_tolerance) {
    const Williamson nm = williamson(fock.model().coefficients(point.lambda));
    const double slowest = nm.frequencies.minCoeff();
    const int suggested =
        static_cast<int>(std::ceil(std::log(1e12) / (point.beta * slowest))) + 2;
    std::ostringstream os;
    os << "thermal_density: tail mass " << st.tail_mass << " at cutoff " << n
       << "; increase the cutoff to about " << std::max(suggested, 2 * n);
    throw TruncationError(os.str(), std::max(suggested, 2 * n));
  }
  return st;
}

// Conjugate forces in the energy eigenbasis, mean-subtracted.
std::vector<ComplexMatrix> centered_forces(const FockModel& fock, const ParamPoint& point,
                                           const FockState& st, bool with_beta) {
  std::vector<ComplexMatrix> out;
  const ComplexMatrix& u = st.eigenvectors;
  auto center = [&](ComplexMatrix a) {
    const Complex mean = (a.diagonal().array() * st.populations.cast<Complex>().array()).sum();
    a.diagonal().array() -= mean;
    return a;
  };
  if (with_beta) {
    ComplexMatrix h0 = st.energies.cast<Complex>().asDiagonal();
    out.push_back(center(h0 / point.beta));
  } else {
    out.push_back(ComplexMatrix());
  }
  for (int j = 1; j <= fock.model().parameter_count(); ++j) {
    const ComplexMatrix x = fock.quadratic(fock.model().derivative(point.lambda, j), st.reference);
    out.push_back(center(u.adjoint() * x * u));
  }
  return out;
}

RealMatrix fock_m(const FockModel& fock, const ParamPoint& point, const FockState& st) {
  const auto forces = centered_forces(fock, point, st, false);
  const int size = fock.model().parameter_count() + 1;
  RealMatrix m = RealMatrix::Zero(size, size);
  const ComplexVector p = st.populations.cast<Complex>();
  for (int j = 1; j < size; ++j) {
    for (int k = j; k < size; ++k) {
      // Σ_m p_m Σ_n A_mn B_nm
      const Complex v = (p.asDiagonal() * forces[j].cwiseProduct(forces[k].transpose()))
                            .sum();
      m(j, k) = m(k, j) = v.real();
    }
  }
  return m;
}

RealMatrix kernel(const FockState& st) {
  const Eigen::Index d = st.energies.size();
  const double beta = st.beta;
  RealMatrix k(d, d);
  for (Eigen::Index m = 0; m < d; ++m) {
    for (Eigen::Index n = 0; n < d; ++n) {
      const double delta = st.energies(m) - st.energies(n);
      const double y = beta * delta;
      const double pm = st.populations(m);
      if (std::abs(y) < 1e-4) {
        k(m, n) = pm * beta * (1.0 + y / 2.0 + y * y / 6.0);
      } else if (delta < 0.0) {
        k(m, n) = pm * std::expm1(y) / delta;
      } else {
        k(m, n) = st.populations(n) * -std::expm1(-y) / delta;
      }
    }
  }
  return k;
}

RealMatrix fock_g(const FockModel& fock, const ParamPoint& point, const FockState& st) {
  const auto forces = centered_forces(fock, point, st, true);
  const int size = fock.model().parameter_count() + 1;
  const ComplexMatrix kern = kernel(st).cast<Complex>();
  RealMatrix g(size, size);
  for (int j = 0; j < size; ++j) {
    for (int k = j; k < size; ++k) {
      const Complex v =
          point.beta * kern.cwiseProduct(forces[j]).cwiseProduct(forces[k].transpose()).sum();
      g(j, k) = g(k, j) = v.real();
    }
  }
  return g;
}

}  // namespace

FockState thermal_density(const FockModel& fock, const ParamPoint& point,
                          double tail_tolerance) {
  return build_state(fock, point, tail_tolerance);
}

MetricTensor metric_m_fock(const FockModel& fock, const ParamPoint& point) {
  return MetricTensor(fock_m(fock, point, thermal_density(fock, point)));
}

MetricTensor metric_g_fock(const FockModel& fock, const ParamPoint& point) {
  return MetricTensor(fock_g(fock, point, thermal_density(fock, point)));
}

double var_work_step(const FockModel& fock, const ParamPoint& from, const ParamPoint& to) {
  const FockState st = thermal_density(fock, from);
  const RealMatrix dg =
      fock.model().coefficients(to.lambda) - fock.model().coefficients(from.lambda);
  const ComplexMatrix dh = st.eigenvectors.adjoint() * fock.quadratic(dg, st.reference) *
                           st.eigenvectors;
  double mean = 0.0;
  double second = 0.0;
  for (Eigen::Index m = 0; m < dh.rows(); ++m) {
    mean += st.populations(m) * dh(m, m).real();
    second += st.populations(m) * dh.row(m).squaredNorm();
  }
  return second - mean * mean;
}

TruncationReport truncation_check(const FockModel& fock, const ParamPoint& point) {
  TruncationReport report;
  report.cutoff = fock.cutoff();
  report.doubled_cutoff = 2 * fock.cutoff();
  auto scalars = [&](const FockModel& f) {
    const FockState st = build_state(f, point, 2.0);
    std::vector<double> v;
    v.push_back((st.energies.array() * st.populations.array()).sum());
    v.push_back(st.log_partition);
    const RealMatrix m = fock_m(f, point, st);
    const RealMatrix g = fock_g(f, point, st);
    for (Eigen::Index i = 0; i < m.size(); ++i) v.push_back(m.data()[i]);
    for (Eigen::Index i = 0; i < g.size(); ++i) v.push_back(g.data()[i]);
    return v;
  };
  const std::vector<double> a = scalars(fock);
  const std::vector<double> b = scalars(FockModel(fock.model(), report.doubled_cutoff));
  double largest = 0.0;
  for (double x : b) largest = std::max(largest, std::abs(x));
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max({std::abs(b[i]), 1e-14 * largest, 1e-300});
    report.drift = std::max(report.drift, std::abs(a[i] - b[i]) / scale);
  }
  report.pass = report.drift < 1e-8;
  return report;
}

}  // namespace thermogeo
