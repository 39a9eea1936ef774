#include "dlap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "dlap/error.hpp"

namespace dlap {

namespace {

bool is_hermitian(const Eigen::MatrixXcd& a) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * scale;
}

void sort_spectrum(Spectrum& s) {
  const auto n = s.eigenvalues.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  const auto& ev = s.eigenvalues;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return ev[i].real() < ev[j].real(); });

  // Within runs of (numerically) equal real parts, order by imaginary part.
  double scale = 1.0;
  for (const auto& z : ev) scale = std::max(scale, std::abs(z));
  const double tie = 1e-10 * scale;
  for (std::size_t begin = 0; begin < n;) {
    std::size_t end = begin + 1;
    while (end < n && ev[order[end]].real() - ev[order[end - 1]].real() <= tie) ++end;
    std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(begin),
                     order.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t i, std::size_t j) { return ev[i].imag() < ev[j].imag(); });
    begin = end;
  }

  std::vector<Complex> sorted(n);
  for (std::size_t k = 0; k < n; ++k) sorted[k] = ev[order[k]];
  if (s.eigenvectors) {
    Eigen::MatrixXcd v(s.eigenvectors->rows(), s.eigenvectors->cols());
    for (std::size_t k = 0; k < n; ++k) {
      v.col(static_cast<Eigen::Index>(k)) = s.eigenvectors->col(static_cast<Eigen::Index>(order[k]));
    }
    s.eigenvectors = std::move(v);
  }
  s.eigenvalues = std::move(sorted);
}

void require_square(Eigen::Index rows, Eigen::Index cols) {
  if (rows != cols || rows < 1) {
    throw Error(ErrorKind::InvalidArgument, "eig needs a non-empty square matrix");
  }
}

// Fixes the phase of a unit vector: first component with modulus above
// rounding is made real and positive.
void normalize_phase(Eigen::VectorXcd& v) {
  const double cutoff = 1e-8 * v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > cutoff) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      return;
    }
  }
}

template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), count / 16 + 1);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  }
}

}  // namespace

namespace {

Spectrum hermitian_eig(const Eigen::MatrixXcd& a, bool vectors) {
  const Eigen::MatrixXcd herm = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      herm, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NoConvergence, "symmetric eigensolver did not converge");
  }
  Spectrum s;
  s.hermitian = true;
  s.eigenvalues.reserve(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) s.eigenvalues.emplace_back(solver.eigenvalues()[i], 0.0);
  if (vectors) s.eigenvectors = solver.eigenvectors();
  return s;
}

bool complex_qr(const Eigen::MatrixXcd& a, const EigOptions& options, Spectrum& s) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver;
  solver.setMaxIterations(options.max_iterations_per_row * a.rows());
  solver.compute(a, options.vectors);
  if (solver.info() != Eigen::Success) return false;
  s.eigenvalues.assign(solver.eigenvalues().begin(), solver.eigenvalues().end());
  if (options.vectors) s.eigenvectors = solver.eigenvectors();
  return true;
}

// Francis double-shift QR on the real Hessenberg form.
bool real_qr(const Eigen::MatrixXd& a, const EigOptions& options, Spectrum& s) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver;
  solver.setMaxIterations(options.max_iterations_per_row * a.rows());
  solver.compute(a, options.vectors);
  if (solver.info() != Eigen::Success) return false;
  s.eigenvalues.assign(solver.eigenvalues().begin(), solver.eigenvalues().end());
  if (options.vectors) s.eigenvectors = solver.eigenvectors();
  return true;
}

// Fixed Householder reflector Q = I - 2uu*/|u|^2 with u = (1, 2, ..., n) + i(n, ..., 1).
// Highly symmetric inputs (circulants) can stall the shift strategy; Q A Q
// breaks the symmetry without changing the spectrum.
Eigen::MatrixXcd reflector(Eigen::Index n) {
  Eigen::VectorXcd u(n);
  for (Eigen::Index i = 0; i < n; ++i) u[i] = Complex(static_cast<double>(i + 1), static_cast<double>(n - i));
  return Eigen::MatrixXcd::Identity(n, n) - 2.0 * u * u.adjoint() / u.squaredNorm();
}

Spectrum general_eig(const Eigen::MatrixXcd& a, const EigOptions& options) {
  Spectrum s;
  if (complex_qr(a, options, s)) return s;
  const Eigen::MatrixXcd q = reflector(a.rows());
  if (complex_qr(q * a * q, options, s)) {
    if (s.eigenvectors) s.eigenvectors = (q * *s.eigenvectors).eval();
    return s;
  }
  throw Error(ErrorKind::NoConvergence,
              "QR iteration exceeded " + std::to_string(options.max_iterations_per_row) + "n iterations");
}

}  // namespace

Spectrum eig(const Eigen::MatrixXcd& a, EigOptions options) {
  require_square(a.rows(), a.cols());
  if (!a.allFinite()) throw Error(ErrorKind::InvalidArgument, "matrix has non-finite entries");
  if (is_hermitian(a)) return hermitian_eig(a, options.vectors);
  Spectrum s = general_eig(a, options);
  sort_spectrum(s);
  return s;
}

Spectrum eig(const Eigen::MatrixXd& a, EigOptions options) {
  require_square(a.rows(), a.cols());
  if (!a.allFinite()) throw Error(ErrorKind::InvalidArgument, "matrix has non-finite entries");
  const Eigen::MatrixXcd ac = a.cast<Complex>();
  if (is_hermitian(ac)) return hermitian_eig(ac, options.vectors);
  Spectrum s;
  if (!real_qr(a, options, s)) s = general_eig(ac, options);
  sort_spectrum(s);
  return s;
}

Spectrum spectrum(const Operator& op, EigOptions options) {
  const Eigen::MatrixXd a = to_euclidean(op);
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale) {
    const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
    return eig(sym, options);
  }
  return eig(op.matrix, options);
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& s) {
  require_square(s.rows(), s.cols());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NoConvergence, "symmetric eigensolver did not converge");
  }
  return solver.eigenvalues();
}

NumericalRangeBoundary numerical_range_boundary(const Operator& op, int n_angles) {
  if (n_angles < 4) throw Error(ErrorKind::InvalidArgument, "numerical range needs >= 4 angles");
  const Eigen::MatrixXcd a = to_euclidean(op).cast<Complex>();
  const auto count = static_cast<std::size_t>(n_angles);

  NumericalRangeBoundary out;
  out.points.resize(count);
  out.angles.resize(count);
  std::vector<char> failed(count, 0);

  parallel_for(count, [&](std::size_t k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / n_angles;
    const Complex rot = std::polar(1.0, theta);
    const Eigen::MatrixXcd rotated = rot * a;
    const Eigen::MatrixXcd herm = 0.5 * (rotated + rotated.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm);
    if (solver.info() != Eigen::Success) {
      failed[k] = 1;
      return;
    }
    Eigen::VectorXcd v = solver.eigenvectors().col(a.rows() - 1);
    normalize_phase(v);
    out.angles[k] = theta;
    out.points[k] = v.dot(a * v) / v.squaredNorm();
  });

  if (std::any_of(failed.begin(), failed.end(), [](char c) { return c != 0; })) {
    throw Error(ErrorKind::NoConvergence, "numerical range sweep: eigensolver failed");
  }
  out.nu = out.points.front().real();
  for (const auto& z : out.points) out.nu = std::min(out.nu, z.real());
  return out;
}

double nu(const Operator& op) { return symmetric_eigenvalues(symmetric_part(op))[0]; }

double nu_sup(const Operator& op) {
  const Eigen::VectorXd ev = symmetric_eigenvalues(symmetric_part(op));
  return ev[ev.size() - 1];
}

double operator_norm(const Operator& op) {
  const Eigen::MatrixXd a = to_euclidean(op);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues()[0];
}

int kernel_dimension(const Operator& op, double tol) {
  const Spectrum s = spectrum(op);
  return static_cast<int>(std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(),
                                        [tol](const Complex& z) { return std::abs(z) <= tol; }));
}

double normality_defect(const Eigen::MatrixXcd& a) {
  const double scale = std::max(1.0, a.squaredNorm());
  return (a * a.adjoint() - a.adjoint() * a).norm() / scale;
}

}  // namespace dlap
