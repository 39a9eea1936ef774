#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "dlap/operators.hpp"

namespace dlap {

using Complex = std::complex<double>;

struct Spectrum {
  /// Ascending real part; eigenvalues whose real parts agree to rounding are
  /// ordered by imaginary part.
  std::vector<Complex> eigenvalues;
  /// Column k belongs to eigenvalues[k].
  std::optional<Eigen::MatrixXcd> eigenvectors;
  /// True when the input was Hermitian and a symmetric solver was used.
  bool hermitian = false;
};

struct EigOptions {
  bool vectors = false;
  /// Iteration cap for the non-Hermitian QR iteration, as a multiple of n.
  int max_iterations_per_row = 100;
};

/// All eigenvalues of a dense square matrix. Hermitian input goes to a
/// symmetric solver (real eigenvalues, ascending); everything else through
/// Hessenberg reduction and shifted QR. Throws NoConvergence.
Spectrum eig(const Eigen::MatrixXcd& a, EigOptions options = {});
Spectrum eig(const Eigen::MatrixXd& a, EigOptions options = {});

/// Eigenvalues of an operator; metric-self-adjoint operators are routed to the
/// symmetric solver after conjugation to the Euclidean frame.
Spectrum spectrum(const Operator& op, EigOptions options = {});

/// Ascending eigenvalues of a real symmetric matrix.
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& s);

struct NumericalRangeBoundary {
  std::vector<Complex> points;
  std::vector<double> angles;
  /// min Re over the samples (reporting only; see nu()).
  double nu = 0.0;
};

/// Rotation sweep over theta_k = 2 pi k / n_angles: the top eigenvector v of
/// Re(e^{i theta} A) gives the boundary point v* A v, A = to_euclidean(op).
NumericalRangeBoundary numerical_range_boundary(const Operator& op, int n_angles);

/// inf Re W(op): smallest eigenvalue of the metric-symmetric part.
double nu(const Operator& op);

/// sup Re W(op): largest eigenvalue of the metric-symmetric part.
double nu_sup(const Operator& op);

/// Largest singular value of to_euclidean(op).
double operator_norm(const Operator& op);

/// Number of eigenvalues with modulus <= tol.
int kernel_dimension(const Operator& op, double tol = 1e-8);

/// ||A A^H - A^H A||_F / max(1, ||A||_F^2).
double normality_defect(const Eigen::MatrixXcd& a);

}  // namespace dlap
