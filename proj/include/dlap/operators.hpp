#pragma once

#include <Eigen/Dense>
#include <string>
#include <string_view>
#include <vector>

#include "dlap/graph.hpp"

namespace dlap {

enum class OperatorBase {
  Delta,
  DeltaPrime,
  H,
  NormalizedDelta,
  NormalizedDeltaPrime,
  NormalizedH,
};

struct OperatorKind {
  OperatorBase base = OperatorBase::Delta;
  bool dirichlet = false;

  bool normalized() const noexcept;
  bool operator==(const OperatorKind&) const = default;
};

/// "Delta", "NormalizedH", "Dirichlet(Delta)", ...
std::string to_string(OperatorKind kind);
OperatorKind parse_operator_kind(std::string_view text);

using FunctionVector = Eigen::VectorXcd;

/// A real dense matrix acting on functions over `support` (graph vertex ids),
/// together with the weights of its inner product (f, g) = sum w f conj(g).
struct Operator {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd metric;
  OperatorKind kind;
  std::vector<VertexId> support;

  Eigen::Index dim() const noexcept { return matrix.rows(); }
};

/// Row x of Delta: beta+(x)/m(x) on the diagonal, -b(x,y)/m(x) off it.
/// DeltaPrime always uses the general formal-adjoint formula, so its row sums
/// equal the Schroedinger potential q when the Kirchhoff condition fails.
/// The normalized kinds replace m by beta+ both in the matrix and the metric.
Operator assemble(const DirectedGraph& g, OperatorBase kind);

/// Principal submatrix on omega (zero extension, apply, restrict).
Operator dirichlet(const Operator& op, const VertexSubset& omega);

/// (f, g)_w = sum_x w(x) f(x) conj(g(x)).
std::complex<double> inner(const Eigen::VectorXd& metric, const FunctionVector& f,
                           const FunctionVector& g);

/// |(Delta f, h)_m + conj((Delta h, f)_m) - sum_E b(x,y)(f(x)-f(y))conj(h(x)-h(y))|.
/// Throws KirchhoffViolated unless the graph satisfies the Kirchhoff condition.
double greens_residual(const DirectedGraph& g, const FunctionVector& f, const FunctionVector& h);

/// Magnitude of the terms entering greens_residual (for relative thresholds).
double greens_scale(const DirectedGraph& g, const FunctionVector& f, const FunctionVector& h);

/// 2 Re (A f, f)_metric for A of kind Delta / NormalizedDelta (or their Dirichlet
/// restrictions).
double quadratic_form(const Operator& op_delta, const FunctionVector& f);

/// sum over directed edges of b(x,y)|f(x)-f(y)|^2, f given on all vertices.
double edge_energy(const DirectedGraph& g, const FunctionVector& f);

/// W^{1/2} A W^{-1/2} with W = diag(metric).
Eigen::MatrixXd to_euclidean(const Operator& op);

/// Symmetric part (A + A^T)/2 of to_euclidean(op).
Eigen::MatrixXd symmetric_part(const Operator& op);

}  // namespace dlap
