#include "dlap/operators.hpp"

#include <cmath>

#include "dlap/error.hpp"

namespace dlap {

bool OperatorKind::normalized() const noexcept {
  return base == OperatorBase::NormalizedDelta || base == OperatorBase::NormalizedDeltaPrime ||
         base == OperatorBase::NormalizedH;
}

namespace {

constexpr std::pair<OperatorBase, std::string_view> kBaseNames[] = {
    {OperatorBase::Delta, "Delta"},
    {OperatorBase::DeltaPrime, "DeltaPrime"},
    {OperatorBase::H, "H"},
    {OperatorBase::NormalizedDelta, "NormalizedDelta"},
    {OperatorBase::NormalizedDeltaPrime, "NormalizedDeltaPrime"},
    {OperatorBase::NormalizedH, "NormalizedH"},
};

std::string_view base_name(OperatorBase base) {
  for (const auto& [b, name] : kBaseNames) {
    if (b == base) return name;
  }
  return "Unknown";
}

}  // namespace

std::string to_string(OperatorKind kind) {
  const std::string base(base_name(kind.base));
  return kind.dirichlet ? "Dirichlet(" + base + ")" : base;
}

OperatorKind parse_operator_kind(std::string_view text) {
  OperatorKind kind;
  constexpr std::string_view prefix = "Dirichlet(";
  if (text.starts_with(prefix) && text.ends_with(")")) {
    kind.dirichlet = true;
    text = text.substr(prefix.size(), text.size() - prefix.size() - 1);
  }
  for (const auto& [b, name] : kBaseNames) {
    if (name == text) {
      kind.base = b;
      return kind;
    }
  }
  throw Error(ErrorKind::SchemaViolation, "unknown operator kind '" + std::string(text) + "'");
}

Operator assemble(const DirectedGraph& g, OperatorBase base) {
  const auto n = static_cast<Eigen::Index>(g.size());
  const OperatorKind kind{base, false};
  Eigen::VectorXd w(n);
  for (Eigen::Index x = 0; x < n; ++x) {
    w[x] = kind.normalized() ? g.beta_plus()[x] : g.measure(x);
  }

  const bool forward = base == OperatorBase::Delta || base == OperatorBase::NormalizedDelta ||
                       base == OperatorBase::H || base == OperatorBase::NormalizedH;
  const bool backward = base == OperatorBase::DeltaPrime ||
                        base == OperatorBase::NormalizedDeltaPrime || base == OperatorBase::H ||
                        base == OperatorBase::NormalizedH;

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    const double diag = g.beta_plus()[x] / w[x];
    a(x, x) = (forward && backward) ? 2.0 * diag : diag;
  }
  for (const Edge& e : g.edges()) {
    const auto x = static_cast<Eigen::Index>(e.from);
    const auto y = static_cast<Eigen::Index>(e.to);
    if (forward) a(x, y) -= e.weight / w[x];
    if (backward) a(y, x) -= e.weight / w[y];
  }

  Operator op{std::move(a), std::move(w), kind, {}};
  op.support.resize(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) op.support[x] = x;
  return op;
}

Operator dirichlet(const Operator& op, const VertexSubset& omega) {
  if (omega.empty()) throw Error(ErrorKind::EmptySubset, "Dirichlet restriction to empty set");
  if (omega.universe() != static_cast<std::size_t>(op.dim())) {
    throw Error(ErrorKind::VertexOutOfRange, "subset universe does not match operator dimension");
  }
  const auto idx = omega.members();
  const auto k = static_cast<Eigen::Index>(idx.size());
  Operator out;
  out.matrix.resize(k, k);
  out.metric.resize(k);
  out.support.resize(idx.size());
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto xi = static_cast<Eigen::Index>(idx[i]);
    out.metric[i] = op.metric[xi];
    out.support[i] = op.support[idx[i]];
    for (Eigen::Index j = 0; j < k; ++j) out.matrix(i, j) = op.matrix(xi, static_cast<Eigen::Index>(idx[j]));
  }
  out.kind = op.kind;
  out.kind.dirichlet = true;
  return out;
}

std::complex<double> inner(const Eigen::VectorXd& metric, const FunctionVector& f,
                           const FunctionVector& g) {
  std::complex<double> s = 0.0;
  for (Eigen::Index x = 0; x < metric.size(); ++x) s += metric[x] * f[x] * std::conj(g[x]);
  return s;
}

namespace {

void require_length(const DirectedGraph& g, const FunctionVector& f) {
  if (static_cast<std::size_t>(f.size()) != g.size()) {
    throw Error(ErrorKind::InvalidArgument, "function length does not match vertex count");
  }
}

std::complex<double> green_edge_sum(const DirectedGraph& g, const FunctionVector& f,
                                    const FunctionVector& h) {
  std::complex<double> s = 0.0;
  for (const Edge& e : g.edges()) {
    const auto x = static_cast<Eigen::Index>(e.from);
    const auto y = static_cast<Eigen::Index>(e.to);
    s += e.weight * (f[x] - f[y]) * std::conj(h[x] - h[y]);
  }
  return s;
}

}  // namespace

double greens_residual(const DirectedGraph& g, const FunctionVector& f, const FunctionVector& h) {
  require_length(g, f);
  require_length(g, h);
  const auto report = check_kirchhoff(g);
  if (!report.satisfied) {
    throw Error(ErrorKind::KirchhoffViolated,
                "Green's formula needs beta+ = beta- (max violation " +
                    std::to_string(report.max_violation) + ")");
  }
  const Operator delta = assemble(g, OperatorBase::Delta);
  const FunctionVector df = delta.matrix.cast<std::complex<double>>() * f;
  const FunctionVector dh = delta.matrix.cast<std::complex<double>>() * h;
  const auto lhs = inner(delta.metric, df, h) + std::conj(inner(delta.metric, dh, f));
  return std::abs(lhs - green_edge_sum(g, f, h));
}

double greens_scale(const DirectedGraph& g, const FunctionVector& f, const FunctionVector& h) {
  require_length(g, f);
  require_length(g, h);
  double s = 0.0;
  for (const Edge& e : g.edges()) {
    const auto x = static_cast<Eigen::Index>(e.from);
    const auto y = static_cast<Eigen::Index>(e.to);
    s += e.weight * (std::abs(f[x]) + std::abs(f[y])) * (std::abs(h[x]) + std::abs(h[y]));
  }
  return std::max(1.0, s);
}

double quadratic_form(const Operator& op_delta, const FunctionVector& f) {
  if (op_delta.kind.base != OperatorBase::Delta &&
      op_delta.kind.base != OperatorBase::NormalizedDelta) {
    throw Error(ErrorKind::InvalidArgument,
                "quadratic form needs a Delta operator, got " + to_string(op_delta.kind));
  }
  if (f.size() != op_delta.dim()) {
    throw Error(ErrorKind::InvalidArgument, "function length does not match operator dimension");
  }
  const FunctionVector af = op_delta.matrix.cast<std::complex<double>>() * f;
  return 2.0 * inner(op_delta.metric, af, f).real();
}

double edge_energy(const DirectedGraph& g, const FunctionVector& f) {
  require_length(g, f);
  return green_edge_sum(g, f, f).real();
}

Eigen::MatrixXd to_euclidean(const Operator& op) {
  if ((op.metric.array() <= 0.0).any()) {
    throw Error(ErrorKind::InvalidArgument, "metric must be strictly positive");
  }
  const Eigen::VectorXd s = op.metric.array().sqrt();
  return s.asDiagonal() * op.matrix * s.cwiseInverse().asDiagonal();
}

Eigen::MatrixXd symmetric_part(const Operator& op) {
  const Eigen::MatrixXd a = to_euclidean(op);
  return 0.5 * (a + a.transpose());
}

}  // namespace dlap
