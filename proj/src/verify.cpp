#include "dlap/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "dlap/error.hpp"
#include "dlap/generators.hpp"
#include "dlap/operators.hpp"
#include "dlap/spectral.hpp"

namespace dlap {

double default_tolerance(double lhs, double rhs) {
  return 1e-8 + 1e-8 * std::max(std::abs(lhs), std::abs(rhs));
}

Check make_check(std::string label, double lhs, double rhs) {
  return Check{std::move(label), lhs, rhs, default_tolerance(lhs, rhs), {}};
}

Check make_strict_check(std::string label, double lhs, double rhs) {
  return Check{std::move(label), lhs, rhs, -kStrictMargin, {}};
}

const Check* TheoremReport::worst() const noexcept {
  const Check* w = nullptr;
  for (const auto& c : checks) {
    if (w == nullptr || c.slack() < w->slack()) w = &c;
  }
  return w;
}

double TheoremReport::margin() const noexcept {
  const Check* w = worst();
  return w ? w->margin() : 0.0;
}

double TheoremReport::tolerance() const noexcept {
  const Check* w = worst();
  return w ? w->tolerance : 0.0;
}

bool TheoremReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed(); });
}

TheoremReport merge_reports(std::string theorem_id, std::string instance,
                            const std::vector<TheoremReport>& reports) {
  TheoremReport out{std::move(theorem_id), std::move(instance), {}, {}};
  std::map<std::string, std::size_t> slot;
  for (const auto& r : reports) {
    for (const auto& c : r.checks) {
      Check tagged = c;
      if (tagged.where.empty()) tagged.where = r.instance;
      const auto it = slot.find(c.label);
      if (it == slot.end()) {
        slot.emplace(c.label, out.checks.size());
        out.checks.push_back(std::move(tagged));
      } else if (tagged.slack() < out.checks[it->second].slack()) {
        out.checks[it->second] = std::move(tagged);
      }
    }
  }
  out.notes.push_back("merged " + std::to_string(reports.size()) + " instances");
  return out;
}

std::string describe(const VertexSubset& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s.members()[i]);
  }
  return out + "}";
}

namespace {

void require_kirchhoff(const DirectedGraph& g) {
  const auto report = check_kirchhoff(g);
  if (!report.satisfied) {
    throw Error(ErrorKind::KirchhoffViolated,
                "max |beta+ - beta-| = " + std::to_string(report.max_violation));
  }
}

FunctionVector random_vector(SplitMix64& rng, Eigen::Index n) {
  FunctionVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = 2.0 * rng.uniform() - 1.0;
    const double im = 2.0 * rng.uniform() - 1.0;
    v[i] = {re, im};
  }
  return v;
}

// Keeps the least-slack entry for each label while looping over samples.
void keep_worst(std::vector<Check>& worst, Check c) {
  for (auto& w : worst) {
    if (w.label == c.label) {
      if (c.slack() < w.slack()) w = std::move(c);
      return;
    }
  }
  worst.push_back(std::move(c));
}

// Operators restricted to omega, shared by several theorems.
struct DirichletSet {
  Operator delta;
  Operator normalized;
};

DirichletSet dirichlet_pair(const DirectedGraph& g, const VertexSubset& omega) {
  return {dirichlet(assemble(g, OperatorBase::Delta), omega),
          dirichlet(assemble(g, OperatorBase::NormalizedDelta), omega)};
}

}  // namespace

TheoremReport verify_green(const DirectedGraph& g, int pairs, std::uint64_t seed) {
  require_kirchhoff(g);
  TheoremReport report{"green_formula", "", {}, {}};
  SplitMix64 rng(seed);
  const auto n = static_cast<Eigen::Index>(g.size());
  double worst = 0.0;
  int worst_index = 0;
  for (int i = 0; i < pairs; ++i) {
    const FunctionVector f = random_vector(rng, n);
    const FunctionVector h = random_vector(rng, n);
    const double rel = greens_residual(g, f, h) / greens_scale(g, f, h);
    if (rel > worst) {
      worst = rel;
      worst_index = i;
    }
  }
  Check c{"max residual / scale <= 1e-9", worst, 1e-9, 0.0,
          "pair " + std::to_string(worst_index) + " of " + std::to_string(pairs)};
  report.checks.push_back(std::move(c));
  return report;
}

TheoremReport verify_bounded(const DirectedGraph& g, int n_angles) {
  require_kirchhoff(g);
  TheoremReport report{"normalized_bounds", "", {}, {}};
  const Operator op = assemble(g, OperatorBase::NormalizedDelta);
  report.checks.push_back(make_check("||normalized Delta|| <= 2", operator_norm(op), 2.0));

  const auto range = numerical_range_boundary(op, n_angles);
  double far = 0.0;
  for (const auto& z : range.points) far = std::max(far, std::abs(z - Complex(1.0, 0.0)));
  report.checks.push_back(make_check("numerical range samples: max |z - 1| <= 1", far, 1.0));

  const Spectrum s = spectrum(op);
  double far_ev = 0.0;
  for (const auto& z : s.eigenvalues) far_ev = std::max(far_ev, std::abs(z - Complex(1.0, 0.0)));
  report.checks.push_back(make_check("spectrum: max |lambda - 1| <= 1", far_ev, 1.0));

  if (connectivity(g).connected()) {
    const int dim = kernel_dimension(op, 1e-8);
    report.checks.push_back(Check{"kernel dimension == 1: |dim - 1| <= 0",
                                  static_cast<double>(std::abs(dim - 1)), 0.0, 0.0, {}});
  } else {
    report.notes.push_back("kernel check skipped: graph is disconnected");
  }
  return report;
}

TheoremReport verify_kyfan(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw Error(ErrorKind::InvalidArgument, "Ky Fan check needs a square matrix");
  }
  const auto n = static_cast<std::size_t>(a.rows());
  const Spectrum s = eig(a);
  std::vector<double> re(n);
  for (std::size_t k = 0; k < n; ++k) re[k] = s.eigenvalues[k].real();
  std::sort(re.begin(), re.end());

  const Eigen::MatrixXcd herm = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::NoConvergence, "Re(A) eigensolver");
  const Eigen::VectorXd lam = solver.eigenvalues();

  TheoremReport report{"ky_fan", "", {}, {}};
  double lhs = 0.0;
  double rhs = 0.0;
  for (std::size_t q = 1; q <= n; ++q) {
    lhs += re[n - q];
    rhs += lam[static_cast<Eigen::Index>(n - q)];
    Check c = make_check("top-q partial sums", lhs, rhs);
    c.where = "q=" + std::to_string(q);
    keep_worst(report.checks, std::move(c));
  }
  Check eq{"q=n equality |sum Re lambda - trace Re A|", std::abs(lhs - rhs), 0.0,
           default_tolerance(lhs, rhs), "q=" + std::to_string(n)};
  report.checks.push_back(std::move(eq));
  return report;
}

TheoremReport verify_dirichlet_bounds(const DirectedGraph& g, const VertexSubset& omega) {
  require_kirchhoff(g);
  if (omega.empty()) throw Error(ErrorKind::EmptySubset, "Dirichlet bounds on empty set");
  if (boundaries(g, omega).vertex_boundary.empty()) {
    throw Error(ErrorKind::PreconditionViolated,
                "Dirichlet bounds need a non-empty vertex boundary (omega = V?)");
  }
  if (!connectivity(g).connected()) {
    throw Error(ErrorKind::Disconnected, "Dirichlet bounds need a connected graph");
  }
  const Operator op = dirichlet(assemble(g, OperatorBase::NormalizedDelta), omega);
  const Spectrum s = spectrum(op);
  const Eigen::VectorXd lam_re = symmetric_eigenvalues(symmetric_part(op));
  const double re1 = s.eigenvalues.front().real();
  const double ren = s.eigenvalues.back().real();
  const double l1 = lam_re[0];
  const double ln = lam_re[lam_re.size() - 1];

  TheoremReport report{"dirichlet_bounds", describe(omega), {}, {}};
  report.checks.push_back(make_strict_check("0 < Re lambda_1", 0.0, re1));
  report.checks.push_back(make_check("Re lambda_1 <= 1", re1, 1.0));
  report.checks.push_back(make_check("lambda_1(Re) + lambda_n(Re) <= 2", l1 + ln, 2.0));
  report.checks.push_back(make_check("lambda_1(Re) <= Re lambda_1", l1, re1));
  report.checks.push_back(make_strict_check("Re lambda_n < 2", ren, 2.0));
  return report;
}

TheoremReport verify_cheeger_sandwich(const DirectedGraph& g, const VertexSubset& omega) {
  require_kirchhoff(g);
  if (omega.size() > kMaxExactSubset) {
    throw Error(ErrorKind::SubsetTooLarge, "sandwich needs exact Cheeger constants");
  }
  const double h = cheeger_exact(g, omega, Normalization::ByMeasure).value;
  const double ht = cheeger_exact(g, omega, Normalization::ByBetaPlus).value;
  const auto bounds = m_M_constants(g, omega);
  const auto ops = dirichlet_pair(g, omega);
  const double nu_delta = nu(ops.delta);
  const double nu_norm = nu(ops.normalized);

  TheoremReport report{"cheeger_sandwich", describe(omega), {}, {}};
  report.checks.push_back(make_check("h^2/8 <= M nu(Delta^D)", h * h / 8.0, bounds.M_omega * nu_delta));
  report.checks.push_back(make_check("M nu(Delta^D) <= M h/2", bounds.M_omega * nu_delta,
                                     0.5 * bounds.M_omega * h));
  report.checks.push_back(make_check("h~^2/8 <= nu(normalized^D)", ht * ht / 8.0, nu_norm));
  report.checks.push_back(make_check("nu(normalized^D) <= h~/2", nu_norm, 0.5 * ht));
  report.checks.push_back(
      make_check("m h~^2/8 <= nu(Delta^D)", bounds.m_omega * ht * ht / 8.0, nu_delta));
  return report;
}

TheoremReport verify_fujiwara(const DirectedGraph& g, const VertexSubset& omega,
                              int random_vectors, int n_angles, std::uint64_t seed) {
  require_kirchhoff(g);
  if (omega.size() > kMaxExactSubset) {
    throw Error(ErrorKind::SubsetTooLarge, "Fujiwara bounds need an exact Cheeger constant");
  }
  const double ht = cheeger_exact(g, omega, Normalization::ByBetaPlus).value;
  const double root = std::sqrt(std::max(0.0, 4.0 - ht * ht));
  const auto bounds = m_M_constants(g, omega);
  const auto ops = dirichlet_pair(g, omega);
  const double lower = bounds.m_omega * (2.0 - root);
  const double upper = bounds.M_omega * (2.0 + root);

  TheoremReport report{"fujiwara_bounds", describe(omega), {}, {}};
  report.checks.push_back(make_check("m(2 - sqrt(4 - h~^2)) <= 2 inf Re W", lower, 2.0 * nu(ops.delta)));
  report.checks.push_back(make_check("2 sup Re W <= M(2 + sqrt(4 - h~^2))", 2.0 * nu_sup(ops.delta), upper));

  const auto range = numerical_range_boundary(ops.delta, n_angles);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& z : range.points) {
    lo = std::min(lo, z.real());
    hi = std::max(hi, z.real());
  }
  report.checks.push_back(make_check("lower bound <= 2 min Re(samples)", lower, 2.0 * lo));
  report.checks.push_back(make_check("2 max Re(samples) <= upper bound", 2.0 * hi, upper));

  // Rayleigh quotients: lambda = (Delta^D g, g)_m with ||g||_m = 1 and
  // r = 2 Re(normalized^D g, g)_{beta+} / (g, g)_{beta+}.
  SplitMix64 rng(seed);
  const Eigen::MatrixXcd delta = ops.delta.matrix.cast<Complex>();
  const Eigen::MatrixXcd norm = ops.normalized.matrix.cast<Complex>();
  for (int i = 0; i < random_vectors; ++i) {
    FunctionVector v = random_vector(rng, ops.delta.dim());
    v /= std::sqrt(inner(ops.delta.metric, v, v).real());
    const double two_re_lambda = 2.0 * inner(ops.delta.metric, delta * v, v).real();
    const double r = 2.0 * inner(ops.normalized.metric, norm * v, v).real() /
                     inner(ops.normalized.metric, v, v).real();
    const std::string where = describe(omega) + " vector " + std::to_string(i);
    Check a = make_check("m r(g) <= 2 Re lambda(g)", bounds.m_omega * r, two_re_lambda);
    Check b = make_check("2 Re lambda(g) <= M r(g)", two_re_lambda, bounds.M_omega * r);
    Check c = make_check("2 - sqrt(4 - h~^2) <= r(g)", 2.0 - root, r);
    Check d = make_check("r(g) <= 2 + sqrt(4 - h~^2)", r, 2.0 + root);
    for (Check* x : {&a, &b, &c, &d}) {
      x->where = where;
      keep_worst(report.checks, std::move(*x));
    }
  }
  return report;
}

TheoremReport verify_ess_bound_consistency(const DirectedGraph& g, const Filtration& filt,
                                           ProfileOptions options) {
  require_kirchhoff(g);
  const InfinityProfile profile = infinity_profile(g, filt, options);
  if (profile.levels.size() < 2) {
    throw Error(ErrorKind::EmptyComplement, "need at least two levels with non-empty complement");
  }
  TheoremReport report{"essential_spectrum_bound", "", {}, {}};
  const auto& rows = profile.levels;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    Check c = make_check("nu(Delta^D on V_n^c) nondecreasing", rows[i].nu_dirichlet,
                         rows[i + 1].nu_dirichlet);
    c.where = "levels " + std::to_string(rows[i].level) + "->" + std::to_string(rows[i + 1].level);
    keep_worst(report.checks, std::move(c));
  }
  for (const auto& row : rows) {
    if (row.h_tilde_mode != CheegerMode::Exact) {
      report.notes.push_back("level " + std::to_string(row.level) +
                             ": h~ is an upper bound, level bound not checked");
      continue;
    }
    Check c = make_check("m_c h~_c^2/8 <= nu(Delta^D on V_n^c)", row.ess_lower_bound,
                         row.nu_dirichlet);
    c.where = "level " + std::to_string(row.level);
    keep_worst(report.checks, std::move(c));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Suites

namespace {

std::vector<VertexSubset> subsets_up_to(std::size_t n, std::size_t max_size, bool allow_full) {
  std::vector<VertexSubset> out;
  const std::uint32_t total = 1u << n;
  for (std::uint32_t mask = 1; mask < total; ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    if (size > max_size || (!allow_full && size == n)) continue;
    std::vector<VertexId> ids;
    for (std::size_t v = 0; v < n; ++v) {
      if ((mask >> v) & 1u) ids.push_back(v);
    }
    out.emplace_back(std::move(ids), n);
  }
  return out;
}

// Singletons, co-singletons and BFS balls with their complements (all proper).
std::vector<VertexSubset> sampled_subsets(const DirectedGraph& g) {
  const std::size_t n = g.size();
  std::vector<VertexSubset> out;
  for (std::size_t x = 0; x < std::min<std::size_t>(n, 4); ++x) {
    out.emplace_back(std::vector<VertexId>{x}, n);
    out.push_back(VertexSubset({x}, n).complement());
  }
  if (connectivity(g).connected()) {
    const Filtration f = build_filtration(g, 0);
    for (const auto& level : f.levels()) {
      if (level.size() == n) continue;
      out.push_back(level);
      out.push_back(level.complement());
    }
  }
  std::sort(out.begin(), out.end(), [](const VertexSubset& a, const VertexSubset& b) {
    return std::lexicographical_compare(a.members().begin(), a.members().end(),
                                        b.members().begin(), b.members().end());
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::vector<TheoremReport> verify_graph(const std::string& name, const DirectedGraph& g,
                                        const SuiteOptions& options) {
  std::vector<TheoremReport> out;
  auto add = [&](TheoremReport r, const std::string& detail) {
    r.instance = detail.empty() ? name : name + " " + detail;
    out.push_back(std::move(r));
  };

  add(verify_green(g, options.green_pairs), "");
  add(verify_bounded(g, options.n_angles), "");
  add(verify_kyfan(assemble(g, OperatorBase::NormalizedDelta).matrix.cast<Complex>()),
      "normalized Delta");
  add(verify_kyfan(assemble(g, OperatorBase::Delta).matrix.cast<Complex>()), "Delta");

  const std::size_t n = g.size();
  const bool connected = connectivity(g).connected();

  if (connected && n >= 2) {
    const auto omegas = n <= options.dirichlet_exhaustive_max_n ? subsets_up_to(n, n - 1, false)
                                                                : sampled_subsets(g);
    std::vector<TheoremReport> parts;
    for (const auto& omega : omegas) parts.push_back(verify_dirichlet_bounds(g, omega));
    add(merge_reports("dirichlet_bounds", "", parts),
        "all proper subsets (" + std::to_string(parts.size()) + ")");
  } else {
    TheoremReport skipped{"dirichlet_bounds", "", {}, {"skipped: graph is disconnected"}};
    add(std::move(skipped), "");
  }

  {
    const bool exhaustive = n <= options.cheeger_exhaustive_max_n;
    std::vector<VertexSubset> omegas;
    if (exhaustive) {
      omegas = subsets_up_to(n, options.cheeger_exhaustive_max_omega, true);
    } else {
      for (auto& s : sampled_subsets(g)) {
        if (s.size() <= kMaxExactSubset) omegas.push_back(std::move(s));
      }
    }
    std::vector<TheoremReport> sandwich;
    std::vector<TheoremReport> fujiwara;
    for (const auto& omega : omegas) {
      sandwich.push_back(verify_cheeger_sandwich(g, omega));
      fujiwara.push_back(verify_fujiwara(g, omega, options.fujiwara_vectors));
    }
    const std::string detail =
        (exhaustive ? "all subsets with |omega| <= " +
                          std::to_string(options.cheeger_exhaustive_max_omega)
                    : std::string("sampled subsets")) +
        " (" + std::to_string(omegas.size()) + ")";
    add(merge_reports("cheeger_sandwich", "", sandwich), detail);
    add(merge_reports("fujiwara_bounds", "", fujiwara), detail);
  }

  if (connected) {
    const Filtration filt = build_filtration(g, 0);
    std::size_t usable = 0;
    for (const auto& level : filt.levels()) usable += level.size() < n ? 1 : 0;
    if (usable >= 2) {
      add(verify_ess_bound_consistency(g, filt), "BFS filtration from 0");
    } else {
      TheoremReport skipped{"essential_spectrum_bound", "", {}, {"skipped: fewer than two usable levels"}};
      add(std::move(skipped), "BFS filtration from 0");
    }
  }
  return out;
}

std::vector<TheoremReport> verify_corpus(const SuiteOptions& options) {
  std::vector<TheoremReport> out;
  for (const auto& [name, g] : corpus()) {
    auto reports = verify_graph(name, g, options);
    out.insert(out.end(), std::make_move_iterator(reports.begin()),
               std::make_move_iterator(reports.end()));
  }

  SplitMix64 rng(kDefaultVerifySeed);
  std::vector<TheoremReport> kyfan;
  for (int i = 0; i < 100; ++i) {
    const auto size = static_cast<Eigen::Index>(rng.uniform_int(2, 10));
    Eigen::MatrixXcd a(size, size);
    for (Eigen::Index r = 0; r < size; ++r) {
      for (Eigen::Index c = 0; c < size; ++c) {
        a(r, c) = Complex(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
      }
    }
    auto report = verify_kyfan(a);
    report.instance = "random " + std::to_string(size) + "x" + std::to_string(size) + " #" + std::to_string(i);
    kyfan.push_back(std::move(report));
  }
  out.push_back(merge_reports("ky_fan", "random complex matrices (100)", kyfan));

  for (double gamma : {1.0, 2.0}) {
    const DirectedGraph g = gen_layered_heavy(6, 4, gamma);
    auto report = verify_ess_bound_consistency(g, filtration_from_levels(g, layer_levels(6, 4)));
    report.instance = "layered L=6 width=4 gamma=" + std::to_string(static_cast<int>(gamma)) +
                      ", layer filtration";
    out.push_back(std::move(report));
  }
  return out;
}

}  // namespace dlap
