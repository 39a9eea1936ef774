#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "dlap/graph.hpp"
#include "dlap/isoperimetric.hpp"

namespace dlap {

/// One inequality lhs <= rhs. Passes when rhs - lhs >= -tolerance; strict
/// inequalities carry a negative tolerance (they need rhs - lhs >= |tolerance|).
struct Check {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  /// Which instance (subset, vector index, ...) produced these numbers.
  std::string where;

  double margin() const noexcept { return rhs - lhs; }
  double slack() const noexcept { return margin() + tolerance; }
  bool passed() const noexcept { return slack() >= 0.0; }
};

/// 1e-8 absolute plus 1e-8 relative to the largest magnitude in the chain.
double default_tolerance(double lhs, double rhs);

/// Margin used for strict inequalities such as 0 < Re lambda_1.
inline constexpr double kStrictMargin = 1e-12;

Check make_check(std::string label, double lhs, double rhs);
Check make_strict_check(std::string label, double lhs, double rhs);

struct TheoremReport {
  std::string theorem_id;
  std::string instance;
  std::vector<Check> checks;
  std::vector<std::string> notes;

  /// The check with the least slack decides margin and tolerance, so that
  /// passed() == (margin() >= -tolerance()).
  const Check* worst() const noexcept;
  double margin() const noexcept;
  double tolerance() const noexcept;
  bool passed() const noexcept;
};

/// Keeps, per check label, the entry with the least slack across `reports`.
TheoremReport merge_reports(std::string theorem_id, std::string instance,
                            const std::vector<TheoremReport>& reports);

inline constexpr std::uint64_t kDefaultVerifySeed = 0x5eed2024ULL;

/// Green's formula on `pairs` random complex pairs; needs the Kirchhoff condition.
TheoremReport verify_green(const DirectedGraph& g, int pairs = 100,
                           std::uint64_t seed = kDefaultVerifySeed);

/// ||normalized Delta|| <= 2, numerical range and spectrum in the disc |z - 1| <= 1,
/// simple kernel when the graph is connected.
TheoremReport verify_bounded(const DirectedGraph& g, int n_angles = 360);

/// Partial sums of the q largest Re lambda_k(A) against those of lambda_k(Re A).
TheoremReport verify_kyfan(const Eigen::MatrixXcd& a);

/// Eigenvalue bounds for the normalized Dirichlet Laplacian on omega != V.
TheoremReport verify_dirichlet_bounds(const DirectedGraph& g, const VertexSubset& omega);

/// h^2/8 <= M nu(Delta^D) <= M h/2, h~^2/8 <= nu(normalized^D) <= h~/2 and
/// m h~^2/8 <= nu(Delta^D), with exact Cheeger constants.
TheoremReport verify_cheeger_sandwich(const DirectedGraph& g, const VertexSubset& omega);

/// Real-part window m(2 - sqrt(4 - h~^2)) <= 2 Re lambda <= M(2 + sqrt(4 - h~^2)) on
/// W(Delta^D), and the Rayleigh-quotient comparison on random vectors.
TheoremReport verify_fujiwara(const DirectedGraph& g, const VertexSubset& omega,
                              int random_vectors = 100, int n_angles = 36,
                              std::uint64_t seed = kDefaultVerifySeed);

/// nu(Delta^D on V_n^c) nondecreasing in n, and m h~^2/8 <= nu at every level with
/// an exact h~. Throws EmptyComplement with fewer than two usable levels.
TheoremReport verify_ess_bound_consistency(const DirectedGraph& g, const Filtration& filt,
                                           ProfileOptions options = {});

struct SuiteOptions {
  std::size_t dirichlet_exhaustive_max_n = 9;
  std::size_t cheeger_exhaustive_max_n = 10;
  std::size_t cheeger_exhaustive_max_omega = 8;
  int green_pairs = 100;
  int fujiwara_vectors = 100;
  int n_angles = 360;
};

/// Every applicable check on one graph, sweeps merged into one report per theorem.
std::vector<TheoremReport> verify_graph(const std::string& name, const DirectedGraph& g,
                                        const SuiteOptions& options = {});

/// verify_graph over the generator corpus, Ky Fan on random complex matrices and
/// the heavy-end layered family.
std::vector<TheoremReport> verify_corpus(const SuiteOptions& options = {});

/// "{0,1,4}"
std::string describe(const VertexSubset& s);

}  // namespace dlap
