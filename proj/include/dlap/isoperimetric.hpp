#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dlap/graph.hpp"

namespace dlap {

enum class CheegerMode { Exact, UpperBound };
enum class Normalization {
  ByMeasure,   // h: denominator m(U)
  ByBetaPlus,  // h-tilde: denominator beta+(U)
};

std::string_view to_string(CheegerMode mode) noexcept;
std::string_view to_string(Normalization normalization) noexcept;
Normalization parse_normalization(std::string_view text);

struct CheegerResult {
  double value = 0.0;
  VertexSubset witness;
  CheegerMode mode = CheegerMode::Exact;
  Normalization normalization = Normalization::ByMeasure;
};

/// Largest |omega| accepted by cheeger_exact (2^22 subsets).
inline constexpr std::size_t kMaxExactSubset = 22;

/// b(boundary_E U) / m(U) or / beta+(U).
double cheeger_ratio(const DirectedGraph& g, const VertexSubset& u, Normalization normalization);

/// Minimum of cheeger_ratio over every non-empty U inside omega. Ties go to the
/// lexicographically smallest subset. Throws SubsetTooLarge above kMaxExactSubset.
CheegerResult cheeger_exact(const DirectedGraph& g, const VertexSubset& omega,
                            Normalization normalization);

/// Upper bound from sweep cuts over the two lowest Dirichlet eigenvectors of the
/// symmetrised operator on omega, polished by greedy single-vertex moves.
CheegerResult cheeger_heuristic(const DirectedGraph& g, const VertexSubset& omega,
                                Normalization normalization);

/// Exact when |omega| <= exact_limit, heuristic otherwise.
CheegerResult cheeger(const DirectedGraph& g, const VertexSubset& omega,
                      Normalization normalization, std::size_t exact_limit = kMaxExactSubset);

struct RatioBounds {
  double m_omega;  // min beta+(x)/m(x) over omega
  double M_omega;  // max beta+(x)/m(x) over omega
};

RatioBounds m_M_constants(const DirectedGraph& g, const VertexSubset& omega);

/// Nested vertex sets V_1 < V_2 < ... < V_N = V, each inducing a connected subgraph.
class Filtration {
 public:
  const std::vector<VertexSubset>& levels() const noexcept { return levels_; }
  std::size_t size() const noexcept { return levels_.size(); }

 private:
  friend Filtration build_filtration(const DirectedGraph& g, VertexId root);
  friend Filtration filtration_from_levels(const DirectedGraph& g, std::vector<VertexSubset> levels);
  std::vector<VertexSubset> levels_;
};

/// Breadth-first balls around root in the undirected skeleton. Throws Disconnected.
Filtration build_filtration(const DirectedGraph& g, VertexId root);

/// Validates caller-supplied levels (strictly nested, connected, exhausting).
Filtration filtration_from_levels(const DirectedGraph& g, std::vector<VertexSubset> levels);

struct LevelProfile {
  std::size_t level = 0;  // 1-based index n of V_n
  std::size_t complement_size = 0;
  double m_c = 0.0;
  double M_c = 0.0;
  double h_c = 0.0;
  double h_tilde_c = 0.0;
  CheegerMode h_mode = CheegerMode::Exact;
  CheegerMode h_tilde_mode = CheegerMode::Exact;
  /// nu of the Dirichlet restriction of Delta to the complement.
  double nu_dirichlet = 0.0;
  /// m_c * h_tilde_c^2 / 8.
  double ess_lower_bound = 0.0;
  /// The h-tilde witness meets the outermost shell V_N \ V_{N-1}, where the
  /// truncation cuts the graph.
  bool witness_touches_frontier = false;
};

struct InfinityProfile {
  std::vector<LevelProfile> levels;
  bool m_nondecreasing = true;
  bool M_nonincreasing = true;
  bool h_nondecreasing = true;
  bool h_tilde_nondecreasing = true;
  bool nu_nondecreasing = true;
  bool heuristic_used = false;
  /// Set when some sequence the theory declares monotone is not, which can only
  /// come from heuristic Cheeger estimates.
  bool monotonicity_flagged = false;
  bool heavy_end = false;

  std::vector<double> m_trend() const;
  std::vector<double> M_trend() const;
  std::vector<double> h_trend() const;
  std::vector<double> h_tilde_trend() const;
  std::vector<double> nu_trend() const;
};

struct ProfileOptions {
  std::size_t exact_limit = kMaxExactSubset;
  /// heavy_end needs m_c(last) >= heavy_ratio * m_c(first), nondecreasing.
  double heavy_ratio = 10.0;
};

/// Per-level estimates on the complements V_n^c (levels with empty complement
/// are skipped). Throws EmptyComplement when no level has a non-empty complement.
InfinityProfile infinity_profile(const DirectedGraph& g, const Filtration& filt,
                                 ProfileOptions options = {});

}  // namespace dlap
