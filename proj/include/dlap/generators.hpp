#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dlap/graph.hpp"

namespace dlap {

/// SplitMix64 (Steele, Lea, Flood): the state advances by 0x9e3779b97f4a7c15
/// and each output is the standard xor-shift-multiply finaliser of the state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept;
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform integer in [lo, hi].
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) noexcept;

 private:
  std::uint64_t state_;
};

/// One directed cycle v0 -> v1 -> ... -> v0 carrying a constant weight.
struct WeightedCycle {
  std::vector<VertexId> vertices;
  double weight = 1.0;
};

/// Sum of cycle circulations on n vertices (m = 1), parallel contributions merged
/// by summation. Throws DegenerateInstance if a vertex is left without edges.
DirectedGraph superpose_cycles(std::size_t n, const std::vector<WeightedCycle>& cycles);

DirectedGraph gen_cycle(std::size_t n, double w = 1.0);

/// b(0,1) = b(1,2) = b(2,0) = 2 and b(0,2) = b(2,1) = b(1,0) = 1.
DirectedGraph gen_opposing_cycles();

struct WeightRange {
  double lo = 0.5;
  double hi = 4.0;
};

/// k random simple directed cycles (length 3..n) with weights drawn from
/// multiples of 1/8 in `range`, so vertex balances are exact in floating point.
/// Retries up to 100 times when a vertex ends up isolated.
DirectedGraph gen_random_circulation(std::size_t n, std::size_t k_cycles, std::uint64_t seed,
                                     WeightRange range = {});

/// L layers of `width` vertices (id = layer * width + i). Layer l is the directed
/// cycle i -> i+1 with weight gamma^l; vertex i of layers l and l+1 are joined in
/// both directions with weight radial * gamma^l. Unit measure.
DirectedGraph gen_layered_heavy(std::size_t layers, std::size_t width, double gamma,
                                double radial = 1.0);

/// Levels V_n = layers 0..n-1 of gen_layered_heavy.
std::vector<VertexSubset> layer_levels(std::size_t layers, std::size_t width);

/// Complete `branching`-ary tree of the given depth, breadth-first ids, each
/// parent-child pair joined both ways with weight weight_growth^(parent level).
DirectedGraph gen_symmetric_tree(std::size_t depth, std::size_t branching,
                                 double weight_growth = 1.0);

struct NamedGraph {
  std::string name;
  DirectedGraph graph;
};

/// Deterministic test corpus: canonical small instances plus 50 random
/// circulations (n from 3 to 30), all connected and Kirchhoff-exact.
std::vector<NamedGraph> corpus();

/// The 50 random circulations of the corpus.
std::vector<NamedGraph> random_corpus();

}  // namespace dlap
