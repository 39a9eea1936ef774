#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace dlap {

using VertexId = std::size_t;

struct Edge {
  VertexId from = 0;
  VertexId to = 0;
  double weight = 0.0;

  bool operator==(const Edge&) const = default;
};

/// Raw input to build_graph: one measure per vertex, plus directed weighted edges.
struct GraphSpec {
  std::vector<double> measure;
  std::vector<Edge> edges;
};

/// Sorted, duplicate-free set of vertex ids of a graph with `universe` vertices.
class VertexSubset {
 public:
  VertexSubset() = default;
  VertexSubset(std::vector<VertexId> ids, std::size_t universe);

  static VertexSubset all(std::size_t universe);

  std::span<const VertexId> members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  std::size_t universe() const noexcept { return universe_; }
  bool contains(VertexId v) const noexcept;

  /// Indicator over 0..universe-1.
  std::vector<char> mask() const;
  VertexSubset complement() const;

  bool operator==(const VertexSubset&) const = default;

 private:
  std::vector<VertexId> members_;
  std::size_t universe_ = 0;
};

/// Undirected neighbour with the symmetrised weight a(x,y) = b(x,y) + b(y,x).
struct SymmetricNeighbor {
  VertexId vertex;
  double weight;
};

/// Finite directed weighted graph (V, E, b) with vertex measure m.
/// Immutable; only build_graph constructs one, after validating every invariant.
class DirectedGraph {
 public:
  std::size_t size() const noexcept { return measure_.size(); }
  std::span<const double> measure() const noexcept { return measure_; }
  double measure(VertexId x) const { return measure_.at(x); }

  /// Edges sorted by (from, to).
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const Edge> out_edges(VertexId x) const;

  /// b(x, y), zero when (x, y) is not an edge.
  double weight(VertexId x, VertexId y) const;

  std::span<const double> beta_plus() const noexcept { return beta_plus_; }
  std::span<const double> beta_minus() const noexcept { return beta_minus_; }

  /// Neighbours in the undirected skeleton E, sorted by id.
  std::span<const SymmetricNeighbor> symmetric_neighbors(VertexId x) const;

  double total_weight() const noexcept { return total_weight_; }

 private:
  friend DirectedGraph build_graph(GraphSpec spec);
  DirectedGraph() = default;

  std::vector<double> measure_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> out_offsets_;
  std::vector<double> beta_plus_;
  std::vector<double> beta_minus_;
  std::vector<std::vector<SymmetricNeighbor>> symmetric_;
  double total_weight_ = 0.0;
};

/// Validates `spec` and builds the graph. Throws dlap::Error with kind
/// NonPositiveWeight, NonPositiveMeasure, SelfLoop, DuplicateEdge,
/// VertexOutOfRange or IsolatedDirection.
DirectedGraph build_graph(GraphSpec spec);

struct BetaPair {
  double plus;
  double minus;
};

/// (beta+(x), beta-(x)) for every vertex: total out-weight and in-weight.
std::vector<BetaPair> beta(const DirectedGraph& g);

struct KirchhoffReport {
  bool satisfied = false;
  double max_violation = 0.0;
  /// Absolute threshold actually applied: rel_tol * max beta+.
  double tolerance = 0.0;
  std::vector<VertexId> violating_vertices;
};

inline constexpr double kDefaultKirchhoffTolerance = 1e-9;

/// Checks beta+(x) == beta-(x) at every vertex, relative to max beta+.
KirchhoffReport check_kirchhoff(const DirectedGraph& g,
                                double rel_tol = kDefaultKirchhoffTolerance);

bool satisfies_kirchhoff(const DirectedGraph& g, double rel_tol = kDefaultKirchhoffTolerance);

struct Boundaries {
  /// Vertices of omega adjacent (in E) to a vertex outside omega.
  VertexSubset vertex_boundary;
  /// Directed edges with exactly one endpoint in omega, sorted by (from, to).
  std::vector<Edge> edge_boundary;
};

Boundaries boundaries(const DirectedGraph& g, const VertexSubset& omega);

/// b(boundary_E U): weight of directed edges crossing U in either direction.
double boundary_weight(const DirectedGraph& g, const VertexSubset& u);

/// Weight of edges leaving U, and weight of edges entering U.
std::pair<double, double> directed_cut_weights(const DirectedGraph& g, const VertexSubset& u);

struct Connectivity {
  /// Connected through the undirected skeleton E.
  bool weakly_connected = false;
  /// Every ordered pair joined by a directed path.
  bool strongly_connected = false;
  /// Every pair joined by a directed path in at least one direction.
  bool unilaterally_connected = false;

  /// The notion used by the kernel-simplicity and Dirichlet checks.
  bool connected() const noexcept { return weakly_connected; }
};

Connectivity connectivity(const DirectedGraph& g);

/// Connected components of the undirected skeleton restricted to `subset`.
std::vector<VertexSubset> induced_components(const DirectedGraph& g, const VertexSubset& subset);

/// q(x) = (beta+(x) - beta-(x)) / m(x).
std::vector<double> schrodinger_potential(const DirectedGraph& g);

/// Same edges with a different vertex measure.
DirectedGraph with_measure(const DirectedGraph& g, std::vector<double> measure);

GraphSpec to_spec(const DirectedGraph& g);

}  // namespace dlap
