#include "dlap/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <string>

#include "dlap/error.hpp"

namespace dlap {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorKind::NonPositiveMeasure: return "NonPositiveMeasure";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::IsolatedDirection: return "IsolatedDirection";
    case ErrorKind::VertexOutOfRange: return "VertexOutOfRange";
    case ErrorKind::EmptySubset: return "EmptySubset";
    case ErrorKind::KirchhoffViolated: return "KirchhoffViolated";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SubsetTooLarge: return "SubsetTooLarge";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::EmptyComplement: return "EmptyComplement";
    case ErrorKind::DegenerateInstance: return "DegenerateInstance";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InputParse: return "InputParse";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// VertexSubset

VertexSubset::VertexSubset(std::vector<VertexId> ids, std::size_t universe)
    : members_(std::move(ids)), universe_(universe) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (!members_.empty() && members_.back() >= universe_) {
    throw Error(ErrorKind::VertexOutOfRange,
                "vertex " + std::to_string(members_.back()) + " outside 0.." +
                    std::to_string(universe_ == 0 ? 0 : universe_ - 1));
  }
}

VertexSubset VertexSubset::all(std::size_t universe) {
  std::vector<VertexId> ids(universe);
  for (std::size_t i = 0; i < universe; ++i) ids[i] = i;
  return VertexSubset(std::move(ids), universe);
}

bool VertexSubset::contains(VertexId v) const noexcept {
  return std::binary_search(members_.begin(), members_.end(), v);
}

std::vector<char> VertexSubset::mask() const {
  std::vector<char> m(universe_, 0);
  for (VertexId v : members_) m[v] = 1;
  return m;
}

VertexSubset VertexSubset::complement() const {
  const auto m = mask();
  std::vector<VertexId> ids;
  for (std::size_t v = 0; v < universe_; ++v) {
    if (!m[v]) ids.push_back(v);
  }
  return VertexSubset(std::move(ids), universe_);
}

// ---------------------------------------------------------------------------
// DirectedGraph

std::span<const Edge> DirectedGraph::out_edges(VertexId x) const {
  if (x >= size()) throw Error(ErrorKind::VertexOutOfRange, std::to_string(x));
  return std::span<const Edge>(edges_).subspan(out_offsets_[x],
                                               out_offsets_[x + 1] - out_offsets_[x]);
}

double DirectedGraph::weight(VertexId x, VertexId y) const {
  const auto out = out_edges(x);
  const auto it = std::lower_bound(out.begin(), out.end(), y,
                                   [](const Edge& e, VertexId v) { return e.to < v; });
  return (it != out.end() && it->to == y) ? it->weight : 0.0;
}

std::span<const SymmetricNeighbor> DirectedGraph::symmetric_neighbors(VertexId x) const {
  return symmetric_.at(x);
}

DirectedGraph build_graph(GraphSpec spec) {
  const std::size_t n = spec.measure.size();
  for (std::size_t x = 0; x < n; ++x) {
    const double m = spec.measure[x];
    if (!std::isfinite(m) || m <= 0.0) {
      throw Error(ErrorKind::NonPositiveMeasure,
                  "m(" + std::to_string(x) + ") = " + std::to_string(m));
    }
  }
  for (const Edge& e : spec.edges) {
    if (e.from >= n || e.to >= n) {
      throw Error(ErrorKind::VertexOutOfRange, "edge (" + std::to_string(e.from) + "," +
                                                   std::to_string(e.to) + ") with n = " +
                                                   std::to_string(n));
    }
    if (e.from == e.to) {
      throw Error(ErrorKind::SelfLoop, "loop at vertex " + std::to_string(e.from));
    }
    if (!std::isfinite(e.weight) || e.weight <= 0.0) {
      throw Error(ErrorKind::NonPositiveWeight, "b(" + std::to_string(e.from) + "," +
                                                    std::to_string(e.to) + ") = " +
                                                    std::to_string(e.weight));
    }
  }

  std::sort(spec.edges.begin(), spec.edges.end(), [](const Edge& a, const Edge& b) {
    return a.from != b.from ? a.from < b.from : a.to < b.to;
  });
  for (std::size_t i = 1; i < spec.edges.size(); ++i) {
    if (spec.edges[i].from == spec.edges[i - 1].from && spec.edges[i].to == spec.edges[i - 1].to) {
      throw Error(ErrorKind::DuplicateEdge, "edge (" + std::to_string(spec.edges[i].from) + "," +
                                                std::to_string(spec.edges[i].to) +
                                                ") listed twice");
    }
  }

  DirectedGraph g;
  g.measure_ = std::move(spec.measure);
  g.edges_ = std::move(spec.edges);
  g.out_offsets_.assign(n + 1, 0);
  g.beta_plus_.assign(n, 0.0);
  g.beta_minus_.assign(n, 0.0);
  for (const Edge& e : g.edges_) {
    ++g.out_offsets_[e.from + 1];
    g.beta_plus_[e.from] += e.weight;
    g.beta_minus_[e.to] += e.weight;
    g.total_weight_ += e.weight;
  }
  for (std::size_t x = 0; x < n; ++x) g.out_offsets_[x + 1] += g.out_offsets_[x];

  for (std::size_t x = 0; x < n; ++x) {
    if (g.beta_plus_[x] <= 0.0 || g.beta_minus_[x] <= 0.0) {
      throw Error(ErrorKind::IsolatedDirection,
                  "vertex " + std::to_string(x) + " has beta+ = " + std::to_string(g.beta_plus_[x]) +
                      ", beta- = " + std::to_string(g.beta_minus_[x]));
    }
  }

  std::vector<std::map<VertexId, double>> sym(n);
  for (const Edge& e : g.edges_) {
    sym[e.from][e.to] += e.weight;
    sym[e.to][e.from] += e.weight;
  }
  g.symmetric_.resize(n);
  for (std::size_t x = 0; x < n; ++x) {
    g.symmetric_[x].reserve(sym[x].size());
    for (const auto& [y, w] : sym[x]) g.symmetric_[x].push_back({y, w});
  }
  return g;
}

std::vector<BetaPair> beta(const DirectedGraph& g) {
  std::vector<BetaPair> out(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) out[x] = {g.beta_plus()[x], g.beta_minus()[x]};
  return out;
}

KirchhoffReport check_kirchhoff(const DirectedGraph& g, double rel_tol) {
  if (!(rel_tol >= 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be >= 0");
  const auto bp = g.beta_plus();
  const auto bm = g.beta_minus();
  const double scale = bp.empty() ? 0.0 : *std::max_element(bp.begin(), bp.end());

  KirchhoffReport report;
  report.tolerance = rel_tol * scale;
  for (std::size_t x = 0; x < g.size(); ++x) {
    const double v = std::abs(bp[x] - bm[x]);
    report.max_violation = std::max(report.max_violation, v);
    if (v > report.tolerance) report.violating_vertices.push_back(x);
  }
  report.satisfied = report.max_violation <= report.tolerance;
  return report;
}

bool satisfies_kirchhoff(const DirectedGraph& g, double rel_tol) {
  return check_kirchhoff(g, rel_tol).satisfied;
}

Boundaries boundaries(const DirectedGraph& g, const VertexSubset& omega) {
  if (omega.empty()) throw Error(ErrorKind::EmptySubset, "boundaries of an empty set");
  if (omega.universe() != g.size()) {
    throw Error(ErrorKind::VertexOutOfRange, "subset universe does not match graph size");
  }
  const auto in = omega.mask();
  std::vector<VertexId> vb;
  for (VertexId y : omega.members()) {
    for (const auto& nb : g.symmetric_neighbors(y)) {
      if (!in[nb.vertex]) {
        vb.push_back(y);
        break;
      }
    }
  }
  Boundaries out{VertexSubset(std::move(vb), g.size()), {}};
  for (const Edge& e : g.edges()) {
    if (in[e.from] != in[e.to]) out.edge_boundary.push_back(e);
  }
  return out;
}

std::pair<double, double> directed_cut_weights(const DirectedGraph& g, const VertexSubset& u) {
  const auto in = u.mask();
  double leaving = 0.0;
  double entering = 0.0;
  for (const Edge& e : g.edges()) {
    if (in[e.from] && !in[e.to]) leaving += e.weight;
    if (!in[e.from] && in[e.to]) entering += e.weight;
  }
  return {leaving, entering};
}

double boundary_weight(const DirectedGraph& g, const VertexSubset& u) {
  const auto [leaving, entering] = directed_cut_weights(g, u);
  return leaving + entering;
}

Connectivity connectivity(const DirectedGraph& g) {
  const std::size_t n = g.size();
  Connectivity c;
  c.weakly_connected = induced_components(g, VertexSubset::all(n)).size() <= 1;

  // reach[x][y]: directed path from x to y (every vertex reaches itself).
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  std::vector<VertexId> stack;
  for (VertexId s = 0; s < n; ++s) {
    auto& seen = reach[s];
    seen[s] = 1;
    stack.assign(1, s);
    while (!stack.empty()) {
      const VertexId x = stack.back();
      stack.pop_back();
      for (const Edge& e : g.out_edges(x)) {
        if (!seen[e.to]) {
          seen[e.to] = 1;
          stack.push_back(e.to);
        }
      }
    }
  }
  c.strongly_connected = true;
  c.unilaterally_connected = true;
  for (VertexId x = 0; x < n; ++x) {
    for (VertexId y = x + 1; y < n; ++y) {
      if (!reach[x][y] || !reach[y][x]) c.strongly_connected = false;
      if (!reach[x][y] && !reach[y][x]) c.unilaterally_connected = false;
    }
  }
  return c;
}

std::vector<VertexSubset> induced_components(const DirectedGraph& g, const VertexSubset& subset) {
  const auto in = subset.mask();
  std::vector<char> seen(g.size(), 0);
  std::vector<VertexSubset> out;
  for (VertexId s : subset.members()) {
    if (seen[s]) continue;
    std::vector<VertexId> comp{s};
    seen[s] = 1;
    for (std::size_t head = 0; head < comp.size(); ++head) {
      for (const auto& nb : g.symmetric_neighbors(comp[head])) {
        if (in[nb.vertex] && !seen[nb.vertex]) {
          seen[nb.vertex] = 1;
          comp.push_back(nb.vertex);
        }
      }
    }
    out.emplace_back(std::move(comp), g.size());
  }
  return out;
}

std::vector<double> schrodinger_potential(const DirectedGraph& g) {
  std::vector<double> q(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) {
    q[x] = (g.beta_plus()[x] - g.beta_minus()[x]) / g.measure(x);
  }
  return q;
}

GraphSpec to_spec(const DirectedGraph& g) {
  return GraphSpec{std::vector<double>(g.measure().begin(), g.measure().end()),
                   std::vector<Edge>(g.edges().begin(), g.edges().end())};
}

DirectedGraph with_measure(const DirectedGraph& g, std::vector<double> measure) {
  if (measure.size() != g.size()) {
    throw Error(ErrorKind::InvalidArgument, "measure length does not match vertex count");
  }
  GraphSpec spec = to_spec(g);
  spec.measure = std::move(measure);
  return build_graph(std::move(spec));
}

}  // namespace dlap
