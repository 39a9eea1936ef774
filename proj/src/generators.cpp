#include "dlap/generators.hpp"

#include <cmath>
#include <map>

#include "dlap/error.hpp"

namespace dlap {

std::uint64_t SplitMix64::next() noexcept {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t SplitMix64::uniform_int(std::uint64_t lo, std::uint64_t hi) noexcept {
  const std::uint64_t span = hi - lo + 1;
  return span == 0 ? next() : lo + next() % span;
}

DirectedGraph superpose_cycles(std::size_t n, const std::vector<WeightedCycle>& cycles) {
  std::map<std::pair<VertexId, VertexId>, double> weights;
  for (const auto& c : cycles) {
    if (c.vertices.size() < 2 || !(c.weight > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "cycles need >= 2 vertices and positive weight");
    }
    for (std::size_t i = 0; i < c.vertices.size(); ++i) {
      const VertexId x = c.vertices[i];
      const VertexId y = c.vertices[(i + 1) % c.vertices.size()];
      if (x >= n || y >= n) throw Error(ErrorKind::VertexOutOfRange, "cycle vertex out of range");
      weights[{x, y}] += c.weight;
    }
  }
  GraphSpec spec;
  spec.measure.assign(n, 1.0);
  std::vector<char> touched(n, 0);
  for (const auto& [xy, w] : weights) {
    spec.edges.push_back({xy.first, xy.second, w});
    touched[xy.first] = 1;
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (!touched[x]) {
      throw Error(ErrorKind::DegenerateInstance, "vertex " + std::to_string(x) + " lies on no cycle");
    }
  }
  return build_graph(std::move(spec));
}

DirectedGraph gen_cycle(std::size_t n, double w) {
  if (n < 2 || !(w > 0.0)) throw Error(ErrorKind::InvalidArgument, "gen_cycle needs n >= 2, w > 0");
  WeightedCycle c;
  c.weight = w;
  for (std::size_t i = 0; i < n; ++i) c.vertices.push_back(i);
  return superpose_cycles(n, {c});
}

DirectedGraph gen_opposing_cycles() {
  return superpose_cycles(3, {{{0, 1, 2}, 2.0}, {{0, 2, 1}, 1.0}});
}

DirectedGraph gen_random_circulation(std::size_t n, std::size_t k_cycles, std::uint64_t seed,
                                     WeightRange range) {
  if (n < 3 || k_cycles < 1) {
    throw Error(ErrorKind::InvalidArgument, "gen_random_circulation needs n >= 3, k >= 1");
  }
  const auto lo = static_cast<std::uint64_t>(std::ceil(range.lo * 8.0));
  const auto hi = static_cast<std::uint64_t>(std::floor(range.hi * 8.0));
  if (!(range.lo > 0.0) || lo < 1 || hi < lo) {
    throw Error(ErrorKind::InvalidArgument, "weight range must contain a positive multiple of 1/8");
  }

  SplitMix64 rng(seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<WeightedCycle> cycles(k_cycles);
    for (auto& c : cycles) {
      const std::size_t len = rng.uniform_int(3, n);
      std::vector<VertexId> pool(n);
      for (std::size_t i = 0; i < n; ++i) pool[i] = i;
      for (std::size_t i = 0; i < len; ++i) {
        std::swap(pool[i], pool[rng.uniform_int(i, n - 1)]);
      }
      c.vertices.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(len));
      c.weight = static_cast<double>(rng.uniform_int(lo, hi)) / 8.0;
    }
    try {
      return superpose_cycles(n, cycles);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateInstance) throw;
    }
  }
  throw Error(ErrorKind::DegenerateInstance,
              "no instance without isolated vertices after 100 attempts");
}

DirectedGraph gen_layered_heavy(std::size_t layers, std::size_t width, double gamma,
                                double radial) {
  if (layers < 2 || width < 3 || !(gamma >= 1.0) || !(radial > 0.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "gen_layered_heavy needs L >= 2, width >= 3, gamma >= 1, radial > 0");
  }
  GraphSpec spec;
  spec.measure.assign(layers * width, 1.0);
  for (std::size_t l = 0; l < layers; ++l) {
    const double w = std::pow(gamma, static_cast<double>(l));
    for (std::size_t i = 0; i < width; ++i) {
      const VertexId x = l * width + i;
      spec.edges.push_back({x, l * width + (i + 1) % width, w});
      if (l + 1 < layers) {
        spec.edges.push_back({x, x + width, radial * w});
        spec.edges.push_back({x + width, x, radial * w});
      }
    }
  }
  return build_graph(std::move(spec));
}

std::vector<VertexSubset> layer_levels(std::size_t layers, std::size_t width) {
  std::vector<VertexSubset> levels;
  std::vector<VertexId> ids;
  for (std::size_t l = 0; l < layers; ++l) {
    for (std::size_t i = 0; i < width; ++i) ids.push_back(l * width + i);
    levels.emplace_back(ids, layers * width);
  }
  return levels;
}

DirectedGraph gen_symmetric_tree(std::size_t depth, std::size_t branching, double weight_growth) {
  if (depth < 1 || branching < 2 || !(weight_growth > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "gen_symmetric_tree needs depth >= 1, branching >= 2");
  }
  GraphSpec spec;
  spec.measure.push_back(1.0);
  std::vector<VertexId> frontier{0};
  for (std::size_t level = 0; level < depth; ++level) {
    const double w = std::pow(weight_growth, static_cast<double>(level));
    std::vector<VertexId> next;
    for (VertexId parent : frontier) {
      for (std::size_t c = 0; c < branching; ++c) {
        const VertexId child = spec.measure.size();
        spec.measure.push_back(1.0);
        spec.edges.push_back({parent, child, w});
        spec.edges.push_back({child, parent, w});
        next.push_back(child);
      }
    }
    frontier = std::move(next);
  }
  return build_graph(std::move(spec));
}

std::vector<NamedGraph> random_corpus() {
  std::vector<NamedGraph> out;
  for (std::size_t i = 0; i < 50; ++i) {
    const std::size_t n = 3 + i % 28;
    const std::size_t k = n / 2 + 2;
    // Deterministic reseeding until the superposition is connected.
    for (std::uint64_t j = 0;; ++j) {
      const std::uint64_t seed = 1000 + i + 7919 * j;
      auto g = gen_random_circulation(n, k, seed);
      if (connectivity(g).connected()) {
        out.push_back({"random_n" + std::to_string(n) + "_s" + std::to_string(seed), std::move(g)});
        break;
      }
    }
  }
  return out;
}

std::vector<NamedGraph> corpus() {
  std::vector<NamedGraph> out;
  out.push_back({"cycle2", gen_cycle(2, 1.0)});
  out.push_back({"cycle3", gen_cycle(3, 1.0)});
  out.push_back({"cycle5", gen_cycle(5, 1.0)});
  out.push_back({"cycle8_w2", gen_cycle(8, 2.0)});
  out.push_back({"opposing_cycles", gen_opposing_cycles()});
  out.push_back({"layered_L2_w3_g2", gen_layered_heavy(2, 3, 2.0)});
  out.push_back({"layered_L3_w3_g2", gen_layered_heavy(3, 3, 2.0)});
  out.push_back({"tree_d2_b2_g2", gen_symmetric_tree(2, 2, 2.0)});
  out.push_back({"tree_d1_b3", gen_symmetric_tree(1, 3, 1.0)});

  auto randoms = random_corpus();
  // Non-uniform measures (multiples of 1/4) on the small random instances, so
  // that m_Omega and M_Omega differ from the normalized setting.
  SplitMix64 rng(20240601);
  std::vector<NamedGraph> measured;
  for (const auto& r : randoms) {
    if (r.graph.size() > 10) continue;
    std::vector<double> m(r.graph.size());
    for (double& v : m) v = static_cast<double>(rng.uniform_int(1, 16)) / 4.0;
    measured.push_back({r.name + "_measured", with_measure(r.graph, std::move(m))});
  }
  for (auto& r : randoms) out.push_back(std::move(r));
  for (auto& r : measured) out.push_back(std::move(r));
  return out;
}

}  // namespace dlap
