#include "doctest.h"

#include <functional>
#include <numeric>

#include "dlap/error.hpp"
#include "dlap/generators.hpp"
#include "dlap/graph.hpp"
#include "oracles.hpp"

using namespace dlap;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no dlap::Error thrown");
  return ErrorKind::InvalidArgument;
}

DirectedGraph two_vertex(double b01, double b10) {
  return build_graph({{1.0, 1.0}, {{0, 1, b01}, {1, 0, b10}}});
}

}  // namespace

TEST_CASE("builder rejects malformed input") {
  CHECK(kind_of([] { build_graph({{1.0, 0.0}, {{0, 1, 1.0}, {1, 0, 1.0}}}); }) == ErrorKind::NonPositiveMeasure);
  CHECK(kind_of([] { build_graph({{1.0, 1.0}, {{0, 1, 0.0}, {1, 0, 1.0}}}); }) == ErrorKind::NonPositiveWeight);
  CHECK(kind_of([] { build_graph({{1.0, 1.0}, {{0, 1, -2.0}, {1, 0, 1.0}}}); }) == ErrorKind::NonPositiveWeight);
  CHECK(kind_of([] { build_graph({{1.0, 1.0}, {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}}}); }) == ErrorKind::SelfLoop);
  CHECK(kind_of([] { build_graph({{1.0, 1.0}, {{0, 1, 1.0}, {0, 1, 2.0}, {1, 0, 1.0}}}); }) ==
        ErrorKind::DuplicateEdge);
  CHECK(kind_of([] { build_graph({{1.0, 1.0}, {{0, 2, 1.0}}}); }) == ErrorKind::VertexOutOfRange);
  // vertex 1 has an out-edge but nothing coming in
  CHECK(kind_of([] { build_graph({{1.0, 1.0, 1.0}, {{0, 1, 1.0}, {1, 2, 1.0}}}); }) ==
        ErrorKind::IsolatedDirection);
}

TEST_CASE("edges are sorted and weights retrievable") {
  const auto g = build_graph({{1.0, 1.0, 1.0}, {{2, 0, 3.0}, {0, 1, 1.0}, {1, 2, 2.0}, {1, 0, 0.5}, {0, 2, 4.0}}});
  const auto e = g.edges();
  for (std::size_t i = 1; i < e.size(); ++i) {
    CHECK(std::pair(e[i - 1].from, e[i - 1].to) < std::pair(e[i].from, e[i].to));
  }
  CHECK(g.weight(1, 0) == 0.5);
  CHECK(g.weight(2, 1) == 0.0);
  CHECK(g.out_edges(1).size() == 2);
  CHECK(g.total_weight() == doctest::Approx(10.5));
}

TEST_CASE("beta on the 2-1 two-vertex graph") {
  const auto g = two_vertex(2.0, 1.0);
  const auto b = beta(g);
  CHECK(b[0].plus == 2.0);
  CHECK(b[0].minus == 1.0);
  CHECK(b[1].plus == 1.0);
  CHECK(b[1].minus == 2.0);
  const auto q = schrodinger_potential(g);
  CHECK(q[0] == 1.0);
  CHECK(q[1] == -1.0);
  const auto rep = check_kirchhoff(g);
  CHECK_FALSE(rep.satisfied);
  CHECK(rep.max_violation == 1.0);
  CHECK(rep.violating_vertices == std::vector<VertexId>{0, 1});
}

TEST_CASE("Kirchhoff holds on cycles and opposing cycles") {
  for (std::size_t n : {2, 3, 7}) {
    const auto rep = check_kirchhoff(gen_cycle(n, 1.5));
    CHECK(rep.satisfied);
    CHECK(rep.max_violation == 0.0);
  }
  const auto opp = gen_opposing_cycles();
  CHECK(check_kirchhoff(opp).max_violation == 0.0);
  for (double q : schrodinger_potential(opp)) CHECK(q == 0.0);
}

TEST_CASE("tolerance is relative to max beta+") {
  const auto g = build_graph({{1.0, 1.0}, {{0, 1, 1000.0}, {1, 0, 1000.0 + 1e-7}}});
  const auto rep = check_kirchhoff(g);
  CHECK(rep.tolerance == doctest::Approx(1e-9 * (1000.0 + 1e-7)));
  CHECK(rep.satisfied);
  CHECK_FALSE(check_kirchhoff(g, 1e-12).satisfied);
}

TEST_CASE("beta sums and q*m sum identities") {
  for (const auto& ng : random_corpus()) {
    const auto& g = ng.graph;
    const auto b = beta(g);
    double sp = 0, sm = 0;
    for (auto p : b) {
      sp += p.plus;
      sm += p.minus;
    }
    CHECK(sp == doctest::Approx(g.total_weight()));
    CHECK(sm == doctest::Approx(g.total_weight()));
    CHECK(oracle::out_weight(g) == std::vector<double>(g.beta_plus().begin(), g.beta_plus().end()));
    CHECK(oracle::in_weight(g) == std::vector<double>(g.beta_minus().begin(), g.beta_minus().end()));
  }
  const auto g = two_vertex(3.0, 0.25);
  const auto q = schrodinger_potential(g);
  CHECK(q[0] * g.measure(0) + q[1] * g.measure(1) == doctest::Approx(0.0));
}

TEST_CASE("flow balance across every cut of small Kirchhoff graphs") {
  for (const auto& ng : random_corpus()) {
    const auto& g = ng.graph;
    if (g.size() > 12) continue;
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << g.size()); ++mask) {
      const VertexSubset u(oracle::bits(mask, g.size()), g.size());
      const auto [out, in] = directed_cut_weights(g, u);
      CHECK(out == doctest::Approx(in));
      CHECK(boundary_weight(g, u) == doctest::Approx(oracle::cut(g, mask)));
      CHECK(boundary_weight(g, u) == doctest::Approx(2.0 * out));
    }
  }
}

TEST_CASE("boundaries") {
  const auto g = gen_cycle(4);
  const VertexSubset omega({0, 1}, 4);
  const auto b = boundaries(g, omega);
  CHECK(b.vertex_boundary == VertexSubset({0, 1}, 4));
  REQUIRE(b.edge_boundary.size() == 2);
  CHECK(b.edge_boundary[0] == Edge{1, 2, 1.0});
  CHECK(b.edge_boundary[1] == Edge{3, 0, 1.0});
  CHECK(boundaries(g, omega.complement()).edge_boundary == b.edge_boundary);
  CHECK(boundaries(g, VertexSubset::all(4)).edge_boundary.empty());
  CHECK(kind_of([&] { boundaries(g, VertexSubset({}, 4)); }) == ErrorKind::EmptySubset);
}

TEST_CASE("vertex subsets") {
  const VertexSubset s({3, 1, 3, 0}, 5);
  CHECK(std::vector<VertexId>(s.members().begin(), s.members().end()) == std::vector<VertexId>{0, 1, 3});
  CHECK(s.contains(3));
  CHECK_FALSE(s.contains(2));
  CHECK(s.complement() == VertexSubset({2, 4}, 5));
  CHECK(kind_of([] { VertexSubset({5}, 5); }) == ErrorKind::VertexOutOfRange);
}

TEST_CASE("connectivity notions") {
  const auto c3 = connectivity(gen_cycle(3));
  CHECK(c3.weakly_connected);
  CHECK(c3.strongly_connected);
  CHECK(c3.unilaterally_connected);

  // two disjoint 3-cycles
  const auto two = build_graph({std::vector<double>(6, 1.0),
                                {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}, {3, 4, 1}, {4, 5, 1}, {5, 3, 1}}});
  const auto c = connectivity(two);
  CHECK_FALSE(c.connected());
  CHECK_FALSE(c.strongly_connected);
  CHECK(induced_components(two, VertexSubset::all(6)).size() == 2);

  // two 2-cycles joined by the single edge 1 -> 2
  const auto bridge = build_graph({{1, 1, 1, 1}, {{0, 1, 1}, {1, 0, 1}, {2, 3, 1}, {3, 2, 1}, {1, 2, 1}}});
  const auto cb = connectivity(bridge);
  CHECK(cb.weakly_connected);
  CHECK(cb.unilaterally_connected);
  CHECK_FALSE(cb.strongly_connected);

  // 1 feeds both 2 and 3, which then cannot reach each other
  const auto fork = build_graph({std::vector<double>(6, 1.0),
                                 {{0, 1, 1}, {1, 0, 1}, {2, 4, 1}, {4, 2, 1}, {3, 5, 1}, {5, 3, 1}, {1, 2, 1}, {1, 3, 1}}});
  CHECK(connectivity(fork).weakly_connected);
  CHECK_FALSE(connectivity(fork).unilaterally_connected);
}

TEST_CASE("induced components of a subset") {
  const auto g = gen_cycle(6);
  const auto comps = induced_components(g, VertexSubset({0, 1, 3, 4}, 6));
  REQUIRE(comps.size() == 2);
  CHECK(comps[0] == VertexSubset({0, 1}, 6));
  CHECK(comps[1] == VertexSubset({3, 4}, 6));
}

TEST_CASE("with_measure and to_spec round trip") {
  const auto g = gen_opposing_cycles();
  const auto h = with_measure(g, {1.0, 2.0, 4.0});
  CHECK(h.measure(2) == 4.0);
  CHECK(std::equal(h.edges().begin(), h.edges().end(), g.edges().begin(), g.edges().end()));
  const auto spec = to_spec(h);
  const auto k = build_graph(spec);
  CHECK(std::equal(k.edges().begin(), k.edges().end(), h.edges().begin(), h.edges().end()));
}
