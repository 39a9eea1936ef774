#include "doctest.h"

#include <functional>

#include "dlap/error.hpp"
#include "dlap/generators.hpp"
#include "dlap/isoperimetric.hpp"
#include "dlap/spectral.hpp"
#include "oracles.hpp"

using namespace dlap;

namespace {

std::vector<std::size_t> ids(const VertexSubset& s) { return {s.members().begin(), s.members().end()}; }

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no dlap::Error thrown");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("Cheeger examples on the 3-cycle") {
  const auto g = gen_cycle(3);
  const auto a = cheeger_exact(g, VertexSubset({0}, 3), Normalization::ByMeasure);
  CHECK(a.value == 2.0);
  CHECK(a.witness == VertexSubset({0}, 3));
  CHECK(a.mode == CheegerMode::Exact);

  const auto b = cheeger_exact(g, VertexSubset({0, 1}, 3), Normalization::ByBetaPlus);
  CHECK(b.value == 1.0);
  CHECK(b.witness == VertexSubset({0, 1}, 3));

  const auto h = cheeger_heuristic(g, VertexSubset({0, 1}, 3), Normalization::ByBetaPlus);
  CHECK(h.value == doctest::Approx(1.0));
  CHECK(h.mode == CheegerMode::UpperBound);

  for (const auto norm : {Normalization::ByMeasure, Normalization::ByBetaPlus}) {
    const auto all = cheeger_exact(g, VertexSubset::all(3), norm);
    CHECK(all.value == 0.0);
    CHECK(all.witness == VertexSubset::all(3));
    CHECK(cheeger_heuristic(g, VertexSubset::all(3), norm).value == 0.0);
  }
}

TEST_CASE("ties go to the lexicographically smallest witness") {
  // {0,1}, {3,4} and {0,1,3,4} all have ratio 1
  const auto g = gen_cycle(6);
  const auto r = cheeger_exact(g, VertexSubset({0, 1, 3, 4}, 6), Normalization::ByMeasure);
  CHECK(r.value == 1.0);
  CHECK(r.witness == VertexSubset({0, 1}, 6));
}

TEST_CASE("exact Cheeger agrees with brute force") {
  for (const auto& ng : corpus()) {
    const auto& g = ng.graph;
    if (g.size() > 11) continue;
    const std::size_t n = g.size();
    // every omega for tiny graphs, otherwise a few structured ones
    std::vector<std::uint64_t> masks;
    if (n <= 6) {
      for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) masks.push_back(m);
    } else {
      masks = {(std::uint64_t{1} << n) - 1, (std::uint64_t{1} << (n - 1)) - 1, 0b10110101ULL & ((1ULL << n) - 1)};
    }
    for (auto mask : masks) {
      const auto om = oracle::bits(mask, n);
      const VertexSubset omega(om, n);
      for (const bool by_beta : {false, true}) {
        const auto norm = by_beta ? Normalization::ByBetaPlus : Normalization::ByMeasure;
        const auto ref = oracle::cheeger(g, om, by_beta);
        const auto got = cheeger_exact(g, omega, norm);
        CHECK(got.value == doctest::Approx(ref.value).epsilon(1e-12));
        CHECK(cheeger_ratio(g, got.witness, norm) == doctest::Approx(got.value).epsilon(1e-12));
        for (auto v : got.witness.members()) CHECK(omega.contains(v));
        const auto heur = cheeger_heuristic(g, omega, norm);
        CHECK(heur.value >= got.value - 1e-12);
        if (by_beta) CHECK(got.value <= 2.0 + 1e-12);
      }
    }
  }
}

TEST_CASE("threaded enumeration matches the brute force on a 17-vertex subset") {
  const auto g = gen_random_circulation(18, 11, 99);
  std::vector<std::size_t> om;
  for (std::size_t i = 0; i < 17; ++i) om.push_back(i);
  const auto ref = oracle::cheeger(g, om, true);
  const auto got = cheeger_exact(g, VertexSubset(om, 18), Normalization::ByBetaPlus);
  CHECK(got.value == doctest::Approx(ref.value).epsilon(1e-12));
}

TEST_CASE("Cheeger constants grow when omega shrinks") {
  for (const auto& ng : random_corpus()) {
    const auto& g = ng.graph;
    if (g.size() > 10) continue;
    const std::size_t n = g.size();
    SplitMix64 rng(n);
    for (int t = 0; t < 10; ++t) {
      const std::uint64_t big = rng.uniform_int(1, (1ULL << n) - 1);
      const std::uint64_t small = big & rng.uniform_int(0, (1ULL << n) - 1);
      if (small == 0) continue;
      const auto hb = cheeger_exact(g, VertexSubset(oracle::bits(big, n), n), Normalization::ByMeasure);
      const auto hs = cheeger_exact(g, VertexSubset(oracle::bits(small, n), n), Normalization::ByMeasure);
      CHECK(hs.value >= hb.value - 1e-12);
    }
  }
}

TEST_CASE("Cheeger errors") {
  const auto g = gen_cycle(30);
  std::vector<VertexId> big;
  for (VertexId i = 0; i < 23; ++i) big.push_back(i);
  CHECK(kind_of([&] { cheeger_exact(g, VertexSubset(big, 30), Normalization::ByMeasure); }) ==
        ErrorKind::SubsetTooLarge);
  CHECK(kind_of([&] { cheeger_exact(g, VertexSubset({}, 30), Normalization::ByMeasure); }) == ErrorKind::EmptySubset);
  // large omega falls back to the heuristic
  const auto r = cheeger(g, VertexSubset(big, 30), Normalization::ByMeasure);
  CHECK(r.mode == CheegerMode::UpperBound);
  // a path of 23 vertices in a unit cycle: the whole path, cut 2 over 23
  CHECK(r.value == doctest::Approx(2.0 / 23.0));
}

TEST_CASE("m and M constants") {
  const auto g = with_measure(gen_cycle(3), {1.0, 2.0, 4.0});
  const auto r = m_M_constants(g, VertexSubset::all(3));
  CHECK(r.m_omega == 0.25);
  CHECK(r.M_omega == 1.0);
  const auto s = m_M_constants(g, VertexSubset({1}, 3));
  CHECK(s.m_omega == s.M_omega);

  const auto opp = gen_opposing_cycles();
  const std::vector<double> bp(opp.beta_plus().begin(), opp.beta_plus().end());
  const auto n = m_M_constants(with_measure(opp, bp), VertexSubset::all(3));
  CHECK(n.m_omega == 1.0);
  CHECK(n.M_omega == 1.0);
  CHECK_THROWS_AS(m_M_constants(g, VertexSubset({}, 3)), Error);
}

TEST_CASE("breadth-first filtrations") {
  const auto c3 = build_filtration(gen_cycle(3), 0);
  REQUIRE(c3.size() == 2);
  CHECK(ids(c3.levels()[0]) == std::vector<std::size_t>{0});
  CHECK(ids(c3.levels()[1]) == std::vector<std::size_t>{0, 1, 2});

  const auto path = build_graph({{1, 1, 1}, {{0, 1, 1}, {1, 0, 1}, {1, 2, 1}, {2, 1, 1}}});
  const auto fp = build_filtration(path, 0);
  REQUIRE(fp.size() == 3);
  CHECK(ids(fp.levels()[1]) == std::vector<std::size_t>{0, 1});

  const auto two = build_filtration(gen_cycle(2), 0);
  CHECK(two.size() == 2);

  const auto split = build_graph({std::vector<double>(4, 1.0), {{0, 1, 1}, {1, 0, 1}, {2, 3, 1}, {3, 2, 1}}});
  CHECK(kind_of([&] { build_filtration(split, 0); }) == ErrorKind::Disconnected);
}

TEST_CASE("explicit levels are validated") {
  const auto g = gen_cycle(4);
  CHECK_NOTHROW(filtration_from_levels(g, {VertexSubset({0}, 4), VertexSubset({0, 1}, 4), VertexSubset::all(4)}));
  // not exhausting
  CHECK_THROWS_AS(filtration_from_levels(g, {VertexSubset({0}, 4), VertexSubset({0, 1}, 4)}), Error);
  // not nested
  CHECK_THROWS_AS(filtration_from_levels(g, {VertexSubset({0}, 4), VertexSubset({1, 2}, 4), VertexSubset::all(4)}),
                  Error);
  // disconnected level
  CHECK_THROWS_AS(filtration_from_levels(g, {VertexSubset({0, 2}, 4), VertexSubset::all(4)}), Error);
}

TEST_CASE("layered profile: heavy end for gamma 3, none for gamma 1") {
  const std::size_t L = 6, w = 4;
  {
    const auto g = gen_layered_heavy(L, w, 3.0);
    const auto p = infinity_profile(g, filtration_from_levels(g, layer_levels(L, w)));
    REQUIRE(p.levels.size() == L - 1);
    for (std::size_t i = 1; i < p.levels.size(); ++i) CHECK(p.levels[i].m_c > p.levels[i - 1].m_c);
    CHECK(p.m_nondecreasing);
    CHECK(p.h_nondecreasing);
    CHECK(p.nu_nondecreasing);
    CHECK(p.heavy_end);
    CHECK_FALSE(p.heuristic_used);
    for (const auto& lv : p.levels) {
      CHECK(lv.ess_lower_bound == doctest::Approx(lv.m_c * lv.h_tilde_c * lv.h_tilde_c / 8));
      CHECK(lv.ess_lower_bound <= lv.nu_dirichlet + 1e-8);
    }
  }
  {
    const auto g = gen_layered_heavy(L, w, 1.0);
    const auto p = infinity_profile(g, filtration_from_levels(g, layer_levels(L, w)));
    CHECK_FALSE(p.heavy_end);
    for (const auto& lv : p.levels) CHECK(lv.M_c <= 3.0);
  }
}

TEST_CASE("layered m_c matches hand-computed beta+ per layer") {
  // m = 1; middle layer l: gamma^l (cycle) + gamma^l (outward) + gamma^(l-1) (inward)
  const std::size_t L = 6, w = 4;
  const double gamma = 2.0;
  const auto g = gen_layered_heavy(L, w, gamma);
  const auto p = infinity_profile(g, filtration_from_levels(g, layer_levels(L, w)));
  for (const auto& lv : p.levels) {
    const double l = static_cast<double>(lv.level);
    const double middle = 2 * std::pow(gamma, l) + std::pow(gamma, l - 1);
    const double last = std::pow(gamma, L - 1) + std::pow(gamma, L - 2);
    CHECK(lv.m_c == doctest::Approx(std::min(middle, last)));
    CHECK(lv.complement_size == (L - lv.level) * w);
  }
  CHECK(p.levels.back().m_c / p.levels.front().m_c == doctest::Approx(9.6));
  CHECK_FALSE(p.heavy_end);  // 9.6 is under the 10x threshold at this truncation
  const auto deeper = gen_layered_heavy(8, w, gamma);
  CHECK(infinity_profile(deeper, filtration_from_levels(deeper, layer_levels(8, w))).heavy_end);
}

TEST_CASE("profile cross-checks against direct computation") {
  const auto g = gen_symmetric_tree(3, 2, 2.0);
  const auto filt = build_filtration(g, 0);
  const auto p = infinity_profile(g, filt);
  for (const auto& lv : p.levels) {
    const auto comp = filt.levels()[lv.level - 1].complement();
    CHECK(lv.nu_dirichlet == doctest::Approx(nu(dirichlet(assemble(g, OperatorBase::Delta), comp))));
    const auto ref = oracle::cheeger(g, ids(comp), true);
    CHECK(lv.h_tilde_c == doctest::Approx(ref.value));
  }
}

TEST_CASE("budget forces heuristic levels and the flag") {
  const auto g = gen_layered_heavy(4, 4, 2.0);
  ProfileOptions opt;
  opt.exact_limit = 4;
  const auto p = infinity_profile(g, filtration_from_levels(g, layer_levels(4, 4)), opt);
  CHECK(p.heuristic_used);
  CHECK(p.levels.front().h_mode == CheegerMode::UpperBound);
  CHECK(p.levels.back().h_mode == CheegerMode::Exact);
}

TEST_CASE("empty complement") {
  const auto g = gen_cycle(3);
  // only one level with a non-empty complement is still usable
  CHECK_NOTHROW(infinity_profile(g, build_filtration(g, 0)));
  CHECK(infinity_profile(g, build_filtration(g, 0)).levels.size() == 1);
}
