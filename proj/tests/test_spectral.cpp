#include "doctest.h"

#include <cmath>
#include <numbers>

#include "dlap/generators.hpp"
#include "dlap/spectral.hpp"
#include "oracles.hpp"

using namespace dlap;

namespace {

Operator plain(const Eigen::MatrixXd& a) {
  Operator op;
  op.matrix = a;
  op.metric = Eigen::VectorXd::Ones(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) op.support.push_back(static_cast<VertexId>(i));
  return op;
}

Eigen::MatrixXcd random_complex(SplitMix64& rng, Eigen::Index n) {
  Eigen::MatrixXcd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = {2 * rng.uniform() - 1, 2 * rng.uniform() - 1};
  return a;
}

}  // namespace

TEST_CASE("trivial spectra") {
  const auto s = eig(Eigen::MatrixXd(Eigen::MatrixXd::Identity(3, 3)));
  REQUIRE(s.eigenvalues.size() == 3);
  for (auto z : s.eigenvalues) CHECK(std::abs(z - 1.0) < 1e-14);
  CHECK(s.hermitian);
  CHECK(nu(plain(Eigen::MatrixXd::Identity(3, 3))) == doctest::Approx(1.0));
  CHECK(operator_norm(plain(Eigen::MatrixXd::Identity(4, 4))) == doctest::Approx(1.0));
  CHECK(kernel_dimension(plain(Eigen::MatrixXd::Identity(4, 4))) == 0);
}

TEST_CASE("cycle spectrum matches the DFT") {
  for (std::size_t n : {2, 3, 5, 8, 16, 31}) {
    const auto s = spectrum(assemble(gen_cycle(n), OperatorBase::Delta));
    CHECK(oracle::multiset_distance(s.eigenvalues, oracle::cycle_eigenvalues(n)) < 1e-8);
    for (std::size_t k = 1; k < s.eigenvalues.size(); ++k) {
      CHECK(s.eigenvalues[k - 1].real() <= s.eigenvalues[k].real() + 1e-9);
    }
  }
}

TEST_CASE("H/2 of the 3-cycle") {
  const auto h = assemble(gen_cycle(3), OperatorBase::H);
  const auto s = spectrum(h);
  CHECK(s.hermitian);
  REQUIRE(s.eigenvalues.size() == 3);
  CHECK(s.eigenvalues[0].real() / 2 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s.eigenvalues[1].real() / 2 == doctest::Approx(1.5));
  CHECK(s.eigenvalues[2].real() / 2 == doctest::Approx(1.5));
  for (auto z : s.eigenvalues) CHECK(z.imag() == 0.0);
}

TEST_CASE("ties are broken by imaginary part") {
  const auto s = eig(assemble(gen_cycle(4), OperatorBase::Delta).matrix);
  // eigenvalues 0, 1 - i, 1 + i, 2
  REQUIRE(s.eigenvalues.size() == 4);
  CHECK(s.eigenvalues[1].imag() == doctest::Approx(-1.0));
  CHECK(s.eigenvalues[2].imag() == doctest::Approx(1.0));
}

TEST_CASE("eigenvectors satisfy A v = lambda v") {
  SplitMix64 rng(3);
  for (Eigen::Index n : {1, 2, 5, 9}) {
    const auto a = random_complex(rng, n);
    const auto s = eig(a, {.vectors = true});
    REQUIRE(s.eigenvectors.has_value());
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::VectorXcd v = s.eigenvectors->col(k);
      CHECK((a * v - s.eigenvalues[static_cast<std::size_t>(k)] * v).norm() < 1e-10 * std::max(1.0, a.norm()));
    }
  }
}

TEST_CASE("similarity invariance of to_euclidean") {
  for (const auto& ng : corpus()) {
    if (ng.graph.size() > 16) continue;
    for (auto base : {OperatorBase::Delta, OperatorBase::NormalizedDelta, OperatorBase::DeltaPrime}) {
      const auto op = assemble(ng.graph, base);
      const auto a = eig(op.matrix).eigenvalues;
      const auto b = eig(to_euclidean(op)).eigenvalues;
      CHECK(oracle::multiset_distance(a, b) < 1e-8);
    }
  }
}

TEST_CASE("nu closed forms") {
  const auto c3 = gen_cycle(3);
  CHECK(nu(assemble(c3, OperatorBase::Delta)) == doctest::Approx(0.0).epsilon(1e-12));
  const auto d = dirichlet(assemble(c3, OperatorBase::NormalizedDelta), VertexSubset({0, 1}, 3));
  CHECK(nu(d) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(nu_sup(d) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("nu properties on the corpus") {
  for (const auto& ng : corpus()) {
    const auto& g = ng.graph;
    const auto d = assemble(g, OperatorBase::Delta);
    CHECK(nu(d) >= -1e-9);
    CHECK(std::abs(nu(d)) < 1e-9);
    const auto spec = spectrum(d);
    for (auto z : spec.eigenvalues) CHECK(nu(d) <= z.real() + 1e-9);
    if (g.size() > 1) {
      const auto dd = dirichlet(d, VertexSubset({0}, g.size()).complement());
      CHECK(nu(dd) > 0.0);
    }
  }
}

TEST_CASE("operator norm") {
  CHECK(operator_norm(assemble(gen_cycle(3), OperatorBase::NormalizedDelta)) ==
        doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  for (const auto& ng : corpus()) {
    CHECK(operator_norm(assemble(ng.graph, OperatorBase::NormalizedDelta)) <= 2.0 + 1e-8);
  }
}

TEST_CASE("kernel dimension") {
  CHECK(kernel_dimension(assemble(gen_cycle(5), OperatorBase::NormalizedDelta)) == 1);
  const auto two = build_graph({std::vector<double>(6, 1.0),
                                {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}, {3, 4, 1}, {4, 5, 1}, {5, 3, 1}}});
  CHECK(kernel_dimension(assemble(two, OperatorBase::NormalizedDelta)) == 2);
}

TEST_CASE("numerical range of the normalized 3-cycle is the eigenvalue triangle") {
  const auto op = assemble(gen_cycle(3), OperatorBase::NormalizedDelta);
  const auto b = numerical_range_boundary(op, 360);
  REQUIRE(b.points.size() == 360);
  REQUIRE(b.angles.size() == 360);
  const auto hull = oracle::convex_hull(oracle::cycle_eigenvalues(3));
  for (auto z : b.points) CHECK(oracle::hull_distance(z, hull) < 1e-9);
  // every corner is hit
  for (auto v : hull) {
    double best = 1e9;
    for (auto z : b.points) best = std::min(best, std::abs(z - v));
    CHECK(best < 1e-9);
  }
  CHECK(b.nu == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("1x1 numerical range") {
  Eigen::MatrixXd a(1, 1);
  a << 0.75;
  const auto b = numerical_range_boundary(plain(a), 8);
  for (auto z : b.points) CHECK(std::abs(z - 0.75) < 1e-15);
  CHECK_THROWS(numerical_range_boundary(plain(a), 3));
}

TEST_CASE("normal operators: samples lie on the hull of the spectrum") {
  for (const auto& ng : corpus()) {
    const auto op = assemble(ng.graph, OperatorBase::NormalizedDelta);
    const Eigen::MatrixXd e = to_euclidean(op);
    if (normality_defect(e.cast<std::complex<double>>()) > 1e-10) continue;
    const auto hull = oracle::convex_hull(spectrum(op).eigenvalues);
    for (auto z : numerical_range_boundary(op, 90).points) CHECK(oracle::hull_distance(z, hull) < 1e-6);
  }
  // scaled rotation: normal, non-symmetric
  Eigen::MatrixXd r(2, 2);
  r << 0.3, -1.1, 1.1, 0.3;
  const auto hull = oracle::convex_hull(eig(r).eigenvalues);
  for (auto z : numerical_range_boundary(plain(r), 40).points) CHECK(oracle::hull_distance(z, hull) < 1e-9);
}

TEST_CASE("samples lie in W, inside the disc, and refinement never shrinks the hull") {
  for (const auto& ng : corpus()) {
    if (ng.graph.size() > 12) continue;
    const auto op = assemble(ng.graph, OperatorBase::NormalizedDelta);
    const auto coarse = numerical_range_boundary(op, 36);
    const auto fine = numerical_range_boundary(op, 72);
    const auto fine_hull = oracle::convex_hull(fine.points);
    for (auto z : coarse.points) {
      CHECK(std::abs(z - 1.0) <= 1.0 + 1e-8);
      // theta_k of the coarse sweep also appears in the fine one, so coarse samples sit on the fine hull
      CHECK(oracle::hull_distance(z, fine_hull) < 1e-9);
    }
    for (auto z : spectrum(op).eigenvalues) {
      CHECK(z.real() >= nu(op) - 1e-9);
      CHECK(z.real() <= nu_sup(op) + 1e-9);
    }
    CHECK(coarse.nu >= nu(op) - 1e-12);
  }
}

TEST_CASE("sweep output is deterministic") {
  const auto op = assemble(corpus()[20].graph, OperatorBase::Delta);
  const auto a = numerical_range_boundary(op, 64);
  const auto b = numerical_range_boundary(op, 64);
  CHECK(a.points == b.points);
}

TEST_CASE("circulants that stall plain shifted QR") {
  for (Eigen::Index n : {3, 4, 6}) {
    Eigen::MatrixXd a = 2.0 * Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i) a(i, (i + 1) % n) = -1.0;
    std::vector<Complex> expect;
    for (auto z : oracle::cycle_eigenvalues(static_cast<std::size_t>(n))) expect.push_back(z + 1.0);
    CHECK(oracle::multiset_distance(eig(a).eigenvalues, expect) < 1e-10);
    const Eigen::MatrixXcd ac = a.cast<Complex>();
    const auto s = eig(ac, {.vectors = true});
    CHECK(oracle::multiset_distance(s.eigenvalues, expect) < 1e-10);
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::VectorXcd v = s.eigenvectors->col(k);
      CHECK((ac * v - s.eigenvalues[static_cast<std::size_t>(k)] * v).norm() < 1e-10);
    }
  }
}
