#include <catch2/catch_amalgamated.hpp>

#include <dgft/svd_basis.hpp>
#include <dgft/variation.hpp>

#include "test_support.hpp"

using namespace dgft;
using Catch::Approx;
using test_support::random_directed_graph;
using test_support::random_signal;
using test_support::random_undirected_graph;

TEST_CASE("quadratic variation basics") {
  const auto g = random_directed_graph(10, 0.3, 1);
  const Eigen::MatrixXd l = build_laplacian(g);
  CHECK(quadratic_variation(l, Eigen::VectorXd::Ones(10)) == Approx(0.0).margin(1e-12));

  const double w = 0.8;
  const DirectedGraph pair(2, {{0, 1, w}, {1, 0, w}});
  Eigen::VectorXd x(2);
  x << 1, 0;
  CHECK(quadratic_variation(build_laplacian(pair), x) == Approx(w).epsilon(1e-14));

  CounterRng rng(2);
  const Eigen::VectorXd y = random_signal(10, rng);
  CHECK(quadratic_variation(l, 3.0 * y) == Approx(9.0 * quadratic_variation(l, y)).epsilon(1e-12));
  REQUIRE_THROWS_AS(quadratic_variation(l, Eigen::VectorXd::Zero(9)), validation_error);
}

TEST_CASE("l2 variation evaluates to sigma on right components") {
  const auto g = random_directed_graph(12, 0.35, 3);
  const Eigen::MatrixXd l = build_laplacian(g);
  const SvdBasis b = svd_basis(l);
  for (int i = 0; i < 12; ++i)
    CHECK(l2_variation(l, b.v.col(i)) == Approx(b.sigma(i)).margin(1e-8 * (1 + b.sigma(i))));
  CHECK(l2_variation(l, Eigen::VectorXd::Ones(12)) <= 1e-12);

  CounterRng rng(4);
  const Eigen::VectorXd a = random_signal(12, rng), c = random_signal(12, rng);
  CHECK(l2_variation(l, a + c) <= l2_variation(l, a) + l2_variation(l, c) + 1e-12);
}

TEST_CASE("directed variations on a single edge") {
  const double w = 1.3;
  const DirectedGraph g(2, {{0, 1, w}});
  const Eigen::MatrixXd a = g.adjacency();
  Eigen::VectorXd down(2), up(2);
  down << 1, 0;
  up << 0, 1;
  CHECK(gdv(a, down) == Approx(w).epsilon(1e-14));
  CHECK(gdv(a, up) == 0.0);
  CHECK(dv(a, down) == Approx(w).epsilon(1e-14));
  CHECK(dv(a, up) == 0.0);
}

TEST_CASE("directed variations vanish on constants") {
  const auto g = random_directed_graph(9, 0.4, 5);
  const Eigen::MatrixXd a = g.adjacency();
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(9, 2.7);
  CHECK(gdv(a, c) == 0.0);
  CHECK(dv(a, c) == 0.0);
}

TEST_CASE("gdv is shift invariant, dv positively homogeneous") {
  const auto g = random_directed_graph(11, 0.3, 6);
  const Eigen::MatrixXd a = g.adjacency();
  CounterRng rng(7);
  const Eigen::VectorXd x = random_signal(11, rng);
  const Eigen::VectorXd shifted = x + 4.2 * Eigen::VectorXd::Ones(11);
  CHECK(gdv(a, shifted) == Approx(gdv(a, x)).epsilon(1e-10));
  CHECK(dv(a, 2.5 * x) == Approx(2.5 * 2.5 * dv(a, x)).epsilon(1e-12));
}

TEST_CASE("directed variations split the symmetric quadratic form") {
  // summing both orientations of every difference recovers the full
  // symmetric form, which is twice the quadratic variation
  for (std::uint64_t s = 0; s < 4; ++s) {
    const auto g = random_undirected_graph(10, 0.4, 20 + s);
    const Eigen::MatrixXd a = g.adjacency();
    const Eigen::MatrixXd l = build_laplacian(g);
    CounterRng rng(30 + s);
    const Eigen::VectorXd x = random_signal(10, rng);
    const double split = dv(a, x) + dv(a, -x);
    CHECK(split == Approx(2.0 * quadratic_variation(l, x)).epsilon(1e-10));
  }
}
