#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fdrlab/core.hpp"

using namespace fdrlab;

TEST_CASE("solve_spd solves and rejects") {
  DenseMatrix M(2, 2);
  M << 4, 1, 1, 3;
  Vec rhs(2);
  rhs << 1, 2;
  const Vec x = solve_spd(M, rhs);
  REQUIRE((M * x - rhs).norm() < 1e-12);

  DenseMatrix bad(2, 2);
  bad << 1, 2, 2, 1;  // indefinite
  REQUIRE_THROWS_AS(solve_spd(bad, rhs), std::runtime_error);
  DenseMatrix rect(2, 3);
  REQUIRE_THROWS_AS(solve_spd(rect, rhs), std::invalid_argument);
}

TEST_CASE("require_finite flags NaN") {
  Vec v(2);
  v << 1.0, std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS(require_finite(v, "v"));
}

TEST_CASE("standard basis frame round-trips coordinates") {
  const auto F = OrthonormalFrame::standard_basis(5);
  REQUIRE(F.ambient_dim() == 5);
  REQUIRE(F.count() == 5);
  Vec v(5);
  v << 1, -2, 3, 0.5, -0.25;
  REQUIRE((F.from_coordinates(F.coordinates(v)) - v).norm() == 0.0);
}

TEST_CASE("frame constructor validates orthonormality") {
  DenseMatrix bad(3, 2);
  bad << 1, 1, 0, 1, 0, 0;
  REQUIRE_THROWS_AS(OrthonormalFrame(bad), std::invalid_argument);
}

TEST_CASE("random partial frame: projection then lift is a contraction fix") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  DenseMatrix G(7, 3);
  for (Eigen::Index j = 0; j < 3; ++j) {
    for (Eigen::Index i = 0; i < 7; ++i) G(i, j) = gauss(rng);
  }
  const DenseMatrix Q = Eigen::HouseholderQR<DenseMatrix>(G).householderQ() *
                        DenseMatrix::Identity(7, 3);
  OrthonormalFrame F(Q);
  Vec v(7);
  for (Eigen::Index i = 0; i < 7; ++i) v[i] = gauss(rng);
  const Vec p = F.from_coordinates(F.coordinates(v));
  // projection is idempotent and never longer than v
  REQUIRE((F.from_coordinates(F.coordinates(p)) - p).norm() < 1e-12);
  REQUIRE(p.norm() <= v.norm() + 1e-12);
}

TEST_CASE("orthonormal_complement_basis completes the frame") {
  const auto F = OrthonormalFrame::standard_basis(4);
  DenseMatrix two = F.matrix().leftCols(2);
  OrthonormalFrame partial(two);
  const auto extra = orthonormal_complement_basis(partial, 2);
  REQUIRE(extra.size() == 2);
  for (const Vec& e : extra) {
    REQUIRE(std::abs(e.norm() - 1.0) < 1e-12);
    REQUIRE(partial.coordinates(e).lpNorm<Eigen::Infinity>() < 1e-12);
  }
  REQUIRE(std::abs(extra[0].dot(extra[1])) < 1e-12);
  REQUIRE_THROWS(orthonormal_complement_basis(partial, 3));
}
