#include "arenkit/error.hpp"
#include "arenkit/linfeas.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace arenkit;
using oracles::mat;
using oracles::vec;

TEST_CASE("feasibility verdicts carry checkable evidence") {
  SUBCASE("box") {
    const IneqSystem sys(mat({{1.0}, {-1.0}}), vec({1.0, 1.0}));
    const auto result = check_feasible(sys);
    REQUIRE(result.is_feasible());
    CHECK(oracles::is_witness(sys, result.witness(), 1e-9));
  }
  SUBCASE("x <= -1 and x >= 1") {
    const IneqSystem sys(mat({{1.0}, {-1.0}}), vec({-1.0, -1.0}));
    const auto result = check_feasible(sys);
    REQUIRE_FALSE(result.is_feasible());
    CHECK(oracles::is_certificate(sys, result.certificate()));
  }
  SUBCASE("empty system") {
    const IneqSystem sys(MatrixXd(0, 3), VectorXd(0));
    CHECK(check_feasible(sys).is_feasible());
  }
  SUBCASE("random systems agree with their evidence") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
      const int rows = 2 + trial % 9;
      const int cols = 1 + trial % 4;
      const IneqSystem sys(oracles::random_matrix(rng, rows, cols), oracles::random_matrix(rng, rows, 1));
      CHECK(oracles::verified_verdict(sys) >= 0);
    }
  }
}

TEST_CASE("IIS extraction") {
  SUBCASE("hand example") {
    // x <= 1, x >= 2, y <= 5  ->  IIS {0, 1}.
    const IneqSystem sys(mat({{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}}), vec({1.0, -2.0, 5.0}), {7, 8, 9});
    const auto iis = extract_iis(sys);
    CHECK(iis == std::vector<int>{7, 8});
    CHECK(oracles::is_irreducible(sys, iis));
  }
  SUBCASE("feasible input") {
    const IneqSystem sys(mat({{1.0}}), vec({1.0}));
    CHECK_THROWS_AS(extract_iis(sys), Error);
    try {
      extract_iis(sys);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::NotInfeasible);
    }
  }
  SUBCASE("random infeasible systems") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
      const IneqSystem sys = oracles::random_infeasible(rng, 3 + trial % 8, 1 + trial % 4);
      const auto iis = extract_iis(sys);
      CHECK_FALSE(iis.empty());
      CHECK(oracles::is_irreducible(sys, iis));
    }
  }
}

TEST_CASE("Chebyshev center") {
  SUBCASE("unit square") {
    const IneqSystem sys(mat({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}), vec({1, 0, 1, 0}));
    const auto ball = chebyshev_center(sys);
    CHECK(ball.radius == doctest::Approx(0.5).epsilon(1e-9));
    CHECK((ball.center - vec({0.5, 0.5})).norm() < 1e-9);
  }
  SUBCASE("empty polyhedron has negative radius") {
    const IneqSystem sys(mat({{1.0}, {-1.0}}), vec({-1.0, -1.0}));
    CHECK(chebyshev_center(sys).radius < 0.0);
  }
  SUBCASE("half line is unbounded") {
    const IneqSystem sys(mat({{1.0}}), vec({0.0}));
    CHECK(chebyshev_center(sys).unbounded());
  }
  SUBCASE("flat polyhedron") {
    const IneqSystem sys(mat({{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}), vec({1.0, -1.0, 1.0, 1.0}));
    CHECK(std::abs(chebyshev_center(sys).radius) < 1e-9);
  }
  SUBCASE("zero row") {
    const IneqSystem sys(mat({{0.0, 0.0}}), vec({1.0}));
    CHECK_THROWS_AS(chebyshev_center(sys), Error);
  }
}
