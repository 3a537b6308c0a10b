#include "arenkit/error.hpp"
#include "arenkit/uo_count.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace arenkit;

TEST_CASE("region_bound values") {
  CHECK(region_bound(3, 2) == 7);
  CHECK(region_bound(3, 1) == 4);
  CHECK(region_bound(0, 3) == 1);
  for (int N = 1; N <= 24; ++N) {
    for (int n = N; n <= N + 3; ++n) CHECK(region_bound(N, n) == pow2(static_cast<unsigned>(N)));
  }
  for (int h = 0; h <= 40; ++h) {
    for (int d = 1; d <= 5; ++d) {
      CHECK(region_bound(h, d).convert_to<double>() == oracles::binomial_sum(h, d));
    }
  }
  CHECK_THROWS_AS(region_bound(-1, 2), Error);
  CHECK_THROWS_AS(region_bound(3, 0), Error);
}

TEST_CASE("unique-order bound") {
  const UoBound two = estimate_unique_order_count(2, 1);
  CHECK(two.n_hyperplanes == 1);
  CHECK(two.m_est == 2);
  const UoBound three = estimate_unique_order_count(3, 1);
  CHECK(three.n_hyperplanes == 3);
  CHECK(three.m_est == 4);
  const UoBound four = estimate_unique_order_count(4, 2);
  CHECK(four.n_hyperplanes == 6);
  CHECK(four.m_est == static_cast<long>(oracles::binomial_sum(6, 2)));
  CHECK(four.m_est == 22);
  const UoBound literal = estimate_unique_order_count(4, 2, HyperplaneCounting::Literal);
  CHECK(literal.n_hyperplanes == 4);
  CHECK(literal.m_est == 11);
  CHECK(estimate_unique_order_count(1, 3).m_est == 1);
  CHECK_THROWS_AS(estimate_unique_order_count(0, 2), Error);

  // m_est <= 2^hyperplanes.
  for (int N = 1; N <= 12; ++N) {
    const UoBound b = estimate_unique_order_count(N, 3);
    CHECK(b.m_est <= pow2(static_cast<unsigned>(b.n_hyperplanes)));
  }
}

TEST_CASE("observed orderings of random affine functions respect the bound") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int N = 2 + trial % 4;
    const int n = 1 + trial % 2;
    std::vector<std::pair<VectorXd, double>> fns;
    for (int j = 0; j < N; ++j) {
      VectorXd g(n);
      for (int i = 0; i < n; ++i) g(i) = coef(rng);
      fns.emplace_back(g, coef(rng));
    }
    std::set<std::vector<int>> orderings;
    std::uniform_real_distribution<double> point(-10.0, 10.0);
    for (int s = 0; s < 20000; ++s) {
      VectorXd x(n);
      for (int i = 0; i < n; ++i) x(i) = point(rng);
      std::vector<int> order(static_cast<std::size_t>(N));
      for (int j = 0; j < N; ++j) order[static_cast<std::size_t>(j)] = j;
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        return fns[static_cast<std::size_t>(a)].first.dot(x) + fns[static_cast<std::size_t>(a)].second <
               fns[static_cast<std::size_t>(b)].first.dot(x) + fns[static_cast<std::size_t>(b)].second;
      });
      orderings.insert(order);
    }
    CHECK(BigInt(orderings.size()) <= estimate_unique_order_count(N, n).m_est);
  }
}
