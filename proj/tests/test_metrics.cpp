#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "partitions.hpp"
#include "spacc/metrics.hpp"
#include "spacc/rng.hpp"

using namespace spacc;

TEST_CASE("contingency: counts and marginals") {
  SUBCASE("identical assignments give a diagonal table") {
    const ContingencyTable t = contingency({1, 1, 2, 3, 3}, {1, 1, 2, 3, 3});
    CHECK(t.counts.rows() == 3);
    CHECK(t.counts.cols() == 3);
    for (Index g = 0; g < 3; ++g)
      for (Index h = 0; h < 3; ++h)
        if (g != h) CHECK(t.counts(g, h) == 0);
    CHECK(t.total == 5);
  }
  SUBCASE("one cluster against singletons") {
    const ContingencyTable t = contingency({1, 1, 1}, {1, 2, 3});
    CHECK(t.counts.rows() == 1);
    CHECK(t.counts.cols() == 3);
    for (Index h = 0; h < 3; ++h) CHECK(t.counts(0, h) == 1);
  }
  SUBCASE("worked 2x2 example") {
    const ContingencyTable t = contingency({1, 1, 2}, {1, 2, 2});
    REQUIRE(t.counts.rows() == 2);
    REQUIRE(t.counts.cols() == 2);
    CHECK(t.counts(0, 0) == 1);
    CHECK(t.counts(0, 1) == 1);
    CHECK(t.counts(1, 0) == 0);
    CHECK(t.counts(1, 1) == 1);
  }
  SUBCASE("length mismatch is rejected") {
    CHECK_THROWS_AS(contingency({1, 2}, {1, 2, 3}), validation_error);
  }
}

TEST_CASE("pair-counting scores on worked examples") {
  SUBCASE("identical clusterings score perfectly") {
    const ContingencyTable t = contingency({1, 1, 2, 2}, {5, 5, 9, 9});
    CHECK(rand_index(t) == 1.0);
    CHECK(adjusted_rand(t) == 1.0);
    CHECK(jaccard(t) == 1.0);
    CHECK(variation_of_information(t) == 0.0);
  }
  SUBCASE("(1,1,2) vs (1,2,2): a=0 b=1 c=1 d=1") {
    const ContingencyTable t = contingency({1, 1, 2}, {1, 2, 2});
    CHECK(rand_index(t) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(jaccard(t) == 0.0);
    CHECK(adjusted_rand(t) == doctest::Approx(-0.5).epsilon(1e-15));
    // VI works out to (4/3) ln 2
    CHECK(variation_of_information(t) ==
          doctest::Approx(4.0 * std::log(2.0) / 3.0).epsilon(1e-14));
    CHECK(variation_of_information(t) == doctest::Approx(0.9242).epsilon(1e-4));
  }
  SUBCASE("all singletons on both sides: every pair is apart in both") {
    const ContingencyTable t = contingency({1, 2, 3, 4}, {4, 3, 2, 1});
    CHECK(rand_index(t) == 1.0);
    CHECK(adjusted_rand(t) == 1.0);  // identical partitions, degenerate case
    CHECK(jaccard(t) == 1.0);        // a+b+c = 0 convention
    CHECK(variation_of_information(t) == 0.0);
  }
  SUBCASE("one cluster vs singletons: VI = log p") {
    const ContingencyTable t = contingency({1, 1, 1, 1, 1}, {1, 2, 3, 4, 5});
    CHECK(variation_of_information(t) ==
          doctest::Approx(std::log(5.0)).epsilon(1e-14));
    CHECK(jaccard(t) == 0.0);
    CHECK(adjusted_rand(t) == 0.0);
  }
  SUBCASE("p < 2 is rejected") {
    const ContingencyTable t = contingency({1}, {1});
    CHECK_THROWS_AS(rand_index(t), validation_error);
  }
}

TEST_CASE("VI respects the log base") {
  const ContingencyTable t = contingency({1, 1, 2}, {1, 2, 2});
  const double nats = variation_of_information(t);
  const double bits = variation_of_information(t, 2.0);
  CHECK(bits == doctest::Approx(nats / std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("all four scores agree with brute force over partitions of 4") {
  const auto parts = partitions::all_partitions(4);
  REQUIRE(parts.size() == 15);  // Bell(4)
  for (const auto& t : parts)
    for (const auto& e : parts) {
      const ContingencyTable table = contingency(t, e);
      CHECK(std::abs(rand_index(table) - partitions::rand_brute(t, e)) <= 1e-12);
      CHECK(std::abs(jaccard(table) - partitions::jaccard_brute(t, e)) <= 1e-12);
      CHECK(std::abs(adjusted_rand(table) -
                     partitions::adjusted_rand_brute(t, e)) <= 1e-12);
      CHECK(std::abs(variation_of_information(table) -
                     partitions::vi_brute(t, e)) <= 1e-12);
    }
}

TEST_CASE("VI is a metric on partitions of 4") {
  const auto parts = partitions::all_partitions(4);
  std::vector<std::vector<double>> vi(parts.size(),
                                      std::vector<double>(parts.size()));
  for (std::size_t x = 0; x < parts.size(); ++x)
    for (std::size_t y = 0; y < parts.size(); ++y)
      vi[x][y] = variation_of_information(contingency(parts[x], parts[y]));

  for (std::size_t x = 0; x < parts.size(); ++x)
    for (std::size_t y = 0; y < parts.size(); ++y) {
      CHECK(std::abs(vi[x][y] - vi[y][x]) <= 1e-12);
      if (x != y) CHECK(vi[x][y] > 0.0);
      for (std::size_t z = 0; z < parts.size(); ++z)
        CHECK(vi[x][z] <= vi[x][y] + vi[y][z] + 1e-12);
    }
}

TEST_CASE("ARI is 1 exactly for identical partitions of 4") {
  const auto parts = partitions::all_partitions(4);
  for (std::size_t x = 0; x < parts.size(); ++x)
    for (std::size_t y = 0; y < parts.size(); ++y) {
      const double ari = adjusted_rand(contingency(parts[x], parts[y]));
      if (x == y)
        CHECK(ari == doctest::Approx(1.0).epsilon(1e-14));
      else
        CHECK(ari < 1.0 - 1e-12);
    }
}

TEST_CASE("scores are invariant to relabeling") {
  Rng rng(99);
  for (int rep = 0; rep < 30; ++rep) {
    const int p = 6 + static_cast<int>(rng.below(10));
    std::vector<int> t(static_cast<std::size_t>(p));
    std::vector<int> e(static_cast<std::size_t>(p));
    for (auto& x : t) x = static_cast<int>(rng.below(4));
    for (auto& x : e) x = static_cast<int>(rng.below(4));
    std::vector<int> t2 = t;
    std::vector<int> e2 = e;
    for (auto& x : t2) x = 100 - 7 * x;  // injective relabeling
    for (auto& x : e2) x = 31 + 11 * x;

    const ContingencyTable a = contingency(t, e);
    const ContingencyTable b = contingency(t2, e2);
    CHECK(rand_index(a) == doctest::Approx(rand_index(b)).epsilon(1e-15));
    CHECK(adjusted_rand(a) == doctest::Approx(adjusted_rand(b)).epsilon(1e-15));
    CHECK(jaccard(a) == doctest::Approx(jaccard(b)).epsilon(1e-15));
    CHECK(variation_of_information(a) ==
          doctest::Approx(variation_of_information(b)).epsilon(1e-15));
  }
}

TEST_CASE("pair counts always total C(p,2)") {
  Rng rng(101);
  for (int rep = 0; rep < 30; ++rep) {
    const long long p = 4 + static_cast<long long>(rng.below(40));
    std::vector<int> t(static_cast<std::size_t>(p));
    std::vector<int> e(static_cast<std::size_t>(p));
    for (auto& x : t) x = static_cast<int>(rng.below(5));
    for (auto& x : e) x = static_cast<int>(rng.below(5));
    const auto pc = partitions::count_pairs(t, e);
    CHECK(pc.a + pc.b + pc.c + pc.d == p * (p - 1) / 2);
  }
}
