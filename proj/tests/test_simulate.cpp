#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "spacc/simulate.hpp"
#include "stats.hpp"

using namespace spacc;

TEST_CASE("gen_segments: always a contiguous partition") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Index p = 1 + static_cast<Index>(seed % 97);
    const double mean_len = 1.0 + static_cast<double>(seed % 13);
    const auto spans = gen_segments(p, mean_len, seed);
    REQUIRE(!spans.empty());
    CHECK(spans.front().start == 0);
    CHECK(spans.back().end == p - 1);
    for (std::size_t s = 0; s + 1 < spans.size(); ++s)
      CHECK(spans[s + 1].start == spans[s].end + 1);
  }
}

TEST_CASE("gen_segments: mean length drives the segment count") {
  // mean_len = p yields one span with probability ~ 1/e, never zero spans
  int singles = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto spans = gen_segments(50, 50.0, seed);
    CHECK(!spans.empty());
    if (spans.size() == 1) ++singles;
  }
  CHECK(singles >= 20);
  CHECK(singles <= 55);

  // mean_len = 1 gives exactly singletons
  const auto spans = gen_segments(20, 1.0, 3);
  CHECK(spans.size() == 20);

  // determinism
  CHECK(gen_segments(123, 7.0, 99) == gen_segments(123, 7.0, 99));
}

TEST_CASE("simulate_cnv: noiseless deterministic-magnitude structure") {
  CnvSimParams params;
  params.n = 6;
  params.p = 40;
  params.positions = gen_positions(40, 800, 1200, 5);
  params.segments = gen_segments(40, 10.0, 5);
  params.q = 1.0;
  params.a = 0.3;
  params.b = 0.3;
  params.sigma = 0.0;
  params.seed = 17;
  const auto [data, truth] = simulate_cnv(params);

  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 40; ++j)
      CHECK(std::abs(std::abs(data.values(i, j)) - 0.3) <= 1e-15);
  // constant within each (subject, region)
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j + 1 < 40; ++j)
      if (truth.labels[static_cast<std::size_t>(j)] ==
          truth.labels[static_cast<std::size_t>(j + 1)])
        CHECK(data.values(i, j) == data.values(i, j + 1));
}

TEST_CASE("simulate_cnv: q = 0 and sigma = 0 reproduce the base mean") {
  CnvSimParams params;
  params.n = 3;
  params.p = 12;
  params.positions = gen_positions(12, 1000, 1000, 2);
  params.segments = gen_segments(12, 4.0, 2);
  params.q = 0.0;
  params.sigma = 0.0;
  params.base_mean = Vector::LinSpaced(12, -1.0, 1.0);
  const auto [data, truth] = simulate_cnv(params);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 12; ++j)
      CHECK(data.values(i, j) == params.base_mean[j]);
}

TEST_CASE("simulate_cnv: easy preset noise level matches sigma^2") {
  CnvSimParams params;
  params.n = 20;
  params.p = 500;
  params.positions = gen_positions(500, 500, 1500, 7);
  params.segments = gen_segments(500, 50.0, 7);
  params.seed = 23;
  const auto [data, truth] = simulate_cnv(params);

  // within-region per-subject variance estimates sigma^2 = 0.01
  std::vector<double> variances;
  Index start = 0;
  for (const auto& seg : params.segments) {
    if (seg.size() >= 8) {
      for (Index i = 0; i < params.n; ++i) {
        std::vector<double> vals;
        for (Index j = seg.start; j <= seg.end; ++j)
          vals.push_back(data.values(i, j));
        variances.push_back(stats::variance(vals));
      }
    }
    start = seg.end + 1;
  }
  REQUIRE(variances.size() >= 20);
  const double avg = stats::mean(variances);
  CHECK(avg > 0.008);
  CHECK(avg < 0.012);
}

TEST_CASE("simulate_cnv: deterministic by seed") {
  CnvSimParams params;
  params.n = 4;
  params.p = 30;
  params.positions = gen_positions(30, 900, 1100, 3);
  params.segments = gen_segments(30, 6.0, 3);
  params.seed = 77;
  const auto [a, ta] = simulate_cnv(params);
  const auto [b, tb] = simulate_cnv(params);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK(ta == tb);
}

TEST_CASE("simulate_methylation: single probe is uniform on (0,1)") {
  MethSimParams params;
  params.n = 2000;
  params.p = 1;
  params.positions = {500};
  params.segments = {{0, 0}};
  params.seed = 5;
  const auto [data, truth] = simulate_methylation(params);
  std::vector<double> vals;
  for (Index i = 0; i < params.n; ++i) vals.push_back(data.values(i, 0));
  for (double v : vals) {
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
  CHECK(stats::mean(vals) == doctest::Approx(0.5).epsilon(0.05));
  CHECK(stats::variance(vals) == doctest::Approx(1.0 / 12.0).epsilon(0.1));
}

TEST_CASE("simulate_methylation: high preset separates within from between") {
  MethSimParams params;
  params.n = 50;
  params.p = 300;
  params.positions = gen_positions(300, 300, 1000, 11);
  params.segments = gen_segments(300, 20.0, 11);
  params.sigma_w = 100000.0;
  params.sigma_b = 10.0;
  params.seed = 11;
  const auto [data, truth] = simulate_methylation(params);

  // recover the latent z and compare adjacent-probe correlations of z
  auto z_col = [&](Index j) {
    std::vector<double> z(static_cast<std::size_t>(params.n));
    for (Index i = 0; i < params.n; ++i)
      z[static_cast<std::size_t>(i)] = stats::normal_quantile(data.values(i, j));
    return z;
  };
  std::vector<double> within;
  std::vector<double> between;
  for (Index j = 0; j + 1 < params.p; ++j) {
    const double corr = stats::correlation(z_col(j), z_col(j + 1));
    if (truth.labels[static_cast<std::size_t>(j)] ==
        truth.labels[static_cast<std::size_t>(j + 1)])
      within.push_back(corr);
    else
      between.push_back(corr);
  }
  REQUIRE(within.size() > 50);
  REQUIRE(between.size() > 5);
  CHECK(stats::mean(within) - stats::mean(between) >= 0.5);
}

TEST_CASE("simulate_methylation: vanishing sigma_b decorrelates regions") {
  MethSimParams params;
  params.n = 400;
  params.p = 30;
  params.positions = gen_positions(30, 500, 500, 13);
  params.segments = gen_segments(30, 6.0, 13);
  params.sigma_w = 100000.0;
  params.sigma_b = 1e-6;
  params.seed = 13;
  const auto [data, truth] = simulate_methylation(params);

  std::vector<double> between;
  for (Index j = 0; j + 1 < params.p; ++j) {
    if (truth.labels[static_cast<std::size_t>(j)] ==
        truth.labels[static_cast<std::size_t>(j + 1)])
      continue;
    std::vector<double> x(static_cast<std::size_t>(params.n));
    std::vector<double> y(static_cast<std::size_t>(params.n));
    for (Index i = 0; i < params.n; ++i) {
      x[static_cast<std::size_t>(i)] = data.values(i, j);
      y[static_cast<std::size_t>(i)] = data.values(i, j + 1);
    }
    between.push_back(std::abs(stats::correlation(x, y)));
  }
  REQUIRE(!between.empty());
  CHECK(stats::mean(between) < 0.1);
}

TEST_CASE("repair_psd clips negative eigenvalues") {
  MethSimParams params;
  params.n = 2;
  params.p = 60;
  params.positions = gen_positions(60, 400, 900, 19);
  params.segments = gen_segments(60, 10.0, 19);
  const Matrix raw = meth_covariance(params);
  const Matrix fixed = repair_psd(raw);
  Eigen::SelfAdjointEigenSolver<Matrix> es(fixed);
  CHECK(es.eigenvalues().minCoeff() >= -1e-8);
  CHECK((fixed - fixed.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("simulate_rewas: concentration limit pins probes to region means") {
  RewasSimParams params;
  params.n = 10;
  params.p = 200;
  params.segments = gen_segments(200, 10.0, 31);
  params.causal_regions = {0};
  params.concentration = 1e6;
  params.seed = 31;
  const RewasData data = simulate_rewas(params);

  Index close = 0;
  for (Index i = 0; i < params.n; ++i)
    for (Index j = 0; j < params.p; ++j) {
      const Index g = data.truth.labels[static_cast<std::size_t>(j)] - 1;
      if (std::abs(data.matrix.values(i, j) - data.region_means(i, g)) < 0.01)
        ++close;
    }
  CHECK(static_cast<double>(close) >= 0.99 * 10 * 200);
}

TEST_CASE("simulate_rewas: noiseless single-coefficient response is exact") {
  RewasSimParams params;
  params.n = 20;
  params.p = 50;
  params.segments = gen_segments(50, 10.0, 41);
  params.causal_regions = {1};
  params.noise_sigma = 0.0;
  params.beta_seed = 2.0;
  params.seed = 41;
  const RewasData data = simulate_rewas(params);

  // recover beta from the first subject and check exact linearity
  const double beta = data.response[0] / data.region_means(0, 1);
  for (Index i = 0; i < params.n; ++i)
    CHECK(data.response[i] ==
          doctest::Approx(beta * data.region_means(i, 1)).epsilon(1e-12));
}

TEST_CASE("simulate_rewas: probe means track region means") {
  RewasSimParams params;
  params.n = 94;
  params.p = 2000;
  params.segments = gen_segments(2000, 20.0, 51);
  params.causal_regions = {0, 3, 7};
  params.seed = 51;
  const RewasData data = simulate_rewas(params);

  int checked = 0;
  for (std::size_t g = 0; g < params.segments.size() && checked < 30; ++g) {
    const auto& seg = params.segments[g];
    if (seg.size() < 10) continue;
    for (Index i = 0; i < 5; ++i) {
      std::vector<double> vals;
      for (Index j = seg.start; j <= seg.end; ++j)
        vals.push_back(data.matrix.values(i, j));
      const double m = data.region_means(i, static_cast<Index>(g));
      // probe sd around the mean under the beta model
      const double sd = std::sqrt(m * (1.0 - m) / (params.concentration + 1.0));
      const double se = sd / std::sqrt(static_cast<double>(vals.size()));
      CHECK(std::abs(stats::mean(vals) - m) <= 3.0 * se + 0.02);
      ++checked;
    }
  }
  CHECK(checked >= 20);
}

TEST_CASE("generators validate their parameters") {
  CHECK_THROWS_AS(gen_segments(0, 2.0, 1), validation_error);
  CHECK_THROWS_AS(gen_segments(10, 0.5, 1), validation_error);

  CnvSimParams bad;
  bad.n = 2;
  bad.p = 10;
  bad.positions = gen_positions(10, 100, 100, 1);
  bad.segments = gen_segments(10, 3.0, 1);
  bad.q = 1.5;
  CHECK_THROWS_AS(simulate_cnv(bad), validation_error);
  bad.q = 0.5;
  bad.a = 0.0;
  CHECK_THROWS_AS(simulate_cnv(bad), validation_error);

  MethSimParams meth;
  meth.n = 2;
  meth.p = 10;
  meth.positions = gen_positions(10, 100, 100, 1);
  meth.segments = gen_segments(10, 3.0, 1);
  meth.sigma_w = 0.0;
  CHECK_THROWS_AS(simulate_methylation(meth), validation_error);

  RewasSimParams rewas;
  rewas.n = 2;
  rewas.p = 10;
  rewas.segments = gen_segments(10, 3.0, 1);
  rewas.causal_regions = {};
  CHECK_THROWS_AS(simulate_rewas(rewas), validation_error);
}
