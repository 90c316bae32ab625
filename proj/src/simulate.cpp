#include "spacc/simulate.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "spacc/rng.hpp"

namespace spacc {

namespace {

void check_segments(const std::vector<SubproblemSpan>& segments, Index p) {
  if (segments.empty())
    throw validation_error("simulate: segments must not be empty");
  Index expect = 0;
  for (const SubproblemSpan& s : segments) {
    if (s.start != expect || s.end < s.start)
      throw validation_error("simulate: segments must partition probes in order");
    expect = s.end + 1;
  }
  if (expect != p)
    throw validation_error("simulate: segments cover " + std::to_string(expect) +
                           " probes, expected " + std::to_string(p));
}

void check_positions(const std::vector<std::int64_t>& positions, Index p) {
  if (static_cast<Index>(positions.size()) != p)
    throw validation_error("simulate: positions length must equal p");
  for (std::size_t i = 0; i + 1 < positions.size(); ++i)
    if (positions[i + 1] < positions[i])
      throw validation_error("simulate: positions must be sorted");
}

double standard_normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

}  // namespace

std::vector<SubproblemSpan> gen_segments(Index p, double mean_len,
                                         std::uint64_t seed) {
  if (p < 1) throw validation_error("gen_segments: p must be >= 1");
  if (mean_len < 1.0) throw validation_error("gen_segments: mean_len must be >= 1");
  Rng rng(seed);
  const double q = 1.0 / mean_len;  // length = 1 + Geometric(q), mean = mean_len
  std::vector<SubproblemSpan> spans;
  Index start = 0;
  while (start < p) {
    Index len = 1 + static_cast<Index>(q >= 1.0 ? 0 : rng.geometric(q));
    len = std::min(len, p - start);
    spans.push_back({start, start + len - 1});
    start += len;
  }
  return spans;
}

std::vector<std::int64_t> gen_positions(Index p, std::int64_t min_gap,
                                        std::int64_t max_gap,
                                        std::uint64_t seed,
                                        std::int64_t origin) {
  if (p < 1 || min_gap < 0 || max_gap < min_gap)
    throw validation_error("gen_positions: bad arguments");
  Rng rng(seed);
  std::vector<std::int64_t> positions(static_cast<std::size_t>(p));
  std::int64_t pos = origin;
  for (Index j = 0; j < p; ++j) {
    positions[static_cast<std::size_t>(j)] = pos;
    pos += min_gap +
           static_cast<std::int64_t>(rng.below(
               static_cast<std::uint64_t>(max_gap - min_gap + 1)));
  }
  return positions;
}

RegionAssignment segments_to_labels(const std::vector<SubproblemSpan>& segments,
                                    Index p) {
  check_segments(segments, p);
  RegionAssignment truth;
  truth.labels.resize(static_cast<std::size_t>(p));
  int label = 1;
  for (const SubproblemSpan& s : segments) {
    for (Index j = s.start; j <= s.end; ++j)
      truth.labels[static_cast<std::size_t>(j)] = label;
    ++label;
  }
  return truth;
}

std::pair<ProbeMatrix, RegionAssignment> simulate_cnv(const CnvSimParams& params) {
  if (params.n < 1 || params.p < 1)
    throw validation_error("simulate_cnv: n and p must be >= 1");
  if (params.q < 0.0 || params.q > 1.0)
    throw validation_error("simulate_cnv: q must be in [0, 1]");
  if (!(params.a > 0.0) || params.b < params.a)
    throw validation_error("simulate_cnv: need 0 < a <= b");
  if (params.sigma < 0.0)
    throw validation_error("simulate_cnv: sigma must be >= 0");
  check_segments(params.segments, params.p);
  check_positions(params.positions, params.p);
  if (params.base_mean.size() != 0 && params.base_mean.size() != params.p)
    throw validation_error("simulate_cnv: base_mean length must equal p");

  Rng rng(params.seed);
  const Index G = static_cast<Index>(params.segments.size());

  // Per (subject, region) shifts, region-major so the draw order is fixed.
  Matrix shift = Matrix::Zero(params.n, G);
  for (Index g = 0; g < G; ++g)
    for (Index i = 0; i < params.n; ++i)
      if (rng.bernoulli(params.q)) {
        const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
        shift(i, g) = sign * rng.uniform(params.a, params.b);
      }

  ProbeMatrix out;
  out.values.resize(params.n, params.p);
  out.mask = Mask::Constant(params.n, params.p, true);
  out.positions = params.positions;

  const RegionAssignment truth = segments_to_labels(params.segments, params.p);
  for (Index i = 0; i < params.n; ++i)
    for (Index j = 0; j < params.p; ++j) {
      const double mu =
          params.base_mean.size() == params.p ? params.base_mean[j] : 0.0;
      const Index g = truth.labels[static_cast<std::size_t>(j)] - 1;
      const double noise = params.sigma > 0.0 ? params.sigma * rng.normal() : 0.0;
      out.values(i, j) = mu + shift(i, g) + noise;
    }

  return {std::move(out), truth};
}

Matrix meth_covariance(const MethSimParams& params) {
  if (!(params.sigma_w > 0.0) || !(params.sigma_b > 0.0))
    throw validation_error("simulate_methylation: decay lengths must be positive");
  check_segments(params.segments, params.p);
  check_positions(params.positions, params.p);

  const RegionAssignment truth = segments_to_labels(params.segments, params.p);
  Matrix sigma(params.p, params.p);
  for (Index i = 0; i < params.p; ++i)
    for (Index j = i; j < params.p; ++j) {
      const double d = static_cast<double>(
          params.positions[static_cast<std::size_t>(j)] -
          params.positions[static_cast<std::size_t>(i)]);
      const bool same = truth.labels[static_cast<std::size_t>(i)] ==
                        truth.labels[static_cast<std::size_t>(j)];
      const double v = std::exp(-d / (same ? params.sigma_w : params.sigma_b));
      sigma(i, j) = v;
      sigma(j, i) = v;
    }
  return sigma;
}

Matrix repair_psd(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success)
    throw convergence_error("repair_psd: eigendecomposition did not converge");
  const Vector lambda = es.eigenvalues().cwiseMax(0.0);
  Matrix repaired = es.eigenvectors() * lambda.asDiagonal() *
                    es.eigenvectors().transpose();
  repaired = 0.5 * (repaired + repaired.transpose()).eval();
  return repaired;
}

std::pair<ProbeMatrix, RegionAssignment> simulate_methylation(
    const MethSimParams& params) {
  if (params.n < 1 || params.p < 1)
    throw validation_error("simulate_methylation: n and p must be >= 1");

  const Matrix sigma = meth_covariance(params);
  Eigen::SelfAdjointEigenSolver<Matrix> es(repair_psd(sigma));
  if (es.info() != Eigen::Success)
    throw convergence_error("simulate_methylation: eigendecomposition failed");
  const Matrix transform =
      es.eigenvectors() *
      es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();

  Rng rng(params.seed);
  ProbeMatrix out;
  out.values.resize(params.n, params.p);
  out.mask = Mask::Constant(params.n, params.p, true);
  out.positions = params.positions;

  Vector g(params.p);
  for (Index i = 0; i < params.n; ++i) {
    for (Index j = 0; j < params.p; ++j) g[j] = rng.normal();
    const Vector z = transform * g;
    for (Index j = 0; j < params.p; ++j)
      out.values(i, j) =
          std::clamp(standard_normal_cdf(z[j]), 1e-12, 1.0 - 1e-12);
  }

  return {std::move(out), segments_to_labels(params.segments, params.p)};
}

RewasData simulate_rewas(const RewasSimParams& params) {
  if (params.n < 1 || params.p < 1)
    throw validation_error("simulate_rewas: n and p must be >= 1");
  check_segments(params.segments, params.p);
  if (params.causal_regions.empty())
    throw validation_error("simulate_rewas: need at least one causal region");
  for (Index g : params.causal_regions)
    if (g < 0 || g >= static_cast<Index>(params.segments.size()))
      throw validation_error("simulate_rewas: causal region index out of range");
  if (!(params.beta_seed > 0.0))
    throw validation_error("simulate_rewas: beta_seed must be positive");
  if (!(params.concentration > 0.0))
    throw validation_error("simulate_rewas: concentration must be positive");
  if (params.noise_sigma < 0.0)
    throw validation_error("simulate_rewas: noise_sigma must be >= 0");

  Rng rng(params.seed);
  const Index G = static_cast<Index>(params.segments.size());

  RewasData data;
  data.truth = segments_to_labels(params.segments, params.p);
  data.causal_regions = params.causal_regions;

  data.region_means.resize(params.n, G);
  for (Index i = 0; i < params.n; ++i)
    for (Index g = 0; g < G; ++g)
      data.region_means(i, g) = std::clamp(rng.beta(2.0, 2.0), 1e-9, 1.0 - 1e-9);

  data.matrix.values.resize(params.n, params.p);
  data.matrix.mask = Mask::Constant(params.n, params.p, true);
  data.matrix.positions.resize(static_cast<std::size_t>(params.p));
  for (Index j = 0; j < params.p; ++j)
    data.matrix.positions[static_cast<std::size_t>(j)] = j + 1;

  const double kappa = params.concentration;
  for (Index i = 0; i < params.n; ++i)
    for (Index j = 0; j < params.p; ++j) {
      const Index g = data.truth.labels[static_cast<std::size_t>(j)] - 1;
      const double m = data.region_means(i, g);
      // Shapes kappa*m and kappa*(1-m) keep the probe mean at m.
      const double x = rng.beta(kappa * m, kappa * (1.0 - m));
      data.matrix.values(i, j) = std::clamp(x, 1e-12, 1.0 - 1e-12);
    }

  Vector beta(params.causal_regions.size());
  for (Index l = 0; l < beta.size(); ++l)
    beta[l] = rng.normal(params.beta_seed, std::sqrt(params.beta_seed));

  data.response.resize(params.n);
  for (Index i = 0; i < params.n; ++i) {
    double y = 0.0;
    for (Index l = 0; l < beta.size(); ++l)
      y += beta[l] *
           data.region_means(i, params.causal_regions[static_cast<std::size_t>(l)]);
    if (params.noise_sigma > 0.0) y += params.noise_sigma * rng.normal();
    data.response[i] = y;
  }

  return data;
}

}  // namespace spacc
