#pragma once

#include <cstdint>
#include <utility>

#include "spacc/types.hpp"

namespace spacc {

/// Copy-number style data: X(i,j) = mu_j + s * m + noise, where per
/// (subject, region) the shift indicator s is Bernoulli(q) and the shift
/// magnitude m is a uniform draw from [a, b] with a random sign.
struct CnvSimParams {
  Index n = 20;
  Index p = 500;
  std::vector<std::int64_t> positions;       // length p
  std::vector<SubproblemSpan> segments;      // true regions, partition of probes
  double q = 0.7;                            // shift probability
  double a = 0.2;                            // magnitude lower bound
  double b = 0.4;                            // magnitude upper bound
  double sigma = 0.1;                        // noise standard deviation
  Vector base_mean;                          // mu, length p; empty = zeros
  std::uint64_t seed = 1;
};

/// Methylation-style data: latent Gaussian vectors with a two-rate
/// exponential spatial covariance (slow decay inside regions, fast decay
/// across), pushed through the standard normal CDF so values land in (0,1).
struct MethSimParams {
  Index n = 50;
  Index p = 300;
  std::vector<std::int64_t> positions;
  std::vector<SubproblemSpan> segments;
  double sigma_w = 100000.0;  // within-region decay length in bp
  double sigma_b = 10.0;      // between-region decay length in bp
  std::uint64_t seed = 1;
};

/// Region-level association data: per (subject, region) means from
/// Beta(2,2), probe values from a beta distribution concentrated around
/// the region mean, and a linear response on a causal subset of regions.
struct RewasSimParams {
  Index n = 94;
  Index p = 2000;
  std::vector<SubproblemSpan> segments;
  std::vector<Index> causal_regions;  // indices into segments
  double beta_seed = 1.0;             // coefficient location/scale
  double noise_sigma = 1.0;
  double concentration = 20.0;        // kappa; larger = tighter probes
  std::uint64_t seed = 1;
};

struct RewasData {
  ProbeMatrix matrix;
  Vector response;               // length n
  RegionAssignment truth;
  std::vector<Index> causal_regions;
  Matrix region_means;           // n x G, the latent m(i,g)
};

/// Random contiguous partition of p probes with geometric segment lengths
/// of the given mean (>= 1); deterministic by seed.
std::vector<SubproblemSpan> gen_segments(Index p, double mean_len,
                                         std::uint64_t seed);

/// Sorted positions with integer gaps uniform in [min_gap, max_gap].
std::vector<std::int64_t> gen_positions(Index p, std::int64_t min_gap,
                                        std::int64_t max_gap,
                                        std::uint64_t seed,
                                        std::int64_t origin = 1);

RegionAssignment segments_to_labels(const std::vector<SubproblemSpan>& segments,
                                    Index p);

std::pair<ProbeMatrix, RegionAssignment> simulate_cnv(const CnvSimParams& params);

std::pair<ProbeMatrix, RegionAssignment> simulate_methylation(
    const MethSimParams& params);

RewasData simulate_rewas(const RewasSimParams& params);

/// The two-rate exponential kernel of the methylation model, before the
/// positive-semidefinite repair.
Matrix meth_covariance(const MethSimParams& params);

/// Clips negative eigenvalues to zero and re-symmetrizes. Throws
/// convergence_error if the eigendecomposition fails.
Matrix repair_psd(const Matrix& sym);

}  // namespace spacc
