#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "psched/channel.hpp"

namespace psched {

struct McConfig {
  std::int64_t n_samples = 100000;
  std::uint64_t seed = 12345;
  bool stratified = true;  // per-state sample counts proportional to priors
};

struct McResult {
  double cd = 0.0;        // empirical correct-decision rate
  std::int64_t n = 0;     // samples used
  double std_error = 0.0; // sqrt(cd*(1-cd)/n)
  std::array<std::int64_t, 4> per_hypothesis_counts{0, 0, 0, 0};
};

// One Poisson draw with mean mu by cdf inversion, accumulated in extended
// precision. Uniform variates are derived from the raw engine output
// ((x >> 11) * 2^-53) so results do not depend on standard-library
// distribution internals.
std::int64_t sample_poisson(double mu, std::mt19937_64& rng);

// Three independent Poisson draws at the state's expected counts, in the
// order (y1, y2, y3).
std::array<std::int64_t, 3> sample_observation(const HypothesisState& state,
                                               std::mt19937_64& rng);

// Draws observations, runs the maximum-a-posteriori decision on each, and
// reports the fraction decided correctly. Stratified mode fixes per-state
// counts by largest-remainder rounding of n*prior and gives each stratum its
// own engine seeded seed^index, so results are bit-identical for a given
// config regardless of scheduling.
McResult empirical_correct_rate(const ChannelParams& params,
                                const TimeAllocation& alloc,
                                const McConfig& cfg = {});

}  // namespace psched
