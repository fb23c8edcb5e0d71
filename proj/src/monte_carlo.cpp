#include "psched/monte_carlo.hpp"

#include <algorithm>
#include <cmath>

#include "psched/detection.hpp"

namespace psched {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Per-state sample counts summing exactly to n with |count - n*prior| < 1.
std::array<std::int64_t, 4> largest_remainder_counts(
    std::int64_t n, const std::array<double, 4>& priors) {
  std::array<std::int64_t, 4> counts;
  std::array<double, 4> remainder;
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    double exact = static_cast<double>(n) * priors[i];
    counts[i] = static_cast<std::int64_t>(std::floor(exact));
    remainder[i] = exact - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  std::array<std::size_t, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainder[a] > remainder[b];  // ties keep index order
  });
  for (std::int64_t left = n - assigned, i = 0; left > 0; --left, ++i)
    ++counts[order[static_cast<std::size_t>(i)]];
  return counts;
}

}  // namespace

std::int64_t sample_poisson(double mu, std::mt19937_64& rng) {
  if (!(mu >= 0.0) || !std::isfinite(mu))
    throw std::domain_error("mean mu must be nonnegative and finite");
  double u = uniform01(rng);
  if (mu == 0.0) return 0;
  long double mul = static_cast<long double>(mu);
  long double term = expl(-mul);
  long double cdf = term;
  std::int64_t k = 0;
  while (cdf <= static_cast<long double>(u)) {
    ++k;
    term *= mul / static_cast<long double>(k);
    if (cdf + term == cdf) break;  // resolution floor; clamp at the far tail
    cdf += term;
  }
  return k;
}

std::array<std::int64_t, 3> sample_observation(const HypothesisState& state,
                                               std::mt19937_64& rng) {
  return {sample_poisson(state.mu.mu1, rng), sample_poisson(state.mu.mu2, rng),
          sample_poisson(state.mu.mu3, rng)};
}

McResult empirical_correct_rate(const ChannelParams& params,
                                const TimeAllocation& alloc,
                                const McConfig& cfg) {
  validate(params);
  validate(alloc, params.T);
  if (cfg.n_samples < 1)
    throw std::invalid_argument("n_samples must be at least 1");

  std::array<HypothesisState, 4> states = hypothesis_set(params, alloc);
  std::array<double, 4> priors{states[0].prior, states[1].prior,
                               states[2].prior, states[3].prior};

  McResult res;
  res.n = cfg.n_samples;
  std::int64_t correct = 0;

  if (cfg.stratified) {
    res.per_hypothesis_counts = largest_remainder_counts(cfg.n_samples, priors);
    for (std::size_t s = 0; s < 4; ++s) {
      std::mt19937_64 rng(cfg.seed ^ static_cast<std::uint64_t>(s));
      for (std::int64_t j = 0; j < res.per_hypothesis_counts[s]; ++j) {
        std::array<std::int64_t, 3> y = sample_observation(states[s], rng);
        if (map_decide(y, params, alloc).decided == static_cast<int>(s))
          ++correct;
      }
    }
  } else {
    std::mt19937_64 rng(cfg.seed);
    for (std::int64_t j = 0; j < cfg.n_samples; ++j) {
      double u = uniform01(rng);
      std::size_t s = 0;
      double acc = priors[0];
      while (s < 3 && u >= acc) acc += priors[++s];
      ++res.per_hypothesis_counts[s];
      std::array<std::int64_t, 3> y = sample_observation(states[s], rng);
      if (map_decide(y, params, alloc).decided == static_cast<int>(s))
        ++correct;
    }
  }

  res.cd = static_cast<double>(correct) / static_cast<double>(res.n);
  res.std_error =
      std::sqrt(res.cd * (1.0 - res.cd) / static_cast<double>(res.n));
  return res;
}

}  // namespace psched
