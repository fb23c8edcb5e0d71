#include "psched/channel.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "psched/numerics.hpp"

namespace psched {

void validate(const ChannelParams& params) {
  if (!(params.lambda0 > 0.0) || !std::isfinite(params.lambda0))
    throw std::invalid_argument("lambda0 must be positive and finite");
  if (!(params.lambda1 > 0.0) || !std::isfinite(params.lambda1))
    throw std::invalid_argument("lambda1 must be positive and finite");
  if (params.lambda0 > params.lambda1)
    throw std::invalid_argument("lambda0 must not exceed lambda1");
  if (!(params.p > 0.0 && params.p < 1.0))
    throw std::invalid_argument("prior p must lie strictly between 0 and 1");
  if (!(params.T > 0.0) || !std::isfinite(params.T))
    throw std::invalid_argument("total time T must be positive and finite");
}

bool degenerate_rates(const ChannelParams& params) {
  return params.lambda0 == params.lambda1;
}

void validate(const TimeAllocation& alloc, double T) {
  if (!(alloc.t1 >= 0.0) || !(alloc.t2 >= 0.0) || !(alloc.t3 >= 0.0))
    throw std::invalid_argument("allocation components must be nonnegative");
  double sum = alloc.t1 + alloc.t2 + alloc.t3;
  if (!(std::fabs(sum - T) <= 1e-12))
    throw std::invalid_argument(
        "allocation must sum to the total sensing time (got " +
        std::to_string(sum) + ", want " + std::to_string(T) + ")");
}

double prior_pmf(int x1, int x2, double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("prior p must lie strictly between 0 and 1");
  double a = x1 ? p : 1.0 - p;
  double b = x2 ? p : 1.0 - p;
  return a * b;
}

Intensities intensity_vector(int x1, int x2, const TimeAllocation& alloc,
                             const ChannelParams& params) {
  double r1 = x1 ? params.lambda1 : params.lambda0;
  double r2 = x2 ? params.lambda1 : params.lambda0;
  return {r1 * alloc.t1, r2 * alloc.t2, (r1 + r2) * alloc.t3};
}

std::array<HypothesisState, 4> hypothesis_set(const ChannelParams& params,
                                              const TimeAllocation& alloc) {
  std::array<HypothesisState, 4> states;
  for (int x1 = 0; x1 < 2; ++x1) {
    for (int x2 = 0; x2 < 2; ++x2) {
      HypothesisState& s = states[static_cast<std::size_t>(2 * x1 + x2)];
      s.x1 = x1;
      s.x2 = x2;
      s.prior = prior_pmf(x1, x2, params.p);
      s.mu = intensity_vector(x1, x2, alloc, params);
    }
  }
  return states;
}

double poisson_log_pmf(std::int64_t y, double mu) {
  if (y < 0) throw std::domain_error("count y must be nonnegative");
  if (!(mu >= 0.0) || !std::isfinite(mu))
    throw std::domain_error("mean mu must be nonnegative and finite");
  if (mu == 0.0)
    return y == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  double yd = static_cast<double>(y);
  return -mu + yd * std::log(mu) - std::lgamma(yd + 1.0);
}

double poisson_pmf(std::int64_t y, double mu) {
  double lp = poisson_log_pmf(y, mu);
  return std::isinf(lp) ? 0.0 : std::exp(lp);
}

std::int64_t truncation_bound(double mu, double eps) {
  if (!(mu >= 0.0) || !std::isfinite(mu))
    throw std::domain_error("mean mu must be nonnegative and finite");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("eps must lie strictly between 0 and 1");
  if (mu == 0.0) return 0;
  long double target = 1.0L - static_cast<long double>(eps);
  long double mul = static_cast<long double>(mu);
  long double term = expl(-mul);
  long double cdf = term;
  std::int64_t k = 0;
  while (cdf < target) {
    ++k;
    term *= mul / static_cast<long double>(k);
    if (cdf + term == cdf) break;  // resolution floor of extended precision
    cdf += term;
  }
  return k;
}

TruncatedPmfTable fill_pmf_table(double mu, std::int64_t upper) {
  TruncatedPmfTable table;
  table.intensity = mu;
  table.upper = upper;
  table.probs.resize(static_cast<std::size_t>(upper) + 1);
  long double mul = static_cast<long double>(mu);
  long double term = expl(-mul);
  table.probs[0] = static_cast<double>(term);
  for (std::int64_t y = 1; y <= upper; ++y) {
    term *= mul / static_cast<long double>(y);
    table.probs[static_cast<std::size_t>(y)] = static_cast<double>(term);
  }
  return table;
}

DimensionTables build_pmf_tables(const TimeAllocation& alloc,
                                 const ChannelParams& params, double eps) {
  DimensionTables tables;
  std::int64_t u1 = truncation_bound(params.lambda1 * alloc.t1, eps);
  std::int64_t u2 = truncation_bound(params.lambda1 * alloc.t2, eps);
  std::int64_t u3 = truncation_bound(2.0 * params.lambda1 * alloc.t3, eps);
  tables.dim1[0] = fill_pmf_table(params.lambda0 * alloc.t1, u1);
  tables.dim1[1] = fill_pmf_table(params.lambda1 * alloc.t1, u1);
  tables.dim2[0] = fill_pmf_table(params.lambda0 * alloc.t2, u2);
  tables.dim2[1] = fill_pmf_table(params.lambda1 * alloc.t2, u2);
  tables.dim3[0] = fill_pmf_table(2.0 * params.lambda0 * alloc.t3, u3);
  tables.dim3[1] =
      fill_pmf_table((params.lambda0 + params.lambda1) * alloc.t3, u3);
  tables.dim3[2] = fill_pmf_table(2.0 * params.lambda1 * alloc.t3, u3);
  return tables;
}

double table_sum(const TruncatedPmfTable& table) {
  return pairwise_sum(table.probs);
}

double table_entropy_bits(const TruncatedPmfTable& table) {
  std::vector<double> terms(table.probs.size());
  for (std::size_t i = 0; i < table.probs.size(); ++i)
    terms[i] = entropy_term_bits(table.probs[i]);
  return pairwise_sum(terms);
}

}  // namespace psched
