#include "psched/detection.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "psched/numerics.hpp"

namespace psched {

namespace {

// Largest-score index with ties going to the smallest index, which is
// exactly the 00 > 01 > 10 > 11 priority: a later state is chosen only when
// it strictly beats all earlier ones.
int argmax_with_priority(const std::array<double, 4>& scores) {
  int best = 0;
  for (int i = 1; i < 4; ++i)
    if (scores[static_cast<std::size_t>(i)] >
        scores[static_cast<std::size_t>(best)])
      best = i;
  return best;
}

void check_budget(double cells, double budget) {
  if (cells > budget)
    throw BudgetExceeded(
        "grid of " + std::to_string(cells) +
        " cells exceeds the cell budget of " + std::to_string(budget) +
        "; loosen eps, reduce the intensities, or raise the budget");
}

void validate_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("eps must lie strictly between 0 and 1");
}

}  // namespace

DecisionOutcome map_decide(const std::array<std::int64_t, 3>& y,
                           const ChannelParams& params,
                           const TimeAllocation& alloc) {
  validate(params);
  validate(alloc, params.T);
  for (std::int64_t yi : y)
    if (yi < 0) throw std::domain_error("counts must be nonnegative");

  std::array<HypothesisState, 4> states = hypothesis_set(params, alloc);
  bool log_space = false;
  for (const HypothesisState& s : states)
    log_space = log_space || s.mu.mu1 > 700.0 || s.mu.mu2 > 700.0 ||
                s.mu.mu3 > 700.0;

  // The two single-source factors are multiplied together before anything
  // else: the product commutes bitwise, so states that mirror each other
  // under a symmetric time split score exactly equal and the tie priority
  // applies deterministically.
  DecisionOutcome out;
  if (!log_space) {
    for (std::size_t i = 0; i < 4; ++i) {
      const HypothesisState& s = states[i];
      double likelihood =
          (poisson_pmf(y[0], s.mu.mu1) * poisson_pmf(y[1], s.mu.mu2)) *
          poisson_pmf(y[2], s.mu.mu3);
      out.posterior_scores[i] = s.prior * likelihood;
    }
    out.decided = argmax_with_priority(out.posterior_scores);
    return out;
  }

  std::array<double, 4> log_scores;
  for (std::size_t i = 0; i < 4; ++i) {
    const HypothesisState& s = states[i];
    double log_likelihood =
        (poisson_log_pmf(y[0], s.mu.mu1) + poisson_log_pmf(y[1], s.mu.mu2)) +
        poisson_log_pmf(y[2], s.mu.mu3);
    log_scores[i] = std::log(s.prior) + log_likelihood;
    out.posterior_scores[i] = std::exp(log_scores[i]);
  }
  out.decided = argmax_with_priority(log_scores);
  return out;
}

PdResult prob_correct_detection(const ChannelParams& params,
                                const TimeAllocation& alloc,
                                const EvalOptions& opts) {
  validate(params);
  validate(alloc, params.T);
  validate_eps(opts.eps);

  std::int64_t u1 = truncation_bound(params.lambda1 * alloc.t1, opts.eps);
  std::int64_t u2 = truncation_bound(params.lambda1 * alloc.t2, opts.eps);
  std::int64_t u3 =
      truncation_bound(2.0 * params.lambda1 * alloc.t3, opts.eps);
  double cells = (static_cast<double>(u1) + 1.0) *
                 (static_cast<double>(u2) + 1.0) *
                 (static_cast<double>(u3) + 1.0);
  check_budget(cells, opts.cell_budget);

  DimensionTables tables = build_pmf_tables(alloc, params, opts.eps);
  const std::vector<double>& d1r0 = tables.dim1[0].probs;
  const std::vector<double>& d1r1 = tables.dim1[1].probs;
  const std::vector<double>& d2r0 = tables.dim2[0].probs;
  const std::vector<double>& d2r1 = tables.dim2[1].probs;

  std::array<double, 4> priors{
      prior_pmf(0, 0, params.p), prior_pmf(0, 1, params.p),
      prior_pmf(1, 0, params.p), prior_pmf(1, 1, params.p)};

  std::size_t n1 = d1r0.size();
  std::size_t n2 = d2r0.size();
  std::size_t n3 = tables.dim3[0].probs.size();

  // Per-slice partials for the total and the four per-state region sums;
  // fixed summation tree as in the entropy evaluator.
  std::vector<double> slice_pd(n3);
  std::array<std::vector<double>, 4> slice_ph;
  for (auto& v : slice_ph) v.resize(n3);

  parallel_for(n3, opts.threads, [&](std::size_t y3) {
    std::array<double, 4> w{priors[0] * tables.dim3[0].probs[y3],
                            priors[1] * tables.dim3[1].probs[y3],
                            priors[2] * tables.dim3[1].probs[y3],
                            priors[3] * tables.dim3[2].probs[y3]};
    std::vector<double> rows_pd(n2);
    std::array<std::vector<double>, 4> rows_ph;
    for (auto& v : rows_ph) v.resize(n2);
    for (std::size_t y2 = 0; y2 < n2; ++y2) {
      const double q0 = d2r0[y2];
      const double q1 = d2r1[y2];
      double acc_pd = 0.0;
      std::array<double, 4> acc_ph{0.0, 0.0, 0.0, 0.0};
      for (std::size_t y1 = 0; y1 < n1; ++y1) {
        // Single-source pair first (commutative, so mirror states tie
        // exactly under symmetric splits), then the weight that carries the
        // prior and the joint-window factor.
        const double r0 = d1r0[y1];
        const double r1 = d1r1[y1];
        std::array<double, 4> s{w[0] * (r0 * q0), w[1] * (r0 * q1),
                                w[2] * (r1 * q0), w[3] * (r1 * q1)};
        int best = argmax_with_priority(s);
        double top = s[static_cast<std::size_t>(best)];
        acc_pd += top;
        acc_ph[static_cast<std::size_t>(best)] += top;
      }
      rows_pd[y2] = acc_pd;
      for (std::size_t i = 0; i < 4; ++i) rows_ph[i][y2] = acc_ph[i];
    }
    slice_pd[y3] = pairwise_sum(rows_pd);
    for (std::size_t i = 0; i < 4; ++i) slice_ph[i][y3] = pairwise_sum(rows_ph[i]);
  });

  PdResult res;
  res.pd = pairwise_sum(slice_pd);
  res.risk = 1.0 - res.pd;
  for (std::size_t i = 0; i < 4; ++i)
    res.per_hypothesis[i] = pairwise_sum(slice_ph[i]) / priors[i];

  std::array<double, 2> s1{table_sum(tables.dim1[0]),
                           table_sum(tables.dim1[1])};
  std::array<double, 2> s2{table_sum(tables.dim2[0]),
                           table_sum(tables.dim2[1])};
  std::array<double, 3> s3{table_sum(tables.dim3[0]),
                           table_sum(tables.dim3[1]),
                           table_sum(tables.dim3[2])};
  double dropped = 1.0 - (priors[0] * s1[0] * s2[0] * s3[0] +
                          priors[1] * s1[0] * s2[1] * s3[1] +
                          priors[2] * s1[1] * s2[0] * s3[1] +
                          priors[3] * s1[1] * s2[1] * s3[2]);
  res.tail_bound = dropped > 0.0 ? dropped : 0.0;
  return res;
}

double bayes_risk(const ChannelParams& params, const TimeAllocation& alloc,
                  const EvalOptions& opts) {
  return prob_correct_detection(params, alloc, opts).risk;
}

}  // namespace psched
