#pragma once

#include <array>
#include <cstdint>

#include "psched/channel.hpp"

namespace psched {

// Outcome of the maximum-a-posteriori decision at one observation.
struct DecisionOutcome {
  int decided = 0;  // index into the 00, 01, 10, 11 order (2*x1 + x2)
  // Joint scores prior(x) * P(y | x). When any expected count exceeds 700
  // the comparison runs in log space and these are the exponentiated values,
  // which may underflow to 0.
  std::array<double, 4> posterior_scores{0.0, 0.0, 0.0, 0.0};
};

// Decides the source state maximizing prior times likelihood. Ties resolve
// by the fixed priority 00 over 01 over 10 over 11: a state wins only by
// strictly beating every higher-priority state and at-least-tying the rest.
DecisionOutcome map_decide(const std::array<std::int64_t, 3>& y,
                           const ChannelParams& params,
                           const TimeAllocation& alloc);

// Exact probability that the decision matches the generating state.
struct PdResult {
  double pd = 0.0;
  double risk = 0.0;  // 1 - pd
  // P(correct | state) for each of the four states.
  std::array<double, 4> per_hypothesis{0.0, 0.0, 0.0, 0.0};
  double tail_bound = 0.0;  // probability mass outside the evaluated grid
};

// Streams the truncated grid and adds the decided state's joint score at
// every observation (the max of the four scores under the tie priority).
// Throws BudgetExceeded like the vector mutual information evaluator.
PdResult prob_correct_detection(const ChannelParams& params,
                                const TimeAllocation& alloc,
                                const EvalOptions& opts = {});

// 0-1-cost Bayes risk: 1 - prob_correct_detection(...).pd.
double bayes_risk(const ChannelParams& params, const TimeAllocation& alloc,
                  const EvalOptions& opts = {});

}  // namespace psched
