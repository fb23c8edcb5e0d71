#pragma once

#include <array>
#include <cstdint>

#include "psched/channel.hpp"

namespace psched {

// Mutual information between source state and observations, with the entropy
// decomposition and truncation diagnostics.
struct MiResult {
  double value = 0.0;          // I = h_y - h_y_given_x, bits
  double h_y = 0.0;            // marginal observation entropy, bits
  double h_y_given_x = 0.0;    // conditional observation entropy, bits
  std::array<std::int64_t, 3> truncation_upper{0, 0, 0};
  double tail_bound = 0.0;     // conservative bits bound from dropped mass
};

// I(X1; Y1) of a single source observed for time t: the two-component Poisson
// mixture with weights (1-p, p) and means (lambda0*t, lambda1*t). Logs are
// base 2. t is independent of params.T. Equal rates return exactly 0.
MiResult scalar_mutual_info(const ChannelParams& params, double t,
                            const EvalOptions& opts = {});

// I(X; Y) of the full three-window observation. The marginal entropy streams
// the triple loop over (y3 outer, y2, y1 inner) using 1-D tables (the 3-D
// product is formed on the fly, never materialized). The conditional entropy
// uses the fact that a product measure's entropy is the sum of the factors'.
// (t1, t2) are evaluated in canonical sorted order, making the value exactly
// invariant under swapping them; reported uppers follow the caller's order.
// Throws BudgetExceeded when the grid would exceed opts.cell_budget cells.
MiResult vector_mutual_info(const ChannelParams& params,
                            const TimeAllocation& alloc,
                            const EvalOptions& opts = {});

// Chain-rule split I = I(X1;Y1) + I(X2;Y2) + I(X1,X2;Y3 | Y1,Y2).
struct ChainTerms {
  double term1 = 0.0;
  double term2 = 0.0;
  double term3 = 0.0;  // conditional term; not concave in general
};

ChainTerms mi_chain_terms(const ChannelParams& params,
                          const TimeAllocation& alloc,
                          const EvalOptions& opts = {});

// Which sensing configuration a derivative refers to: `individual` splits the
// budget evenly over the two single-source windows, `joint` spends it all on
// the superposed window.
enum class DerivativeMode { individual, joint };

// Closed-form d/dT of mutual information at T = 0, bits per unit time.
// individual: E[L log2 L] - E[L] log2 E[L] for L in {lambda0, lambda1} with
// probabilities (1-p, p). joint: same functional for S = L1 + L2 taking
// values {2*lambda0, lambda0+lambda1, 2*lambda1} with probabilities
// ((1-p)^2, 2p(1-p), p^2). Equal rates return exactly 0.
double mi_derivative_at_zero(const ChannelParams& params, DerivativeMode mode);

// Forward difference [I(h) - I(0)]/h of the matching mutual information
// (individual: allocation (h/2, h/2, 0); joint: (0, 0, h)); I(0) is exactly 0.
// For comparison against mi_derivative_at_zero. Note the error carries an
// O(h) curvature term, so agreement degrades when |I''(0)| is large.
double numerical_derivative_at_zero(const ChannelParams& params,
                                    DerivativeMode mode, double h = 1e-6,
                                    const EvalOptions& opts = {});

}  // namespace psched
