#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace psched {

// Default per-table upper-tail mass target (one double ulp at 1.0).
inline constexpr double kDefaultTailEps = 0x1p-53;

// Knobs shared by every grid evaluator.
struct EvalOptions {
  double eps = kDefaultTailEps;  // upper-tail mass dropped per pmf table
  double cell_budget = 1e9;      // max 3-D grid cells before refusing
  int threads = 0;               // worker count; 0 means hardware concurrency
};

// Thrown when an exact grid evaluation would exceed EvalOptions::cell_budget.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Physics of one experiment: two sources, each emitting at rate lambda1 with
// probability p (else lambda0), observed for a total sensing time T.
struct ChannelParams {
  double lambda0 = 10.0;  // counts per unit time, inactive source
  double lambda1 = 20.0;  // counts per unit time, active source
  double p = 0.25;        // probability a source is active
  double T = 1.0;         // total sensing time
};

// Throws std::invalid_argument unless 0 < lambda0 <= lambda1, 0 < p < 1 and
// T > 0. Equal rates are accepted for degenerate-case testing; callers that
// surface results should check degenerate_rates() and warn.
void validate(const ChannelParams& params);

// True when lambda0 == lambda1 (the observations carry no information).
bool degenerate_rates(const ChannelParams& params);

// Split of the sensing time: t1 and t2 watch one source each, t3 watches the
// superposition of both.
struct TimeAllocation {
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
};

// Throws std::invalid_argument unless all components are >= 0 and they sum to
// T within 1e-12.
void validate(const TimeAllocation& alloc, double T);

// Prior of source state (x1, x2): p^2, p(1-p) or (1-p)^2.
// Throws std::domain_error for p outside (0, 1).
double prior_pmf(int x1, int x2, double p);

// Expected counts (mu1, mu2, mu3) in the three observation windows.
struct Intensities {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double mu3 = 0.0;
};

// mu1 = rate(x1)*t1, mu2 = rate(x2)*t2, mu3 = (rate(x1)+rate(x2))*t3.
Intensities intensity_vector(int x1, int x2, const TimeAllocation& alloc,
                             const ChannelParams& params);

// One of the four source states with its prior and expected counts.
struct HypothesisState {
  int x1 = 0;
  int x2 = 0;
  double prior = 0.0;
  Intensities mu;
};

// The four states in fixed decision-priority order 00, 01, 10, 11
// (index = 2*x1 + x2).
std::array<HypothesisState, 4> hypothesis_set(const ChannelParams& params,
                                              const TimeAllocation& alloc);

// log of the Poisson pmf at count y with mean mu; -inf where the pmf is 0.
// Evaluated in log space so it stays finite for mu up to ~1e4.
double poisson_log_pmf(std::int64_t y, double mu);

// Poisson pmf exp(-mu) mu^y / y!. Throws std::domain_error for mu < 0 or
// y < 0.
double poisson_pmf(std::int64_t y, double mu);

// Smallest k with P(Y <= k) >= 1 - eps for Y ~ Poisson(mu); monotone
// nondecreasing in mu. The cdf is accumulated in extended precision so the
// cutoff is placed reliably even for eps near 2^-53.
std::int64_t truncation_bound(double mu, double eps = kDefaultTailEps);

// Poisson pmf values for y = 0..upper; mass beyond upper is treated as 0.
struct TruncatedPmfTable {
  double intensity = 0.0;
  std::int64_t upper = 0;
  std::vector<double> probs;
};

// Table over 0..upper. The entries come from the forward recurrence
// p(0) = exp(-mu), p(y) = p(y-1)*mu/y carried in extended precision, which
// keeps the certified-tail guarantee that per-entry log-space evaluation
// cannot provide.
TruncatedPmfTable fill_pmf_table(double mu, std::int64_t upper);

// All conditional pmf tables for one allocation. Tables of a dimension share
// that dimension's upper bound, taken at its largest conditional intensity
// (dim1: lambda1*t1, dim2: lambda1*t2, dim3: 2*lambda1*t3).
struct DimensionTables {
  std::array<TruncatedPmfTable, 2> dim1;  // indexed by x1
  std::array<TruncatedPmfTable, 2> dim2;  // indexed by x2
  std::array<TruncatedPmfTable, 3> dim3;  // indexed by x1 + x2
};

DimensionTables build_pmf_tables(const TimeAllocation& alloc,
                                 const ChannelParams& params,
                                 double eps = kDefaultTailEps);

// Total mass of the table (pairwise summation).
double table_sum(const TruncatedPmfTable& table);

// Entropy of the truncated pmf in bits.
double table_entropy_bits(const TruncatedPmfTable& table);

}  // namespace psched
