#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "psched/channel.hpp"

namespace psched {

enum class SweepMetric { mi, pd, both };

// Evaluations along the symmetry line ((T-alpha)/2, (T-alpha)/2, alpha).
struct LineSweep {
  std::vector<double> alphas;  // ascending, equispaced on [0, T]
  std::vector<double> mi;      // empty unless requested
  std::vector<double> pd;      // empty unless requested
  std::optional<std::size_t> argmax_mi_index;
  std::optional<std::size_t> argmax_pd_index;
  std::optional<double> argmax_mi;  // alpha attaining the best value
  std::optional<double> argmax_pd;
};

// Grid ties resolve toward the smallest alpha.
LineSweep sweep_symmetry_line(const ChannelParams& params, int n_points,
                              SweepMetric metric = SweepMetric::both,
                              const EvalOptions& opts = {});

struct TernaryRecord {
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
  double mi = 0.0;
};

// Mutual information over the barycentric lattice
// {(i, j, k)/resolution * T : i + j + k = resolution}, ordered by (i, j).
struct TernarySweep {
  int resolution = 0;
  std::vector<TernaryRecord> records;
};

TernarySweep sweep_ternary(const ChannelParams& params, int resolution,
                           const EvalOptions& opts = {});

struct PriorPoint {
  double prior = 0.0;
  double t3_opt = 0.0;  // line-sweep argmax of the chosen metric
  double best = 0.0;    // metric value at t3_opt
};

// The fixed 100-prior grid: 90 equispaced points in (0, 0.5] followed by 10
// interior points of (0.5, 1); each runs a 100-point symmetry-line sweep.
struct PriorSweep {
  SweepMetric metric = SweepMetric::mi;
  std::vector<PriorPoint> points;
};

PriorSweep sweep_prior(const ChannelParams& base,
                       SweepMetric metric = SweepMetric::mi,
                       const EvalOptions& opts = {});

struct IntensityRecord {
  double lambda0T = 0.0;
  double lambda1T = 0.0;
  double alpha_opt = 0.0;
  double best = 0.0;
};

// 100-point symmetry-line search at every lattice pair
// 0 < lambda0*T < lambda1*T <= lambda_max with values j*lambda_max/grid_n,
// ordered lexicographically.
struct IntensitySweep {
  std::vector<IntensityRecord> records;
};

IntensitySweep sweep_intensity(double p, int grid_n, double lambda_max = 5.0,
                               SweepMetric metric = SweepMetric::mi,
                               const EvalOptions& opts = {});

// Second central differences of the metric along the symmetry line; the
// surface is numerically concave when the largest one is <= 1e-8. This
// supports a conjecture, so callers report rather than assert it.
struct ConcavityReport {
  int n_points = 0;
  double max_second_difference = 0.0;
  bool pass = false;
};

// chain_term3_only switches the diagnostic to the conditional chain term,
// which is known to be non-concave for some parameters.
ConcavityReport check_concavity_line(const ChannelParams& params,
                                     int n_points,
                                     const EvalOptions& opts = {},
                                     bool chain_term3_only = false);

struct SymmetryReport {
  int trials = 0;
  double max_abs_deviation = 0.0;
  bool pass = false;
};

// Compares I(t1, t2, t3) against I(t2, t1, t3) at random simplex points;
// passes when the largest deviation is <= 1e-12 (it is exactly 0 because
// evaluation canonicalizes the argument order).
SymmetryReport check_symmetry(const ChannelParams& params, int trials,
                              std::uint64_t seed,
                              const EvalOptions& opts = {});

struct RefinedPoint {
  double alpha = 0.0;
  double value = 0.0;
};

// Golden-section polish of the mutual-information line maximum inside the
// grid bracket around the sweep argmax. Optional: grid search remains the
// primary optimizer since concavity is only conjectured.
RefinedPoint refine_line_max_mi(const ChannelParams& params,
                                const LineSweep& sweep,
                                const EvalOptions& opts = {},
                                double tol = 1e-10);

}  // namespace psched
