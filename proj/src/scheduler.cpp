#include "psched/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "psched/detection.hpp"
#include "psched/info_metrics.hpp"
#include "psched/numerics.hpp"

namespace psched {

namespace {

TimeAllocation alloc_on_line(double T, double alpha) {
  double half = (T - alpha) / 2.0;
  return {half, half, alpha};
}

// Smallest-index argmax: ties resolve toward the smaller alpha.
std::size_t argmax_first(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

EvalOptions serial(const EvalOptions& opts) {
  EvalOptions inner = opts;
  inner.threads = 1;
  return inner;
}

}  // namespace

LineSweep sweep_symmetry_line(const ChannelParams& params, int n_points,
                              SweepMetric metric, const EvalOptions& opts) {
  validate(params);
  if (n_points < 2)
    throw std::invalid_argument("a line sweep needs at least 2 points");

  LineSweep sweep;
  std::size_t n = static_cast<std::size_t>(n_points);
  sweep.alphas.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    sweep.alphas[i] = static_cast<double>(i) * params.T /
                      static_cast<double>(n_points - 1);

  bool want_mi = metric != SweepMetric::pd;
  bool want_pd = metric != SweepMetric::mi;
  if (want_mi) sweep.mi.resize(n);
  if (want_pd) sweep.pd.resize(n);

  EvalOptions inner = serial(opts);
  parallel_for(n, opts.threads, [&](std::size_t i) {
    TimeAllocation alloc = alloc_on_line(params.T, sweep.alphas[i]);
    if (want_mi) sweep.mi[i] = vector_mutual_info(params, alloc, inner).value;
    if (want_pd)
      sweep.pd[i] = prob_correct_detection(params, alloc, inner).pd;
  });

  if (want_mi) {
    sweep.argmax_mi_index = argmax_first(sweep.mi);
    sweep.argmax_mi = sweep.alphas[*sweep.argmax_mi_index];
  }
  if (want_pd) {
    sweep.argmax_pd_index = argmax_first(sweep.pd);
    sweep.argmax_pd = sweep.alphas[*sweep.argmax_pd_index];
  }
  return sweep;
}

TernarySweep sweep_ternary(const ChannelParams& params, int resolution,
                           const EvalOptions& opts) {
  validate(params);
  if (resolution < 2)
    throw std::invalid_argument("ternary resolution must be at least 2");

  TernarySweep sweep;
  sweep.resolution = resolution;
  for (int i = 0; i <= resolution; ++i) {
    for (int j = 0; j <= resolution - i; ++j) {
      TernaryRecord rec;
      rec.t1 = static_cast<double>(i) * params.T /
               static_cast<double>(resolution);
      rec.t2 = static_cast<double>(j) * params.T /
               static_cast<double>(resolution);
      rec.t3 = params.T - rec.t1 - rec.t2;
      if (rec.t3 < 0.0) rec.t3 = 0.0;  // guard the last rounding ulp
      sweep.records.push_back(rec);
    }
  }

  EvalOptions inner = serial(opts);
  parallel_for(sweep.records.size(), opts.threads, [&](std::size_t r) {
    TernaryRecord& rec = sweep.records[r];
    TimeAllocation alloc{rec.t1, rec.t2, rec.t3};
    rec.mi = vector_mutual_info(params, alloc, inner).value;
  });
  return sweep;
}

PriorSweep sweep_prior(const ChannelParams& base, SweepMetric metric,
                       const EvalOptions& opts) {
  validate(base);
  if (metric == SweepMetric::both)
    throw std::invalid_argument("prior sweep metric must be mi or pd");

  PriorSweep sweep;
  sweep.metric = metric;
  sweep.points.resize(100);
  for (int i = 1; i <= 90; ++i)
    sweep.points[static_cast<std::size_t>(i - 1)].prior =
        static_cast<double>(i) * 0.5 / 90.0;
  for (int k = 1; k <= 10; ++k)
    sweep.points[static_cast<std::size_t>(89 + k)].prior =
        0.5 + static_cast<double>(k) * 0.5 / 11.0;

  EvalOptions inner = serial(opts);
  parallel_for(sweep.points.size(), opts.threads, [&](std::size_t i) {
    ChannelParams params = base;
    params.p = sweep.points[i].prior;
    LineSweep line = sweep_symmetry_line(params, 100, metric, inner);
    if (metric == SweepMetric::mi) {
      sweep.points[i].t3_opt = *line.argmax_mi;
      sweep.points[i].best = line.mi[*line.argmax_mi_index];
    } else {
      sweep.points[i].t3_opt = *line.argmax_pd;
      sweep.points[i].best = line.pd[*line.argmax_pd_index];
    }
  });
  return sweep;
}

IntensitySweep sweep_intensity(double p, int grid_n, double lambda_max,
                               SweepMetric metric, const EvalOptions& opts) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("prior p must lie strictly between 0 and 1");
  if (grid_n < 2)
    throw std::invalid_argument("intensity grid needs at least 2 levels");
  if (!(lambda_max > 0.0))
    throw std::invalid_argument("lambda_max must be positive");
  if (metric == SweepMetric::both)
    throw std::invalid_argument("intensity sweep metric must be mi or pd");

  IntensitySweep sweep;
  for (int a = 1; a < grid_n; ++a) {
    for (int b = a + 1; b <= grid_n; ++b) {
      IntensityRecord rec;
      rec.lambda0T = static_cast<double>(a) * lambda_max /
                     static_cast<double>(grid_n);
      rec.lambda1T = static_cast<double>(b) * lambda_max /
                     static_cast<double>(grid_n);
      sweep.records.push_back(rec);
    }
  }

  EvalOptions inner = serial(opts);
  parallel_for(sweep.records.size(), opts.threads, [&](std::size_t r) {
    IntensityRecord& rec = sweep.records[r];
    ChannelParams params{rec.lambda0T, rec.lambda1T, p, 1.0};
    LineSweep line = sweep_symmetry_line(params, 100, metric, inner);
    if (metric == SweepMetric::mi) {
      rec.alpha_opt = *line.argmax_mi;
      rec.best = line.mi[*line.argmax_mi_index];
    } else {
      rec.alpha_opt = *line.argmax_pd;
      rec.best = line.pd[*line.argmax_pd_index];
    }
  });
  return sweep;
}

ConcavityReport check_concavity_line(const ChannelParams& params,
                                     int n_points, const EvalOptions& opts,
                                     bool chain_term3_only) {
  validate(params);
  if (n_points < 3)
    throw std::invalid_argument("a concavity check needs at least 3 points");

  std::size_t n = static_cast<std::size_t>(n_points);
  std::vector<double> values(n);
  EvalOptions inner = serial(opts);
  parallel_for(n, opts.threads, [&](std::size_t i) {
    double alpha = static_cast<double>(i) * params.T /
                   static_cast<double>(n_points - 1);
    TimeAllocation alloc = alloc_on_line(params.T, alpha);
    values[i] = chain_term3_only
                    ? mi_chain_terms(params, alloc, inner).term3
                    : vector_mutual_info(params, alloc, inner).value;
  });

  ConcavityReport report;
  report.n_points = n_points;
  double max_d2 = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double d2 = values[i + 1] - 2.0 * values[i] + values[i - 1];
    if (d2 > max_d2) max_d2 = d2;
  }
  report.max_second_difference = max_d2;
  report.pass = max_d2 <= 1e-8;
  return report;
}

SymmetryReport check_symmetry(const ChannelParams& params, int trials,
                              std::uint64_t seed, const EvalOptions& opts) {
  validate(params);
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");

  // Draw all points up front so evaluation order cannot perturb the stream.
  std::mt19937_64 rng(seed);
  std::vector<TimeAllocation> points(static_cast<std::size_t>(trials));
  for (TimeAllocation& alloc : points) {
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    double lo = std::min(u1, u2);
    double hi = std::max(u1, u2);
    alloc.t1 = lo * params.T;
    alloc.t2 = (hi - lo) * params.T;
    alloc.t3 = params.T - alloc.t1 - alloc.t2;
    if (alloc.t3 < 0.0) alloc.t3 = 0.0;
  }

  std::vector<double> devs(points.size());
  EvalOptions inner = serial(opts);
  parallel_for(points.size(), opts.threads, [&](std::size_t i) {
    const TimeAllocation& a = points[i];
    TimeAllocation b{a.t2, a.t1, a.t3};
    devs[i] = std::fabs(vector_mutual_info(params, a, inner).value -
                        vector_mutual_info(params, b, inner).value);
  });

  SymmetryReport report;
  report.trials = trials;
  for (double d : devs)
    report.max_abs_deviation = std::max(report.max_abs_deviation, d);
  report.pass = report.max_abs_deviation <= 1e-12;
  return report;
}

RefinedPoint refine_line_max_mi(const ChannelParams& params,
                                const LineSweep& sweep,
                                const EvalOptions& opts, double tol) {
  if (!sweep.argmax_mi_index || sweep.mi.empty())
    throw std::invalid_argument(
        "refinement needs a sweep that evaluated mutual information");
  std::size_t i = *sweep.argmax_mi_index;
  std::size_t lo_i = i > 0 ? i - 1 : i;
  std::size_t hi_i = i + 1 < sweep.alphas.size() ? i + 1 : i;

  auto eval = [&](double alpha) {
    return vector_mutual_info(params, alloc_on_line(params.T, alpha), opts)
        .value;
  };

  RefinedPoint best{sweep.alphas[i], sweep.mi[i]};
  double lo = sweep.alphas[lo_i];
  double hi = sweep.alphas[hi_i];
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = eval(x1);
  double f2 = eval(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = eval(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = eval(x1);
    }
    const double fx = std::max(f1, f2);
    const double ax = f1 >= f2 ? x1 : x2;
    if (fx > best.value) best = {ax, fx};
  }
  return best;
}

}  // namespace psched
