#include "psched/info_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "psched/numerics.hpp"

namespace psched {

namespace {

double grid_cells(std::int64_t u1, std::int64_t u2, std::int64_t u3) {
  return (static_cast<double>(u1) + 1.0) * (static_cast<double>(u2) + 1.0) *
         (static_cast<double>(u3) + 1.0);
}

void check_budget(double cells, double budget) {
  if (cells > budget)
    throw BudgetExceeded(
        "grid of " + std::to_string(cells) +
        " cells exceeds the cell budget of " + std::to_string(budget) +
        "; loosen eps, reduce the intensities, or raise the budget");
}

// Conservative bits bound on the effect of the dropped tail mass, from
// entropy continuity on an alphabet of `cells` outcomes plus a lumped tail.
double tail_bits_bound(double dropped_mass, double cells) {
  if (dropped_mass <= 0.0) return 0.0;
  double d = std::min(dropped_mass, 0.5);
  return 2.0 * (d * std::log2(cells + 2.0) - d * std::log2(d));
}

void validate_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("eps must lie strictly between 0 and 1");
}

}  // namespace

MiResult scalar_mutual_info(const ChannelParams& params, double t,
                            const EvalOptions& opts) {
  validate(params);
  validate_eps(opts.eps);
  if (!(t >= 0.0) || !std::isfinite(t))
    throw std::invalid_argument("observation time t must be nonnegative");

  std::int64_t upper = truncation_bound(params.lambda1 * t, opts.eps);
  TruncatedPmfTable p0 = fill_pmf_table(params.lambda0 * t, upper);
  TruncatedPmfTable p1 = fill_pmf_table(params.lambda1 * t, upper);

  double w0 = 1.0 - params.p;
  double w1 = params.p;
  std::vector<double> terms(p0.probs.size());
  for (std::size_t y = 0; y < terms.size(); ++y)
    terms[y] = entropy_term_bits(w0 * p0.probs[y] + w1 * p1.probs[y]);

  MiResult res;
  res.h_y = pairwise_sum(terms);
  res.h_y_given_x = w0 * table_entropy_bits(p0) + w1 * table_entropy_bits(p1);
  res.value = degenerate_rates(params) ? 0.0 : res.h_y - res.h_y_given_x;
  res.truncation_upper = {upper, 0, 0};
  double dropped = 1.0 - (w0 * table_sum(p0) + w1 * table_sum(p1));
  res.tail_bound = tail_bits_bound(dropped, static_cast<double>(upper) + 1.0);
  return res;
}

MiResult vector_mutual_info(const ChannelParams& params,
                            const TimeAllocation& alloc,
                            const EvalOptions& opts) {
  validate(params);
  validate(alloc, params.T);
  validate_eps(opts.eps);

  // Canonical order: the value is symmetric in (t1, t2), so evaluating the
  // sorted pair makes that symmetry exact instead of 1e-16-level.
  bool swapped = alloc.t1 > alloc.t2;
  TimeAllocation canon = swapped
                             ? TimeAllocation{alloc.t2, alloc.t1, alloc.t3}
                             : alloc;

  std::int64_t u1 = truncation_bound(params.lambda1 * canon.t1, opts.eps);
  std::int64_t u2 = truncation_bound(params.lambda1 * canon.t2, opts.eps);
  std::int64_t u3 =
      truncation_bound(2.0 * params.lambda1 * canon.t3, opts.eps);
  double cells = grid_cells(u1, u2, u3);
  check_budget(cells, opts.cell_budget);

  DimensionTables tables = build_pmf_tables(canon, params, opts.eps);
  const std::vector<double>& d1r0 = tables.dim1[0].probs;
  const std::vector<double>& d1r1 = tables.dim1[1].probs;
  const std::vector<double>& d2r0 = tables.dim2[0].probs;
  const std::vector<double>& d2r1 = tables.dim2[1].probs;

  double pri00 = prior_pmf(0, 0, params.p);
  double pri01 = prior_pmf(0, 1, params.p);
  double pri10 = prior_pmf(1, 0, params.p);
  double pri11 = prior_pmf(1, 1, params.p);

  std::size_t n1 = d1r0.size();
  std::size_t n2 = d2r0.size();
  std::size_t n3 = tables.dim3[0].probs.size();

  // Marginal entropy: fixed summation tree (left-to-right within a row,
  // pairwise across rows and slices) so any worker layout reproduces the
  // same bits.
  std::vector<double> slice(n3);
  parallel_for(n3, opts.threads, [&](std::size_t y3) {
    double w00 = pri00 * tables.dim3[0].probs[y3];
    double w01 = pri01 * tables.dim3[1].probs[y3];
    double w10 = pri10 * tables.dim3[1].probs[y3];
    double w11 = pri11 * tables.dim3[2].probs[y3];
    std::vector<double> rows(n2);
    for (std::size_t y2 = 0; y2 < n2; ++y2) {
      double c0 = w00 * d2r0[y2] + w01 * d2r1[y2];
      double c1 = w10 * d2r0[y2] + w11 * d2r1[y2];
      double acc = 0.0;
      for (std::size_t y1 = 0; y1 < n1; ++y1) {
        double f = c0 * d1r0[y1] + c1 * d1r1[y1];
        if (f > 0.0) acc -= f * std::log2(f);
      }
      rows[y2] = acc;
    }
    slice[y3] = pairwise_sum(rows);
  });

  MiResult res;
  res.h_y = pairwise_sum(slice);

  // Conditional entropy: entropy of a product measure is the sum of the
  // factors' entropies, so only 1-D sums are needed.
  std::array<double, 2> h1{table_entropy_bits(tables.dim1[0]),
                           table_entropy_bits(tables.dim1[1])};
  std::array<double, 2> h2{table_entropy_bits(tables.dim2[0]),
                           table_entropy_bits(tables.dim2[1])};
  std::array<double, 3> h3{table_entropy_bits(tables.dim3[0]),
                           table_entropy_bits(tables.dim3[1]),
                           table_entropy_bits(tables.dim3[2])};
  res.h_y_given_x = pri00 * (h1[0] + h2[0] + h3[0]) +
                    pri01 * (h1[0] + h2[1] + h3[1]) +
                    pri10 * (h1[1] + h2[0] + h3[1]) +
                    pri11 * (h1[1] + h2[1] + h3[2]);
  res.value = degenerate_rates(params) ? 0.0 : res.h_y - res.h_y_given_x;

  res.truncation_upper = swapped ? std::array<std::int64_t, 3>{u2, u1, u3}
                                 : std::array<std::int64_t, 3>{u1, u2, u3};

  std::array<double, 2> s1{table_sum(tables.dim1[0]),
                           table_sum(tables.dim1[1])};
  std::array<double, 2> s2{table_sum(tables.dim2[0]),
                           table_sum(tables.dim2[1])};
  std::array<double, 3> s3{table_sum(tables.dim3[0]),
                           table_sum(tables.dim3[1]),
                           table_sum(tables.dim3[2])};
  double dropped = 1.0 - (pri00 * s1[0] * s2[0] * s3[0] +
                          pri01 * s1[0] * s2[1] * s3[1] +
                          pri10 * s1[1] * s2[0] * s3[1] +
                          pri11 * s1[1] * s2[1] * s3[2]);
  res.tail_bound = tail_bits_bound(dropped, cells);
  return res;
}

ChainTerms mi_chain_terms(const ChannelParams& params,
                          const TimeAllocation& alloc,
                          const EvalOptions& opts) {
  ChainTerms terms;
  terms.term1 = scalar_mutual_info(params, alloc.t1, opts).value;
  terms.term2 = scalar_mutual_info(params, alloc.t2, opts).value;
  double total = vector_mutual_info(params, alloc, opts).value;
  terms.term3 = total - terms.term1 - terms.term2;
  return terms;
}

namespace {

// E[V log2 V] - E[V] log2 E[V] for a discrete positive variable.
double growth_rate_bits(const std::vector<std::pair<double, double>>& dist) {
  double mean = 0.0;
  double mean_log = 0.0;
  for (const auto& [prob, value] : dist) {
    mean += prob * value;
    mean_log += prob * value * std::log2(value);
  }
  return mean_log - mean * std::log2(mean);
}

}  // namespace

double mi_derivative_at_zero(const ChannelParams& params,
                             DerivativeMode mode) {
  validate(params);
  if (degenerate_rates(params)) return 0.0;
  double p = params.p;
  if (mode == DerivativeMode::individual)
    return growth_rate_bits({{1.0 - p, params.lambda0}, {p, params.lambda1}});
  return growth_rate_bits({{(1.0 - p) * (1.0 - p), 2.0 * params.lambda0},
                           {2.0 * p * (1.0 - p),
                            params.lambda0 + params.lambda1},
                           {p * p, 2.0 * params.lambda1}});
}

double numerical_derivative_at_zero(const ChannelParams& params,
                                    DerivativeMode mode, double h,
                                    const EvalOptions& opts) {
  validate(params);
  if (!(h > 0.0) || !std::isfinite(h))
    throw std::invalid_argument("step h must be positive and finite");
  ChannelParams short_run = params;
  short_run.T = h;
  TimeAllocation alloc = mode == DerivativeMode::individual
                             ? TimeAllocation{h / 2.0, h / 2.0, 0.0}
                             : TimeAllocation{0.0, 0.0, h};
  return vector_mutual_info(short_run, alloc, opts).value / h;
}

}  // namespace psched
