#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracle {

long double naive_poisson_pmf(long double mu, std::int64_t y) {
  if (y < 0) return 0.0L;
  if (mu == 0.0L) return y == 0 ? 1.0L : 0.0L;
  if (y > 400) {
    // Far tail, only reachable when a test passes an oversized cube; the
    // factorial product would overflow, so switch to the log form.
    return expl(static_cast<long double>(y) * logl(mu) - mu -
                lgammal(static_cast<long double>(y) + 1.0L));
  }
  long double factorial = 1.0L;
  long double power = 1.0L;
  for (std::int64_t k = 1; k <= y; ++k) {
    factorial *= static_cast<long double>(k);
    power *= mu;
  }
  return expl(-mu) * power / factorial;
}

long double naive_entropy_bits(const std::vector<long double>& probs) {
  long double h = 0.0L;
  for (long double p : probs)
    if (p > 0.0L) h -= p * log2l(p);
  return h;
}

std::array<std::int64_t, 3> generous_uppers(
    const psched::ChannelParams& params, const psched::TimeAllocation& alloc) {
  auto bound = [](double mu) {
    long double m = mu;
    return static_cast<std::int64_t>(
        ceill(m + 12.0L * sqrtl(m + 1.0L) + 40.0L));
  };
  return {bound(params.lambda1 * alloc.t1), bound(params.lambda1 * alloc.t2),
          bound(2.0 * params.lambda1 * alloc.t3)};
}

namespace {

struct HypothesisMasses {
  std::array<long double, 4> prior;
  std::array<std::array<long double, 3>, 4> mu;
};

HypothesisMasses hypothesis_masses(const psched::ChannelParams& params,
                                   const psched::TimeAllocation& alloc) {
  HypothesisMasses h{};
  long double p = params.p;
  long double l0 = params.lambda0;
  long double l1 = params.lambda1;
  for (int x1 = 0; x1 <= 1; ++x1) {
    for (int x2 = 0; x2 <= 1; ++x2) {
      int idx = 2 * x1 + x2;
      h.prior[idx] = (x1 ? p : 1.0L - p) * (x2 ? p : 1.0L - p);
      long double r1 = x1 ? l1 : l0;
      long double r2 = x2 ? l1 : l0;
      h.mu[idx] = {r1 * alloc.t1, r2 * alloc.t2, (r1 + r2) * alloc.t3};
    }
  }
  return h;
}

}  // namespace

long double brute_force_mi(const psched::ChannelParams& params,
                           const psched::TimeAllocation& alloc,
                           const std::array<std::int64_t, 3>& upper) {
  HypothesisMasses h = hypothesis_masses(params, alloc);
  long double h_y = 0.0L;
  long double h_y_given_x = 0.0L;
  for (std::int64_t y1 = 0; y1 <= upper[0]; ++y1) {
    for (std::int64_t y2 = 0; y2 <= upper[1]; ++y2) {
      for (std::int64_t y3 = 0; y3 <= upper[2]; ++y3) {
        long double marginal = 0.0L;
        for (int x = 0; x < 4; ++x) {
          long double cond = naive_poisson_pmf(h.mu[x][0], y1) *
                             naive_poisson_pmf(h.mu[x][1], y2) *
                             naive_poisson_pmf(h.mu[x][2], y3);
          marginal += h.prior[x] * cond;
          if (cond > 0.0L) h_y_given_x -= h.prior[x] * cond * log2l(cond);
        }
        if (marginal > 0.0L) h_y -= marginal * log2l(marginal);
      }
    }
  }
  return h_y - h_y_given_x;
}

int literal_region_decide(const std::array<long double, 4>& mass) {
  long double s0 = mass[0], s1 = mass[1], s2 = mass[2], s3 = mass[3];
  if (s0 >= s1 && s0 >= s2 && s0 >= s3) return 0;
  if (s1 > s0 && s1 >= s2 && s1 >= s3) return 1;
  if (s2 > s0 && s2 > s1 && s2 >= s3) return 2;
  return 3;
}

long double brute_force_pd(const psched::ChannelParams& params,
                           const psched::TimeAllocation& alloc,
                           const std::array<std::int64_t, 3>& upper) {
  HypothesisMasses h = hypothesis_masses(params, alloc);
  long double pd = 0.0L;
  for (std::int64_t y1 = 0; y1 <= upper[0]; ++y1) {
    for (std::int64_t y2 = 0; y2 <= upper[1]; ++y2) {
      for (std::int64_t y3 = 0; y3 <= upper[2]; ++y3) {
        std::array<long double, 4> mass{};
        for (int x = 0; x < 4; ++x) {
          // Single-source pair first, for exact ties at symmetric splits.
          long double likelihood = (naive_poisson_pmf(h.mu[x][0], y1) *
                                    naive_poisson_pmf(h.mu[x][1], y2)) *
                                   naive_poisson_pmf(h.mu[x][2], y3);
          mass[x] = h.prior[x] * likelihood;
        }
        pd += mass[static_cast<std::size_t>(literal_region_decide(mass))];
      }
    }
  }
  return pd;
}

long double extended_scalar_mi(double lambda0, double lambda1, double p,
                               double t) {
  long double mu0 = static_cast<long double>(lambda0) * t;
  long double mu1 = static_cast<long double>(lambda1) * t;
  long double w1 = p;
  long double w0 = 1.0L - w1;
  std::int64_t upper = static_cast<std::int64_t>(
      ceill(mu1 + 12.0L * sqrtl(mu1 + 1.0L) + 60.0L));
  long double h_y = 0.0L;
  long double h_y_given_x = 0.0L;
  for (std::int64_t y = 0; y <= upper; ++y) {
    long double p0 = naive_poisson_pmf(mu0, y);
    long double p1 = naive_poisson_pmf(mu1, y);
    long double mix = w0 * p0 + w1 * p1;
    if (mix > 0.0L) h_y -= mix * log2l(mix);
    if (p0 > 0.0L) h_y_given_x -= w0 * p0 * log2l(p0);
    if (p1 > 0.0L) h_y_given_x -= w1 * p1 * log2l(p1);
  }
  return h_y - h_y_given_x;
}

long double reduced_first_dim_pd(const psched::ChannelParams& params) {
  long double p = params.p;
  long double mu0 = static_cast<long double>(params.lambda0) * params.T;
  long double mu1 = static_cast<long double>(params.lambda1) * params.T;
  std::int64_t upper = static_cast<std::int64_t>(
      ceill(mu1 + 12.0L * sqrtl(mu1 + 1.0L) + 40.0L));
  long double pd = 0.0L;
  for (std::int64_t y = 0; y <= upper; ++y) {
    long double f0 = naive_poisson_pmf(mu0, y);
    long double f1 = naive_poisson_pmf(mu1, y);
    std::array<long double, 4> mass = {(1.0L - p) * (1.0L - p) * f0,
                                       (1.0L - p) * p * f0, p * (1.0L - p) * f1,
                                       p * p * f1};
    pd += mass[static_cast<std::size_t>(literal_region_decide(mass))];
  }
  return pd;
}

double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
  if (!(hi > lo)) throw std::invalid_argument("golden_max needs lo < hi");
  const double invphi = 0.6180339887498948482;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace oracle
