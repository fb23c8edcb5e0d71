#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace psched {

// Sum by recursive halving (pairwise/cascade order). The summation tree is a
// pure function of n, so results are bit-identical no matter how the terms
// were produced or which thread produced them.
double pairwise_sum(const double* v, std::size_t n);
double pairwise_sum(const std::vector<double>& v);

// -p*log2(p), with 0*log2(0) defined as 0.
double entropy_term_bits(double p);

// Number of workers to use for `requested` (0 means hardware concurrency).
int resolve_threads(int requested);

// Runs fn(i) for every i in [0, n) on up to `threads` workers. Callers must
// write results into index-addressed slots: the schedule is unspecified, so
// anything order-dependent would break the determinism contract.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace psched
