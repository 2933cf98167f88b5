#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace satkd::util {

// Fixed 9-significant-digit rendering ("%.9g", C locale) for all persisted
// numeric output.
std::string sig9(double x);

// count points spaced evenly in log10 between lo and hi, inclusive.
// count == 1 yields {lo}.
std::vector<double> log_spaced(double lo, double hi, int count);

// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware
// concurrency). Callers own any aggregation; index-addressed output keeps
// results independent of scheduling.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace satkd::util
