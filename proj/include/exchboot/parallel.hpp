#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace exchboot {

// Worker count from EXCHBOOT_THREADS; falls back to the hardware count.
unsigned thread_count();

// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
// processed exactly once; callers write results into slot i, so the outcome
// does not depend on scheduling. threads == 0 means thread_count().
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

// Pairwise (cascade) summation with a fixed split order.
double pairwise_sum(std::span<const double> values);

// Mean and standard error of the mean (sample std / sqrt(count)).
struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};
MeanEstimate mean_and_se(std::span<const double> values);

}  // namespace exchboot
