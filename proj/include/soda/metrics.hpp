#ifndef SODA_METRICS_HPP
#define SODA_METRICS_HPP

#include <vector>

#include "soda/grid.hpp"

namespace soda {

// One row of experiment output; everything the CSV reports per epoch.
struct EpochMetrics {
    int epoch = 0;                  // 1-based, counts completed epochs
    std::vector<double> pi;         // allocation probabilities used this epoch
    std::vector<double> losses;     // per-generator action losses
    std::vector<int> allocation;    // integer sample counts
    double train_loss = 0.0;        // data loss on originals + L2 penalty
    double test_jaccard = 0.0;      // mean Jaccard over the test set
    double discounted_cum_loss = 0.0;

    friend bool operator==(const EpochMetrics&, const EpochMetrics&) = default;
};

// Intersection-over-union of the thresholded prediction against the binary
// mask. Both-empty counts as a perfect 1, one-empty as 0.
double jaccard(const Grid& prediction, const Grid& mask,
               double threshold = 0.5);

} // namespace soda

#endif
