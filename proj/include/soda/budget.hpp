#ifndef SODA_BUDGET_HPP
#define SODA_BUDGET_HPP

#include <span>
#include <vector>

namespace soda::budget {

// Integer per-generator sample counts for one epoch. Every count is at
// least 1 and the counts sum to `total` exactly.
struct BudgetAllocation {
    std::vector<int> counts;
    int total = 0;
};

// Rounds the probability vector to integer counts by largest-remainder
// apportionment with a floor of one sample per generator:
//   1. start from max(1, floor(pi_k * n_a)),
//   2. if short of n_a, hand out the remainder one-by-one to the largest
//      fractional parts among the arms the floor did not lift,
//   3. if over n_a (floor lifts on tiny arms), withdraw one-by-one from the
//      largest counts, preferring the smallest quota among ties so the
//      count ranking keeps following the probability ranking.
// Ties are broken toward the lower index. Deterministic.
//
// Requires: pi sums to 1 within 1e-9 with strictly positive entries, and
// n_a >= K so the floors are feasible.
BudgetAllocation allocate(std::span<const double> pi, int n_a);

} // namespace soda::budget

#endif
