#include "soda/budget.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace soda::budget {

BudgetAllocation allocate(std::span<const double> pi, int n_a) {
    const std::size_t k = pi.size();
    if (k == 0) throw std::invalid_argument("empty probability vector");
    if (n_a < static_cast<int>(k))
        throw std::invalid_argument("budget " + std::to_string(n_a) +
                                    " cannot cover a floor of 1 over " +
                                    std::to_string(k) + " generators");
    double total_p = 0.0;
    for (double p : pi) {
        if (!(p > 0.0))
            throw std::invalid_argument("probabilities must be positive");
        total_p += p;
    }
    if (std::abs(total_p - 1.0) > 1e-9)
        throw std::invalid_argument("probabilities sum to " +
                                    std::to_string(total_p) + ", expected 1");

    std::vector<double> quota(k);
    std::vector<int> counts(k);
    std::vector<bool> lifted(k, false);
    long long assigned = 0;
    for (std::size_t i = 0; i < k; ++i) {
        quota[i] = pi[i] * n_a;
        const int fl = static_cast<int>(std::floor(quota[i]));
        lifted[i] = fl < 1;
        counts[i] = std::max(1, fl);
        assigned += counts[i];
    }

    if (assigned < n_a) {
        // Classic largest-remainder pass over the arms the floor left alone.
        std::vector<std::size_t> order;
        for (std::size_t i = 0; i < k; ++i)
            if (!lifted[i]) order.push_back(i);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) {
                             const double ra = quota[a] - std::floor(quota[a]);
                             const double rb = quota[b] - std::floor(quota[b]);
                             if (ra != rb) return ra > rb;
                             return a < b;
                         });
        std::size_t next = 0;
        while (assigned < n_a) {
            if (next >= order.size())
                throw std::logic_error("remainder pass exhausted eligible arms");
            ++counts[order[next++]];
            ++assigned;
        }
    }

    while (assigned > n_a) {
        // Floor lifts overshot the budget: take back from the largest count,
        // among ties the one with the smallest quota, then the lowest index.
        std::size_t pick = k;
        for (std::size_t i = 0; i < k; ++i) {
            if (counts[i] <= 1) continue;
            if (pick == k || counts[i] > counts[pick] ||
                (counts[i] == counts[pick] && quota[i] < quota[pick]))
                pick = i;
        }
        if (pick == k)
            throw std::logic_error("withdraw pass found no count above 1");
        --counts[pick];
        --assigned;
    }

    return BudgetAllocation{std::move(counts), n_a};
}

} // namespace soda::budget
