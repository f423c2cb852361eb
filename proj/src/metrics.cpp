#include "soda/metrics.hpp"

#include <stdexcept>

namespace soda {

double jaccard(const Grid& prediction, const Grid& mask, double threshold) {
    if (!prediction.same_shape(mask))
        throw std::invalid_argument("prediction and mask shapes differ");
    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < prediction.size(); ++i) {
        const bool p = prediction.data[i] > threshold;
        const bool t = mask.data[i] != 0.0;
        inter += (p && t);
        uni += (p || t);
    }
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

} // namespace soda
