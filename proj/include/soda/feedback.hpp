#ifndef SODA_FEEDBACK_HPP
#define SODA_FEEDBACK_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "json.hpp"

namespace soda::feedback {

inline constexpr double kDefaultNormEpsilon = 1e-12;

// Cross-epoch exponential moving average of one source's per-epoch average
// gradient, with the usual 1/(1 - rho^t) bias correction so early epochs
// are not pulled toward the zero initialization.
class GradientTracker {
  public:
    // rho in [0, 1). rho = 1 would divide by zero in the bias correction.
    GradientTracker(std::size_t dim, double rho);

    std::size_t dim() const { return momentum_.size(); }
    double rho() const { return rho_; }
    std::size_t steps() const { return steps_; }
    std::span<const double> momentum() const { return momentum_; }

    // m <- rho * m + (1 - rho) * g, then returns m / (1 - rho^t) for the
    // incremented step count t. The first call returns g itself.
    std::vector<double> update(std::span<const double> g);

    // Current bias-corrected estimate without advancing. All zeros before
    // the first update.
    std::vector<double> bias_corrected() const;

    nlohmann::json to_json() const;
    static GradientTracker from_json(const nlohmann::json& j);

  private:
    std::vector<double> momentum_;
    double rho_;
    std::size_t steps_ = 0;
};

// Within-epoch running sum of per-sample gradients for one source. Reset at
// every epoch boundary; the momentum tracker is what persists.
class EpochGradientAccumulator {
  public:
    explicit EpochGradientAccumulator(std::size_t dim);

    std::size_t dim() const { return sum_.size(); }
    std::size_t count() const { return count_; }
    std::span<const double> sum() const { return sum_; }

    void accumulate(std::span<const double> gradient);
    std::vector<double> average() const; // requires count >= 1
    void reset();

  private:
    std::vector<double> sum_;
    std::size_t count_ = 0;
};

// Bounded action loss between the reference-source gradient estimate and a
// generator's: 0.5 * (1 - cos angle). 0 = perfectly aligned (helpful),
// 0.5 = orthogonal, 1 = opposed. When either norm falls below norm_epsilon
// the angle is undefined and the neutral 0.5 is returned, so a dead source
// is neither rewarded nor punished.
double cosine_action_loss(std::span<const double> g0_tilde,
                          std::span<const double> gk_tilde,
                          double norm_epsilon = kDefaultNormEpsilon);

} // namespace soda::feedback

#endif
