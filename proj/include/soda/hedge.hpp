#ifndef SODA_HEDGE_HPP
#define SODA_HEDGE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "json.hpp"

namespace soda::hedge {

// Per-arm loss vector for one epoch. Entries are validated to [0, 1] at
// construction; the multiplicative-weights regret analysis needs bounded
// losses, and an out-of-range entry means the feedback layer is broken, so
// it is an error rather than a clamp.
class LossVector {
  public:
    explicit LossVector(std::vector<double> losses);

    std::size_t size() const { return losses_.size(); }
    double operator[](std::size_t k) const { return losses_[k]; }
    std::span<const double> span() const { return losses_; }

  private:
    std::vector<double> losses_;
};

// Discounted multiplicative-weights allocator state. Weights are kept in
// log space: with learning rates in the 3..7 range the raw weights
// exp(-eta * sum of losses) underflow within a few hundred epochs.
class AllocatorState {
  public:
    // k >= 2 arms, eta > 0, beta in [0, 1]. All weights start at 1
    // (log weight 0), epoch at 0.
    AllocatorState(std::size_t k, double eta, double beta);

    std::size_t num_arms() const { return log_weights_.size(); }
    double eta() const { return eta_; }
    double beta() const { return beta_; }
    std::size_t epoch() const { return epoch_; }
    std::span<const double> log_weights() const { return log_weights_; }

    // pi_k = w_k / sum_j w_j, computed with a max-shifted logsumexp.
    // Every entry is strictly positive and the entries sum to 1.
    std::vector<double> probabilities() const;

    // One epoch step: log w_k <- beta * log w_k - eta * loss_k.
    // With beta = 1 this is the classic exponential-weights update; with
    // beta = 0 the state depends only on the latest loss vector.
    void update(const LossVector& losses);

    nlohmann::json to_json() const;
    static AllocatorState from_json(const nlohmann::json& j);

  private:
    std::vector<double> log_weights_;
    double eta_;
    double beta_;
    std::size_t epoch_;
};

// sum_t beta^(T-t) * dot(pi_t, loss_t) over t = 1..T. The quantity the
// discounted update minimizes; exposed for reporting.
double discounted_cumulative_loss(
    const std::vector<std::vector<double>>& pi_history,
    const std::vector<std::vector<double>>& loss_history, double beta);

} // namespace soda::hedge

#endif
