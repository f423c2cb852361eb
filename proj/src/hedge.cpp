#include "soda/hedge.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "soda/kernels.hpp"

namespace soda::hedge {

LossVector::LossVector(std::vector<double> losses)
    : losses_(std::move(losses)) {
    if (losses_.empty())
        throw std::invalid_argument("loss vector must be nonempty");
    for (double l : losses_) {
        if (!(l >= 0.0 && l <= 1.0))
            throw std::invalid_argument(
                "loss entries must lie in [0, 1], got " + std::to_string(l));
    }
}

AllocatorState::AllocatorState(std::size_t k, double eta, double beta)
    : log_weights_(k, 0.0), eta_(eta), beta_(beta), epoch_(0) {
    if (k < 2)
        throw std::invalid_argument("allocator needs at least 2 arms");
    if (!(eta > 0.0))
        throw std::invalid_argument("eta must be positive");
    if (!(beta >= 0.0 && beta <= 1.0))
        throw std::invalid_argument("beta must lie in [0, 1]");
}

std::vector<double> AllocatorState::probabilities() const {
    const std::size_t k = log_weights_.size();
    const double mx = *std::max_element(log_weights_.begin(),
                                        log_weights_.end());
    std::vector<double> pi(k);
    double z = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        pi[i] = std::exp(log_weights_[i] - mx);
        z += pi[i];
    }
    for (double& p : pi) p /= z;
    return pi;
}

void AllocatorState::update(const LossVector& losses) {
    if (losses.size() != log_weights_.size())
        throw std::invalid_argument("loss vector length does not match arms");
    for (std::size_t i = 0; i < log_weights_.size(); ++i)
        log_weights_[i] = beta_ * log_weights_[i] - eta_ * losses[i];
    ++epoch_;
}

nlohmann::json AllocatorState::to_json() const {
    return {{"k", log_weights_.size()},
            {"eta", eta_},
            {"beta", beta_},
            {"epoch", epoch_},
            {"log_weights", log_weights_}};
}

AllocatorState AllocatorState::from_json(const nlohmann::json& j) {
    AllocatorState s(j.at("k").get<std::size_t>(), j.at("eta").get<double>(),
                     j.at("beta").get<double>());
    auto lw = j.at("log_weights").get<std::vector<double>>();
    if (lw.size() != s.num_arms())
        throw std::invalid_argument("log_weights length does not match k");
    for (double v : lw) {
        if (!std::isfinite(v))
            throw std::invalid_argument("log_weights must be finite");
    }
    s.log_weights_ = std::move(lw);
    s.epoch_ = j.at("epoch").get<std::size_t>();
    return s;
}

double discounted_cumulative_loss(
    const std::vector<std::vector<double>>& pi_history,
    const std::vector<std::vector<double>>& loss_history, double beta) {
    if (pi_history.size() != loss_history.size())
        throw std::invalid_argument("pi and loss histories differ in length");
    if (pi_history.empty())
        throw std::invalid_argument("histories must be nonempty");
    double acc = 0.0;
    for (std::size_t t = 0; t < pi_history.size(); ++t) {
        if (pi_history[t].size() != loss_history[t].size())
            throw std::invalid_argument("pi/loss dimension mismatch at epoch " +
                                        std::to_string(t + 1));
        acc = beta * acc + kernels::dot(pi_history[t], loss_history[t]);
    }
    return acc;
}

} // namespace soda::hedge
