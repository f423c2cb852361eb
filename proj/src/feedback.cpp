#include "soda/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "soda/kernels.hpp"

namespace soda::feedback {

namespace {

void check_vector(std::span<const double> g, std::size_t dim,
                  const char* what) {
    if (g.size() != dim)
        throw std::invalid_argument(std::string(what) +
                                    ": dimension mismatch");
    for (double v : g) {
        if (!std::isfinite(v))
            throw std::invalid_argument(std::string(what) +
                                        ": non-finite entry");
    }
}

} // namespace

GradientTracker::GradientTracker(std::size_t dim, double rho)
    : momentum_(dim, 0.0), rho_(rho) {
    if (dim == 0) throw std::invalid_argument("tracker dimension must be >= 1");
    if (!(rho >= 0.0 && rho < 1.0))
        throw std::invalid_argument("rho must lie in [0, 1)");
}

std::vector<double> GradientTracker::update(std::span<const double> g) {
    check_vector(g, momentum_.size(), "momentum update");
    kernels::ema(rho_, momentum_, g);
    ++steps_;
    return bias_corrected();
}

std::vector<double> GradientTracker::bias_corrected() const {
    std::vector<double> out(momentum_.begin(), momentum_.end());
    if (steps_ == 0) return out; // all zeros, no correction defined yet
    const double denom = 1.0 - std::pow(rho_, static_cast<double>(steps_));
    kernels::scale(out, 1.0 / denom);
    return out;
}

nlohmann::json GradientTracker::to_json() const {
    return {{"momentum", momentum_}, {"rho", rho_}, {"steps", steps_}};
}

GradientTracker GradientTracker::from_json(const nlohmann::json& j) {
    auto m = j.at("momentum").get<std::vector<double>>();
    GradientTracker t(m.size(), j.at("rho").get<double>());
    t.momentum_ = std::move(m);
    t.steps_ = j.at("steps").get<std::size_t>();
    return t;
}

EpochGradientAccumulator::EpochGradientAccumulator(std::size_t dim)
    : sum_(dim, 0.0) {
    if (dim == 0)
        throw std::invalid_argument("accumulator dimension must be >= 1");
}

void EpochGradientAccumulator::accumulate(std::span<const double> gradient) {
    check_vector(gradient, sum_.size(), "gradient accumulate");
    kernels::axpy(1.0, gradient, sum_);
    ++count_;
}

std::vector<double> EpochGradientAccumulator::average() const {
    if (count_ == 0)
        throw std::logic_error("no samples for source this epoch");
    std::vector<double> avg(sum_.begin(), sum_.end());
    kernels::scale(avg, 1.0 / static_cast<double>(count_));
    return avg;
}

void EpochGradientAccumulator::reset() {
    std::fill(sum_.begin(), sum_.end(), 0.0);
    count_ = 0;
}

double cosine_action_loss(std::span<const double> g0_tilde,
                          std::span<const double> gk_tilde,
                          double norm_epsilon) {
    if (g0_tilde.size() != gk_tilde.size())
        throw std::invalid_argument("action loss: dimension mismatch");
    check_vector(g0_tilde, g0_tilde.size(), "action loss g0");
    check_vector(gk_tilde, gk_tilde.size(), "action loss gk");
    const double n0 = std::sqrt(kernels::sum_squares(g0_tilde));
    const double nk = std::sqrt(kernels::sum_squares(gk_tilde));
    if (n0 < norm_epsilon || nk < norm_epsilon) return 0.5;
    double c = kernels::dot(g0_tilde, gk_tilde) / (n0 * nk);
    c = std::clamp(c, -1.0, 1.0);
    return 0.5 * (1.0 - c);
}

} // namespace soda::feedback
