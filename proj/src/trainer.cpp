#include "soda/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "soda/kernels.hpp"

namespace soda::trainer {

namespace {

constexpr double kRmsDecay = 0.9;
constexpr double kRmsEpsilon = 1e-7;

void validate_config(const TrainConfig& cfg, std::size_t k) {
    if (k < 2) throw std::invalid_argument("need at least 2 generators");
    if (cfg.n_train < 1) throw std::invalid_argument("n_train must be >= 1");
    if (cfg.n_test < 1) throw std::invalid_argument("n_test must be >= 1");
    if (cfg.n_a < static_cast<int>(k))
        throw std::invalid_argument("n_a must be >= number of generators");
    if (cfg.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (cfg.batch_size < 1)
        throw std::invalid_argument("batch_size must be >= 1");
    if (cfg.filters < 1) throw std::invalid_argument("filters must be >= 1");
    if (!(cfg.learning_rate > 0.0))
        throw std::invalid_argument("learning_rate must be positive");
    if (cfg.l2_weight < 0.0)
        throw std::invalid_argument("l2_weight must be nonnegative");
}

} // namespace

Experiment::Experiment(const TrainConfig& cfg,
                       std::vector<augment::GeneratorSpec> registry,
                       std::uint64_t repetition)
    : cfg_(cfg), registry_(std::move(registry)),
      data_(dataset::make_synthetic_dataset(
          {cfg.height, cfg.width, cfg.n_train, cfg.n_test},
          derive_seed(cfg.seed, "dataset", repetition))),
      model_(1), allocator_(std::max<std::size_t>(registry_.size(), 2),
                            cfg.eta, cfg.beta),
      rng_augment_(derive_stream(cfg.seed, "augment", repetition)),
      rng_shuffle_(derive_stream(cfg.seed, "shuffle", repetition)) {
    validate_config(cfg_, registry_.size());
    for (std::size_t k = 0; k < registry_.size(); ++k) {
        if (registry_[k].id != static_cast<int>(k) + 1)
            throw std::invalid_argument(
                "generator ids must be 1..K in registry order");
    }
    if (cfg_.strategy == Strategy::target) {
        const bool has_useful = std::any_of(
            registry_.begin(), registry_.end(), [](const auto& g) {
                return g.kind != augment::GeneratorKind::junk;
            });
        if (!has_useful)
            throw std::invalid_argument(
                "target strategy needs a non-junk generator");
    }

    Rng init_rng = derive_stream(cfg_.seed, "init", repetition);
    model_ = model::ToyModel::random_init(cfg_.filters, init_rng);
    rms_v_.assign(model_.dim(), 0.0);

    const std::size_t sources = registry_.size() + 1;
    trackers_.reserve(sources);
    accums_.reserve(sources);
    for (std::size_t s = 0; s < sources; ++s) {
        trackers_.emplace_back(model_.dim(), cfg_.rho);
        accums_.emplace_back(model_.dim());
    }
    step_grad_mass_.assign(model_.dim(), 0.0);
}

std::vector<double> Experiment::policy_pi() const {
    const std::size_t k = registry_.size();
    switch (cfg_.strategy) {
    case Strategy::soda: return allocator_.probabilities();
    case Strategy::uniform:
        return std::vector<double>(k, 1.0 / static_cast<double>(k));
    case Strategy::target: {
        std::vector<double> pi(k, 0.0);
        std::size_t useful = 0;
        for (const auto& g : registry_)
            if (g.kind != augment::GeneratorKind::junk) ++useful;
        for (std::size_t i = 0; i < k; ++i) {
            if (registry_[i].kind != augment::GeneratorKind::junk)
                pi[i] = 1.0 / static_cast<double>(useful);
        }
        return pi;
    }
    }
    throw std::logic_error("unknown strategy");
}

budget::BudgetAllocation
Experiment::make_allocation(std::span<const double> pi) const {
    if (cfg_.strategy != Strategy::target)
        return budget::allocate(pi, cfg_.n_a);

    // The oracle baseline never queries junk arms, so they are exempt from
    // the one-sample floor: apportion the budget over the useful arms only.
    std::vector<std::size_t> useful;
    for (std::size_t i = 0; i < registry_.size(); ++i)
        if (registry_[i].kind != augment::GeneratorKind::junk)
            useful.push_back(i);
    std::vector<double> sub_pi(useful.size(),
                               1.0 / static_cast<double>(useful.size()));
    budget::BudgetAllocation sub = budget::allocate(sub_pi, cfg_.n_a);
    budget::BudgetAllocation out;
    out.counts.assign(registry_.size(), 0);
    out.total = cfg_.n_a;
    for (std::size_t j = 0; j < useful.size(); ++j)
        out.counts[useful[j]] = sub.counts[j];
    return out;
}

void Experiment::optimizer_step(std::span<const double> grad) {
    std::span<double> theta = model_.theta();
    switch (cfg_.optimizer) {
    case OptimizerKind::sgd:
        kernels::axpy(-cfg_.learning_rate, grad, theta);
        break;
    case OptimizerKind::rmsprop:
        for (std::size_t i = 0; i < theta.size(); ++i) {
            rms_v_[i] = kRmsDecay * rms_v_[i] +
                        (1.0 - kRmsDecay) * grad[i] * grad[i];
            theta[i] -= cfg_.learning_rate * grad[i] /
                        (std::sqrt(rms_v_[i]) + kRmsEpsilon);
        }
        break;
    }
}

double Experiment::mean_test_jaccard() {
    Grid out;
    double acc = 0.0;
    for (const auto& s : data_.test) {
        model_.forward(s.image, out, ws_);
        acc += jaccard(out, s.mask);
    }
    return acc / static_cast<double>(data_.test.size());
}

EpochMetrics Experiment::run_epoch() {
    const std::size_t k = registry_.size();
    for (auto& a : accums_) a.reset();

    const std::vector<double> pi = policy_pi();
    const budget::BudgetAllocation alloc = make_allocation(pi);
    const std::vector<augment::AugmentedSample> augmented =
        augment::generate_batch(registry_, alloc, data_.train, rng_augment_);

    // Interleave originals (source 0) and augmented samples, then run one
    // optimizer pass over minibatches, attributing each sample's gradient
    // to its source.
    struct Entry {
        const augment::ImageSample* sample;
        int source;
    };
    std::vector<Entry> stream;
    stream.reserve(data_.train.size() + augmented.size());
    for (const auto& s : data_.train) stream.push_back({&s, 0});
    for (const auto& a : augmented) stream.push_back({&a.sample, a.generator_id});
    rng_shuffle_.shuffle(stream);

    std::vector<double> g(model_.dim());
    std::vector<double> step_grad(model_.dim());
    std::fill(step_grad_mass_.begin(), step_grad_mass_.end(), 0.0);
    const std::size_t bs = static_cast<std::size_t>(cfg_.batch_size);
    for (std::size_t i = 0; i < stream.size(); i += bs) {
        const std::size_t end = std::min(stream.size(), i + bs);
        std::fill(step_grad.begin(), step_grad.end(), 0.0);
        for (std::size_t j = i; j < end; ++j) {
            model_.sample_loss_grad(*stream[j].sample, g, ws_);
            accums_[stream[j].source].accumulate(g);
            kernels::axpy(1.0, g, step_grad);
        }
        const double batch_n = static_cast<double>(end - i);
        kernels::scale(step_grad, 1.0 / batch_n);
        kernels::axpy(batch_n, step_grad, step_grad_mass_);
        model::add_l2_gradient(model_, cfg_.l2_weight, step_grad);
        optimizer_step(step_grad);
    }

    // Momentum-refresh every source and derive the action losses against
    // source 0. A source that received no samples this epoch (target's
    // junk arm) keeps its previous estimate.
    const std::vector<double> g0 = trackers_[0].update(accums_[0].average());
    std::vector<double> losses(k);
    for (std::size_t s = 1; s <= k; ++s) {
        const std::vector<double> gk =
            accums_[s].count() > 0 ? trackers_[s].update(accums_[s].average())
                                   : trackers_[s].bias_corrected();
        losses[s - 1] = feedback::cosine_action_loss(g0, gk);
    }

    if (cfg_.strategy == Strategy::soda)
        allocator_.update(hedge::LossVector(losses));

    disc_loss_ = cfg_.beta * disc_loss_ + kernels::dot(pi, losses);
    ++epoch_;

    EpochMetrics m;
    m.epoch = epoch_;
    m.pi = pi;
    m.losses = losses;
    m.allocation = alloc.counts;
    m.train_loss = model::data_loss(model_, data_.train) +
                   model::l2_penalty(model_, cfg_.l2_weight);
    m.test_jaccard = mean_test_jaccard();
    m.discounted_cum_loss = disc_loss_;
    return m;
}

std::vector<EpochMetrics> Experiment::run_remaining() {
    std::vector<EpochMetrics> out;
    while (epoch_ < cfg_.epochs) out.push_back(run_epoch());
    return out;
}

nlohmann::json Experiment::checkpoint() const {
    nlohmann::json trackers = nlohmann::json::array();
    for (const auto& t : trackers_) trackers.push_back(t.to_json());
    return {{"epoch", epoch_},
            {"strategy", to_string(cfg_.strategy)},
            {"theta", std::vector<double>(model_.theta().begin(),
                                          model_.theta().end())},
            {"rms_v", rms_v_},
            {"allocator", allocator_.to_json()},
            {"trackers", trackers},
            {"rng_augment", rng_augment_.save_state()},
            {"rng_shuffle", rng_shuffle_.save_state()},
            {"discounted_cum_loss", disc_loss_}};
}

Experiment Experiment::restore(const TrainConfig& cfg,
                               std::vector<augment::GeneratorSpec> registry,
                               std::uint64_t repetition,
                               const nlohmann::json& snapshot) {
    Experiment e(cfg, std::move(registry), repetition);
    if (snapshot.at("strategy").get<std::string>() !=
        to_string(cfg.strategy))
        throw std::invalid_argument("checkpoint strategy does not match config");
    const auto theta = snapshot.at("theta").get<std::vector<double>>();
    if (theta.size() != e.model_.dim())
        throw std::invalid_argument("checkpoint theta dimension mismatch");
    std::copy(theta.begin(), theta.end(), e.model_.theta().begin());
    e.rms_v_ = snapshot.at("rms_v").get<std::vector<double>>();
    if (e.rms_v_.size() != e.model_.dim())
        throw std::invalid_argument("checkpoint rms_v dimension mismatch");
    e.allocator_ = hedge::AllocatorState::from_json(snapshot.at("allocator"));
    const auto& trackers = snapshot.at("trackers");
    if (trackers.size() != e.trackers_.size())
        throw std::invalid_argument("checkpoint tracker count mismatch");
    e.trackers_.clear();
    for (const auto& t : trackers)
        e.trackers_.push_back(feedback::GradientTracker::from_json(t));
    e.rng_augment_.load_state(snapshot.at("rng_augment").get<std::string>());
    e.rng_shuffle_.load_state(snapshot.at("rng_shuffle").get<std::string>());
    e.epoch_ = snapshot.at("epoch").get<int>();
    e.disc_loss_ = snapshot.at("discounted_cum_loss").get<double>();
    return e;
}

const char* to_string(Strategy s) {
    switch (s) {
    case Strategy::soda: return "soda";
    case Strategy::uniform: return "uniform";
    case Strategy::target: return "target";
    }
    return "?";
}

const char* to_string(OptimizerKind o) {
    switch (o) {
    case OptimizerKind::sgd: return "sgd";
    case OptimizerKind::rmsprop: return "rmsprop";
    }
    return "?";
}

Strategy strategy_from_string(const std::string& s) {
    if (s == "soda") return Strategy::soda;
    if (s == "uniform") return Strategy::uniform;
    if (s == "target") return Strategy::target;
    throw std::invalid_argument("unknown strategy '" + s + "'");
}

OptimizerKind optimizer_from_string(const std::string& s) {
    if (s == "sgd") return OptimizerKind::sgd;
    if (s == "rmsprop") return OptimizerKind::rmsprop;
    throw std::invalid_argument("unknown optimizer '" + s + "'");
}

} // namespace soda::trainer
