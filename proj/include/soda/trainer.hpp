#ifndef SODA_TRAINER_HPP
#define SODA_TRAINER_HPP

#include <cstdint>
#include <vector>

#include "json.hpp"

#include "soda/augment.hpp"
#include "soda/budget.hpp"
#include "soda/dataset.hpp"
#include "soda/feedback.hpp"
#include "soda/hedge.hpp"
#include "soda/metrics.hpp"
#include "soda/model.hpp"

namespace soda::trainer {

enum class Strategy { soda, uniform, target };
enum class OptimizerKind { sgd, rmsprop };

struct TrainConfig {
    int n_train = 20;
    int n_test = 30;
    int height = 32;
    int width = 32;
    int n_a = 60;       // augmented samples per epoch
    int epochs = 50;
    int batch_size = 4;
    int filters = 8;
    OptimizerKind optimizer = OptimizerKind::sgd;
    double learning_rate = 0.08;
    Strategy strategy = Strategy::soda;
    double eta = 6.0;   // allocator learning rate
    double rho = 0.99;  // gradient momentum decay
    double beta = 0.5;  // allocator discount
    double l2_weight = 1e-4;
    std::uint64_t seed = 1;

    friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

// One full training run: dataset, model, allocator, per-source gradient
// bookkeeping and the per-epoch loop. Sequential by construction; every
// random draw comes from substreams derived from (seed, repetition), with
// the dataset and init streams independent of the strategy so strategy
// arms are paired.
class Experiment {
  public:
    Experiment(const TrainConfig& cfg,
               std::vector<augment::GeneratorSpec> registry,
               std::uint64_t repetition);

    // Executes one epoch: read pi from the strategy, round to counts,
    // generate the augmented batch, run the optimizer pass with per-source
    // gradient attribution, refresh momentum trackers, compute action
    // losses, update the allocator (SODA only), evaluate the test set.
    EpochMetrics run_epoch();

    // Runs epochs until cfg.epochs is reached, collecting metrics.
    std::vector<EpochMetrics> run_remaining();

    int epoch() const { return epoch_; }
    std::size_t num_generators() const { return registry_.size(); }
    const TrainConfig& config() const { return cfg_; }
    const dataset::Dataset& data() const { return data_; }
    const model::ToyModel& model() const { return model_; }
    const hedge::AllocatorState& allocator() const { return allocator_; }

    // Inspection hooks for invariant tests: the per-source accumulators of
    // the last completed epoch and the summed per-step gradient mass
    // (batch size times the step's data gradient, totalled over steps).
    const std::vector<feedback::EpochGradientAccumulator>&
    last_accumulators() const {
        return accums_;
    }
    std::span<const double> last_step_gradient_mass() const {
        return step_grad_mass_;
    }

    nlohmann::json checkpoint() const;
    static Experiment restore(const TrainConfig& cfg,
                              std::vector<augment::GeneratorSpec> registry,
                              std::uint64_t repetition,
                              const nlohmann::json& snapshot);

  private:
    std::vector<double> policy_pi() const;
    budget::BudgetAllocation make_allocation(std::span<const double> pi) const;
    void optimizer_step(std::span<const double> grad);
    double mean_test_jaccard();

    TrainConfig cfg_;
    std::vector<augment::GeneratorSpec> registry_;
    dataset::Dataset data_;
    model::ToyModel model_;
    std::vector<double> rms_v_;
    hedge::AllocatorState allocator_;
    std::vector<feedback::GradientTracker> trackers_; // K+1, source 0 first
    std::vector<feedback::EpochGradientAccumulator> accums_;
    Rng rng_augment_;
    Rng rng_shuffle_;
    int epoch_ = 0;
    double disc_loss_ = 0.0;
    std::vector<double> step_grad_mass_;
    model::ToyModel::Workspace ws_;
};

const char* to_string(Strategy s);
const char* to_string(OptimizerKind o);
Strategy strategy_from_string(const std::string& s);
OptimizerKind optimizer_from_string(const std::string& s);

} // namespace soda::trainer

#endif
