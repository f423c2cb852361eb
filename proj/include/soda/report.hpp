#ifndef SODA_REPORT_HPP
#define SODA_REPORT_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "soda/config.hpp"
#include "soda/metrics.hpp"

namespace soda::report {

// All epochs of one (strategy, repetition) training run.
struct RunRecord {
    std::string strategy;
    int repetition = 0;
    std::vector<EpochMetrics> epochs;
};

// CSV with one row per epoch per repetition, columns
//   strategy,repetition,epoch,pi_1..pi_K,loss_1..loss_K,n_1..n_K,
//   train_loss,test_jaccard,discounted_cum_loss
// Doubles are printed with 17 significant digits so the file is
// byte-reproducible and lossless.
std::string format_csv(const std::vector<RunRecord>& records, std::size_t k);

// Per-strategy, per-epoch mean and population std of the test Jaccard
// across repetitions. When both soda and uniform are present the summary
// also carries their per-epoch mean difference.
nlohmann::json build_summary(const std::vector<RunRecord>& records);

// Runs config.repetitions runs of one strategy (the configured one unless
// `strategy_override` is given). Records are sorted by repetition.
std::vector<RunRecord>
run_strategy(const config::ExperimentConfig& cfg,
             std::optional<trainer::Strategy> strategy_override = {});

// The paired comparison: every strategy in cfg.compare_strategies over the
// same repetitions, datasets and initializations.
std::vector<RunRecord> run_comparison(const config::ExperimentConfig& cfg);

// Writes metrics.csv and summary.json under out_dir (created if missing).
void write_outputs(const std::filesystem::path& out_dir,
                   const std::vector<RunRecord>& records, std::size_t k);

} // namespace soda::report

#endif
