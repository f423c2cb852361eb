#include "soda/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace soda::report {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() +
                                       "' for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + path.string() +
                                       "'");
}

} // namespace

std::string format_csv(const std::vector<RunRecord>& records, std::size_t k) {
    std::string out = "strategy,repetition,epoch";
    for (std::size_t i = 1; i <= k; ++i) out += ",pi_" + std::to_string(i);
    for (std::size_t i = 1; i <= k; ++i) out += ",loss_" + std::to_string(i);
    for (std::size_t i = 1; i <= k; ++i) out += ",n_" + std::to_string(i);
    out += ",train_loss,test_jaccard,discounted_cum_loss\n";
    for (const auto& rec : records) {
        for (const auto& m : rec.epochs) {
            if (m.pi.size() != k || m.losses.size() != k ||
                m.allocation.size() != k)
                throw std::invalid_argument("metrics arity does not match K");
            out += rec.strategy;
            out += ',' + std::to_string(rec.repetition);
            out += ',' + std::to_string(m.epoch);
            for (double v : m.pi) out += ',' + fmt(v);
            for (double v : m.losses) out += ',' + fmt(v);
            for (int v : m.allocation) out += ',' + std::to_string(v);
            out += ',' + fmt(m.train_loss);
            out += ',' + fmt(m.test_jaccard);
            out += ',' + fmt(m.discounted_cum_loss);
            out += '\n';
        }
    }
    return out;
}

nlohmann::json build_summary(const std::vector<RunRecord>& records) {
    std::map<std::string, std::vector<const RunRecord*>> by_strategy;
    for (const auto& r : records) by_strategy[r.strategy].push_back(&r);

    nlohmann::json strategies = nlohmann::json::object();
    std::map<std::string, std::vector<double>> means;
    std::size_t epochs = 0;
    for (const auto& [name, runs] : by_strategy) {
        epochs = runs.front()->epochs.size();
        for (const auto* r : runs) {
            if (r->epochs.size() != epochs)
                throw std::invalid_argument(
                    "runs of one strategy differ in epoch count");
        }
        std::vector<double> mean(epochs, 0.0), stddev(epochs, 0.0);
        const double n = static_cast<double>(runs.size());
        for (std::size_t e = 0; e < epochs; ++e) {
            double acc = 0.0;
            for (const auto* r : runs) acc += r->epochs[e].test_jaccard;
            mean[e] = acc / n;
            double sq = 0.0;
            for (const auto* r : runs) {
                const double d = r->epochs[e].test_jaccard - mean[e];
                sq += d * d;
            }
            stddev[e] = std::sqrt(sq / n);
        }
        strategies[name] = {{"repetitions", runs.size()},
                            {"mean_test_jaccard", mean},
                            {"std_test_jaccard", stddev}};
        means[name] = std::move(mean);
    }

    nlohmann::json summary = {{"epochs", epochs},
                              {"strategies", strategies}};
    if (means.count("soda") && means.count("uniform")) {
        std::vector<double> diff(epochs);
        for (std::size_t e = 0; e < epochs; ++e)
            diff[e] = means["soda"][e] - means["uniform"][e];
        summary["soda_minus_uniform"] = diff;
    }
    return summary;
}

std::vector<RunRecord>
run_strategy(const config::ExperimentConfig& cfg,
             std::optional<trainer::Strategy> strategy_override) {
    trainer::TrainConfig train = cfg.train;
    if (strategy_override) train.strategy = *strategy_override;
    std::vector<RunRecord> records;
    for (int rep = 0; rep < cfg.repetitions; ++rep) {
        trainer::Experiment exp(train, cfg.generators,
                                static_cast<std::uint64_t>(rep));
        records.push_back({trainer::to_string(train.strategy), rep,
                           exp.run_remaining()});
    }
    return records;
}

std::vector<RunRecord> run_comparison(const config::ExperimentConfig& cfg) {
    if (cfg.compare_strategies.size() < 2)
        throw config::ConfigError("comparison needs at least 2 strategies");
    std::vector<RunRecord> records;
    for (const auto strategy : cfg.compare_strategies) {
        auto part = run_strategy(cfg, strategy);
        records.insert(records.end(), std::make_move_iterator(part.begin()),
                       std::make_move_iterator(part.end()));
    }
    return records;
}

void write_outputs(const std::filesystem::path& out_dir,
                   const std::vector<RunRecord>& records, std::size_t k) {
    std::filesystem::create_directories(out_dir);
    write_text_file(out_dir / "metrics.csv", format_csv(records, k));
    write_text_file(out_dir / "summary.json",
                    build_summary(records).dump(2) + "\n");
}

} // namespace soda::report
