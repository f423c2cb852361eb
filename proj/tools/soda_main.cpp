#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "soda/config.hpp"
#include "soda/report.hpp"

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<int> epochs;
};

soda::config::ExperimentConfig load_with_overrides(const std::string& path,
                                                   const Overrides& ov) {
    auto cfg = soda::config::ExperimentConfig::load(path);
    if (ov.seed) cfg.train.seed = *ov.seed;
    if (ov.epochs) {
        if (*ov.epochs < 1)
            throw soda::config::ConfigError("--epochs must be >= 1");
        cfg.train.epochs = *ov.epochs;
    }
    if (const char* env = std::getenv("SODA_OUT_DIR"); env && *env)
        cfg.out_dir = env;
    if (ov.out_dir) cfg.out_dir = *ov.out_dir;
    return cfg;
}

void report_outcome(const soda::config::ExperimentConfig& cfg,
                    const std::vector<soda::report::RunRecord>& records) {
    soda::report::write_outputs(cfg.out_dir, records, cfg.generators.size());
    const auto summary = soda::report::build_summary(records);
    std::cout << "wrote " << cfg.out_dir << "/metrics.csv and summary.json\n";
    for (const auto& [name, s] : summary.at("strategies").items()) {
        const auto& mean = s.at("mean_test_jaccard");
        std::cout << "  " << name << ": final mean test Jaccard "
                  << mean.back().get<double>() << " over "
                  << s.at("repetitions").get<int>() << " repetition(s)\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"online allocation of a data-augmentation budget"};
    app.require_subcommand(1);

    Overrides ov;
    std::string config_path;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("config", config_path, "experiment config (JSON)")
            ->required();
        cmd->add_option("--seed", ov.seed, "master seed override");
        cmd->add_option("--out-dir", ov.out_dir, "output directory override");
        cmd->add_option("--epochs", ov.epochs, "epoch count override");
    };

    CLI::App* run = app.add_subcommand(
        "run", "train with the configured strategy and write metrics");
    add_common(run);
    CLI::App* compare = app.add_subcommand(
        "compare", "train every configured strategy on paired seeds");
    add_common(compare);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        const auto cfg = load_with_overrides(config_path, ov);
        if (run->parsed()) {
            report_outcome(cfg, soda::report::run_strategy(cfg));
        } else {
            report_outcome(cfg, soda::report::run_comparison(cfg));
        }
        return 0;
    } catch (const soda::config::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
