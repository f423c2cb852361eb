#ifndef SODA_CONFIG_HPP
#define SODA_CONFIG_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "soda/augment.hpp"
#include "soda/trainer.hpp"

namespace soda::config {

// Anything wrong with the config file itself: unreadable, unparsable, an
// unknown key, or an out-of-range value. The CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string name = "soda-experiment";
    int repetitions = 1;
    std::string out_dir = "results";
    trainer::TrainConfig train;
    std::vector<augment::GeneratorSpec> generators; // defaults to noise/rotation/junk
    std::vector<trainer::Strategy> compare_strategies = {
        trainer::Strategy::soda, trainer::Strategy::uniform,
        trainer::Strategy::target};

    ExperimentConfig();

    // Strict: unknown keys anywhere are a ConfigError naming the path.
    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    // Reads and parses a file; parse errors carry the 1-based line number.
    static ExperimentConfig load(const std::filesystem::path& path);
};

std::vector<augment::GeneratorSpec> default_generators();

} // namespace soda::config

#endif
