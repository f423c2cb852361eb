#include "soda/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace soda::config {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) known = true;
        if (!known)
            throw ConfigError("unknown config key '" + where + key + "'");
    }
}

template <class T>
void read(const json& obj, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key +
                          "': " + e.what());
    }
}

const char* to_string(augment::GeneratorKind k) {
    switch (k) {
    case augment::GeneratorKind::noise_injection: return "noise_injection";
    case augment::GeneratorKind::rotation: return "rotation";
    case augment::GeneratorKind::junk: return "junk";
    }
    return "?";
}

augment::GeneratorKind generator_kind_from_string(const std::string& s) {
    if (s == "noise_injection") return augment::GeneratorKind::noise_injection;
    if (s == "rotation") return augment::GeneratorKind::rotation;
    if (s == "junk") return augment::GeneratorKind::junk;
    throw ConfigError("unknown generator kind '" + s + "'");
}

const char* to_string(augment::NoiseMode m) {
    switch (m) {
    case augment::NoiseMode::multiplicative: return "multiplicative";
    case augment::NoiseMode::additive: return "additive";
    case augment::NoiseMode::literal: return "literal";
    }
    return "?";
}

augment::NoiseMode noise_mode_from_string(const std::string& s) {
    if (s == "multiplicative") return augment::NoiseMode::multiplicative;
    if (s == "additive") return augment::NoiseMode::additive;
    if (s == "literal") return augment::NoiseMode::literal;
    throw ConfigError("unknown noise mode '" + s + "'");
}

augment::GeneratorSpec generator_from_json(const json& j, std::size_t index) {
    const std::string where =
        "generators[" + std::to_string(index) + "].";
    reject_unknown_keys(j, where,
                        {"kind", "sigma_grid", "noise_mode", "angle_steps",
                         "junk_low", "junk_high"});
    augment::GeneratorSpec g;
    g.id = static_cast<int>(index) + 1;
    if (!j.contains("kind"))
        throw ConfigError(where + "kind is required");
    g.kind = generator_kind_from_string(j.at("kind").get<std::string>());
    read(j, "sigma_grid", g.sigma_grid);
    if (j.contains("noise_mode"))
        g.noise_mode =
            noise_mode_from_string(j.at("noise_mode").get<std::string>());
    read(j, "angle_steps", g.angle_steps);
    read(j, "junk_low", g.junk_lo);
    read(j, "junk_high", g.junk_hi);
    if (g.sigma_grid.empty()) throw ConfigError(where + "sigma_grid is empty");
    if (g.angle_steps.empty())
        throw ConfigError(where + "angle_steps is empty");
    if (!(g.junk_lo < g.junk_hi))
        throw ConfigError(where + "junk range is empty");
    return g;
}

json generator_to_json(const augment::GeneratorSpec& g) {
    return {{"kind", to_string(g.kind)},
            {"sigma_grid", g.sigma_grid},
            {"noise_mode", to_string(g.noise_mode)},
            {"angle_steps", g.angle_steps},
            {"junk_low", g.junk_lo},
            {"junk_high", g.junk_hi}};
}

trainer::TrainConfig train_from_json(const json& j) {
    reject_unknown_keys(j, "train.",
                        {"n_train", "n_test", "height", "width", "n_a",
                         "epochs", "batch_size", "filters", "optimizer",
                         "learning_rate", "strategy", "eta", "rho", "beta",
                         "l2_weight"});
    trainer::TrainConfig t;
    read(j, "n_train", t.n_train);
    read(j, "n_test", t.n_test);
    read(j, "height", t.height);
    read(j, "width", t.width);
    read(j, "n_a", t.n_a);
    read(j, "epochs", t.epochs);
    read(j, "batch_size", t.batch_size);
    read(j, "filters", t.filters);
    if (j.contains("optimizer")) {
        try {
            t.optimizer = trainer::optimizer_from_string(
                j.at("optimizer").get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    read(j, "learning_rate", t.learning_rate);
    if (j.contains("strategy")) {
        try {
            t.strategy = trainer::strategy_from_string(
                j.at("strategy").get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    read(j, "eta", t.eta);
    read(j, "rho", t.rho);
    read(j, "beta", t.beta);
    read(j, "l2_weight", t.l2_weight);
    return t;
}

json train_to_json(const trainer::TrainConfig& t) {
    return {{"n_train", t.n_train},
            {"n_test", t.n_test},
            {"height", t.height},
            {"width", t.width},
            {"n_a", t.n_a},
            {"epochs", t.epochs},
            {"batch_size", t.batch_size},
            {"filters", t.filters},
            {"optimizer", trainer::to_string(t.optimizer)},
            {"learning_rate", t.learning_rate},
            {"strategy", trainer::to_string(t.strategy)},
            {"eta", t.eta},
            {"rho", t.rho},
            {"beta", t.beta},
            {"l2_weight", t.l2_weight}};
}

std::size_t line_of_byte(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

} // namespace

std::vector<augment::GeneratorSpec> default_generators() {
    augment::GeneratorSpec noise;
    noise.id = 1;
    noise.kind = augment::GeneratorKind::noise_injection;
    augment::GeneratorSpec rotation;
    rotation.id = 2;
    rotation.kind = augment::GeneratorKind::rotation;
    augment::GeneratorSpec junk;
    junk.id = 3;
    junk.kind = augment::GeneratorKind::junk;
    return {noise, rotation, junk};
}

ExperimentConfig::ExperimentConfig() : generators(default_generators()) {}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config root must be an object");
    reject_unknown_keys(j, "",
                        {"name", "repetitions", "seed", "out_dir", "train",
                         "generators", "compare_strategies"});
    ExperimentConfig cfg;
    read(j, "name", cfg.name);
    read(j, "repetitions", cfg.repetitions);
    read(j, "out_dir", cfg.out_dir);
    std::uint64_t seed = cfg.train.seed;
    read(j, "seed", seed);
    if (j.contains("train")) cfg.train = train_from_json(j.at("train"));
    cfg.train.seed = seed;
    if (j.contains("generators")) {
        const auto& gens = j.at("generators");
        if (!gens.is_array() || gens.empty())
            throw ConfigError("generators must be a nonempty array");
        cfg.generators.clear();
        for (std::size_t i = 0; i < gens.size(); ++i)
            cfg.generators.push_back(generator_from_json(gens[i], i));
    }
    if (j.contains("compare_strategies")) {
        const auto names =
            j.at("compare_strategies").get<std::vector<std::string>>();
        if (names.size() < 2)
            throw ConfigError("compare_strategies needs at least 2 entries");
        cfg.compare_strategies.clear();
        for (const auto& n : names) {
            try {
                cfg.compare_strategies.push_back(
                    trainer::strategy_from_string(n));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        }
    }
    if (cfg.repetitions < 1)
        throw ConfigError("repetitions must be >= 1");
    if (cfg.generators.size() < 2)
        throw ConfigError("need at least 2 generators");
    return cfg;
}

json ExperimentConfig::to_json() const {
    json gens = json::array();
    for (const auto& g : generators) gens.push_back(generator_to_json(g));
    json strategies = json::array();
    for (auto s : compare_strategies) strategies.push_back(trainer::to_string(s));
    return {{"name", name},
            {"repetitions", repetitions},
            {"seed", train.seed},
            {"out_dir", out_dir},
            {"train", train_to_json(train)},
            {"generators", gens},
            {"compare_strategies", strategies}};
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ":" +
                          std::to_string(line_of_byte(text, e.byte)) +
                          ": " + e.what());
    }
    return from_json(j);
}

} // namespace soda::config
