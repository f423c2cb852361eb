#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "soda/budget.hpp"
#include "soda/config.hpp"
#include "soda/dataset.hpp"
#include "soda/hedge.hpp"
#include "soda/kernels.hpp"
#include "soda/metrics.hpp"
#include "soda/trainer.hpp"

using namespace soda;
using trainer::Experiment;
using trainer::Strategy;
using trainer::TrainConfig;

namespace {

TrainConfig tiny_config(Strategy strategy) {
    TrainConfig cfg;
    cfg.n_train = 6;
    cfg.n_test = 4;
    cfg.height = 16;
    cfg.width = 16;
    cfg.n_a = 12;
    cfg.epochs = 3;
    cfg.filters = 4;
    cfg.strategy = strategy;
    cfg.seed = 1234;
    return cfg;
}

} // namespace

TEST_SUITE("trainer") {

TEST_CASE("jaccard anchors") {
    Grid a(4, 4), b(4, 4);
    CHECK(jaccard(a, b) == 1.0); // both empty

    for (int c = 0; c < 4; ++c) b(0, c) = 1.0;
    CHECK(jaccard(a, b) == 0.0); // one empty

    Grid pred(4, 4);
    for (int c = 0; c < 4; ++c) pred(0, c) = 0.9;
    CHECK(jaccard(pred, b) == 1.0); // identical after thresholding

    Grid other(4, 4);
    for (int c = 0; c < 4; ++c) other(3, c) = 1.0;
    CHECK(jaccard(pred, other) == 0.0); // disjoint nonempty

    // top half vs left half of an NxN image: (N^2/4) / (3N^2/4) = 1/3
    const int n = 8;
    Grid top(n, n), left(n, n);
    for (int r = 0; r < n / 2; ++r)
        for (int c = 0; c < n; ++c) top(r, c) = 1.0;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n / 2; ++c) left(r, c) = 1.0;
    CHECK(jaccard(top, left) == doctest::Approx(1.0 / 3.0));

    CHECK_THROWS_AS(jaccard(Grid(2, 2), Grid(3, 3)), std::invalid_argument);
}

TEST_CASE("synthetic dataset is reproducible and standardized") {
    const dataset::DatasetConfig dc{32, 32, 5, 4};
    const auto d1 = dataset::make_synthetic_dataset(dc, 42);
    const auto d2 = dataset::make_synthetic_dataset(dc, 42);
    const auto d3 = dataset::make_synthetic_dataset(dc, 43);
    CHECK(d1.train.size() == 5);
    CHECK(d1.test.size() == 4);
    for (std::size_t i = 0; i < d1.train.size(); ++i) {
        CHECK(d1.train[i].image == d2.train[i].image);
        CHECK(d1.train[i].mask == d2.train[i].mask);
    }
    CHECK_FALSE(d1.train[0].image == d3.train[0].image);
    // train and test streams are distinct
    CHECK_FALSE(d1.train[0].image == d1.test[0].image);

    for (const auto& s : d1.train) {
        const double n = static_cast<double>(s.image.size());
        const double mean = kernels::sum(s.image.span()) / n;
        const double var = kernels::sum_squares(s.image.span()) / n;
        CHECK(std::abs(mean) < 1e-10);
        CHECK(std::abs(std::sqrt(var) - 1.0) < 1e-10);
        for (double v : s.mask.data) CHECK((v == 0.0 || v == 1.0));
    }
}

TEST_CASE("synthetic masks are almost never empty") {
    Rng rng(77);
    int nonempty = 0;
    const int draws = 10'000;
    for (int i = 0; i < draws; ++i) {
        const auto s = dataset::make_synthetic_sample(32, 32, rng);
        if (kernels::sum(s.mask.span()) > 0.0) ++nonempty;
    }
    CHECK(nonempty >= draws * 99 / 100);
}

TEST_CASE("uniform strategy allocates evenly every epoch") {
    TrainConfig cfg = tiny_config(Strategy::uniform);
    cfg.n_a = 60;
    Experiment exp(cfg, config::default_generators(), 0);
    for (int e = 0; e < 3; ++e) {
        const auto m = exp.run_epoch();
        CHECK(m.allocation == std::vector<int>{20, 20, 20});
        for (double p : m.pi) CHECK(p == doctest::Approx(1.0 / 3.0));
    }
    // the allocator is never consulted nor updated under this strategy
    CHECK(exp.allocator().epoch() == 0);
    for (double lw : exp.allocator().log_weights()) CHECK(lw == 0.0);
}

TEST_CASE("target strategy skips the junk arm entirely") {
    TrainConfig cfg = tiny_config(Strategy::target);
    cfg.n_a = 60;
    Experiment exp(cfg, config::default_generators(), 0);
    const auto m = exp.run_epoch();
    CHECK(m.allocation == std::vector<int>{30, 30, 0});
    CHECK(m.pi[0] == doctest::Approx(0.5));
    CHECK(m.pi[1] == doctest::Approx(0.5));
    CHECK(m.pi[2] == 0.0);
}

TEST_CASE("soda's first epoch is uniform by initialization") {
    TrainConfig cfg = tiny_config(Strategy::soda);
    cfg.n_a = 60;
    Experiment exp(cfg, config::default_generators(), 0);
    const auto m = exp.run_epoch();
    CHECK(m.allocation == std::vector<int>{20, 20, 20});
    for (double p : m.pi) CHECK(p == doctest::Approx(1.0 / 3.0));
    for (double l : m.losses) {
        CHECK(l >= 0.0);
        CHECK(l <= 1.0);
    }
}

TEST_CASE("persistently bad arm is driven to the floor within 5 epochs") {
    // synthetic fixed losses through the real allocator+budget chain
    hedge::AllocatorState alloc(3, 6.0, 0.5);
    const hedge::LossVector fixed({0.1, 0.1, 0.9});
    int junk_count = 60;
    for (int t = 1; t <= 5; ++t) {
        const auto counts = budget::allocate(alloc.probabilities(), 60).counts;
        junk_count = counts[2];
        alloc.update(fixed);
    }
    CHECK(junk_count == 1);
}

TEST_CASE("per-source gradient attribution loses nothing") {
    TrainConfig cfg = tiny_config(Strategy::soda);
    Experiment exp(cfg, config::default_generators(), 0);
    exp.run_epoch();

    const auto& accs = exp.last_accumulators();
    REQUIRE(accs.size() == 4);
    std::size_t samples = 0;
    std::vector<double> by_source(exp.model().dim(), 0.0);
    for (const auto& a : accs) {
        samples += a.count();
        const auto avg = a.count() ? a.average()
                                   : std::vector<double>(exp.model().dim(), 0.0);
        kernels::axpy(static_cast<double>(a.count()), avg, by_source);
    }
    CHECK(samples == static_cast<std::size_t>(cfg.n_train + cfg.n_a));

    const auto mass = exp.last_step_gradient_mass();
    for (std::size_t i = 0; i < by_source.size(); ++i)
        CHECK(std::abs(by_source[i] - mass[i]) < 1e-8);
}

TEST_CASE("identical config and seed replay identical metrics") {
    TrainConfig cfg = tiny_config(Strategy::soda);
    Experiment a(cfg, config::default_generators(), 1);
    Experiment b(cfg, config::default_generators(), 1);
    const auto ma = a.run_remaining();
    const auto mb = b.run_remaining();
    CHECK(ma == mb);

    Experiment c(cfg, config::default_generators(), 2);
    CHECK_FALSE(ma == c.run_remaining());
}

TEST_CASE("checkpoint restore continues the exact run") {
    TrainConfig cfg = tiny_config(Strategy::soda);
    cfg.epochs = 6;

    Experiment full(cfg, config::default_generators(), 0);
    const auto all = full.run_remaining();

    Experiment part(cfg, config::default_generators(), 0);
    part.run_epoch();
    part.run_epoch();
    part.run_epoch();

    // through an actual file, as a checkpoint would live on disk
    const auto path = std::filesystem::temp_directory_path() /
                      "soda_test_checkpoint.json";
    std::ofstream(path) << part.checkpoint().dump();
    std::ifstream in(path);
    nlohmann::json snapshot;
    in >> snapshot;

    Experiment resumed = Experiment::restore(cfg, config::default_generators(),
                                             0, snapshot);
    CHECK(resumed.epoch() == 3);
    const auto rest = resumed.run_remaining();
    REQUIRE(rest.size() == 3);
    for (std::size_t i = 0; i < rest.size(); ++i) CHECK(rest[i] == all[3 + i]);
}

TEST_CASE("restore rejects a snapshot from another strategy") {
    TrainConfig cfg = tiny_config(Strategy::soda);
    Experiment exp(cfg, config::default_generators(), 0);
    exp.run_epoch();
    const auto snapshot = exp.checkpoint();
    TrainConfig other = cfg;
    other.strategy = Strategy::uniform;
    CHECK_THROWS_AS(Experiment::restore(other, config::default_generators(),
                                        0, snapshot),
                    std::invalid_argument);
}

TEST_CASE("rmsprop optimizer path runs and stays finite") {
    TrainConfig cfg = tiny_config(Strategy::soda);
    cfg.optimizer = trainer::OptimizerKind::rmsprop;
    cfg.learning_rate = 1e-4;
    cfg.epochs = 2;
    Experiment exp(cfg, config::default_generators(), 0);
    const auto ms = exp.run_remaining();
    for (const auto& m : ms) {
        CHECK(std::isfinite(m.train_loss));
        CHECK(m.test_jaccard >= 0.0);
        CHECK(m.test_jaccard <= 1.0);
    }
}

TEST_CASE("strategy arms share the identical dataset") {
    TrainConfig cfg = tiny_config(Strategy::soda);
    Experiment a(cfg, config::default_generators(), 0);
    TrainConfig cfg_u = cfg;
    cfg_u.strategy = Strategy::uniform;
    Experiment b(cfg_u, config::default_generators(), 0);
    REQUIRE(a.data().train.size() == b.data().train.size());
    for (std::size_t i = 0; i < a.data().train.size(); ++i) {
        CHECK(a.data().train[i].image == b.data().train[i].image);
        CHECK(a.data().train[i].mask == b.data().train[i].mask);
    }
    // paired initialization as well
    const auto ta = a.model().theta();
    const auto tb = b.model().theta();
    for (std::size_t i = 0; i < ta.size(); ++i) CHECK(ta[i] == tb[i]);
}

} // TEST_SUITE
