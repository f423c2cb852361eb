#ifndef SODA_RNG_HPP
#define SODA_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace soda {

// Deterministic random stream. Wraps std::mt19937_64 but implements all
// distributions itself: the standard library leaves uniform_real/normal
// sequences implementation-defined, and experiment replay requires that a
// seed pins the exact byte stream.
class Rng {
  public:
    Rng() : engine_(0) {}
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller. No spare caching: keeps the stream
    // state equal to the engine state, which is what gets serialized.
    double normal() {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
    }

    double normal(double mu, double sigma) { return mu + sigma * normal(); }

    // Unbiased integer in [0, n). Rejection sampling, n >= 1.
    std::size_t index(std::size_t n) {
        const std::uint64_t bound = n;
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return static_cast<std::size_t>(r % bound);
        }
    }

    template <class T> void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            using std::swap;
            swap(v[i - 1], v[index(i)]);
        }
    }

    std::string save_state() const;
    void load_state(const std::string& text);

  private:
    std::mt19937_64 engine_;
};

// Collapses (master seed, purpose tag, index) into a substream seed.
// Purpose tags keep dataset / init / augmentation / shuffle streams
// independent, so e.g. the dataset bytes do not depend on the strategy.
std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose,
                          std::uint64_t index = 0);

inline Rng derive_stream(std::uint64_t master, std::string_view purpose,
                         std::uint64_t index = 0) {
    return Rng(derive_seed(master, purpose, index));
}

} // namespace soda

#endif
