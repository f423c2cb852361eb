#include "soda/rng.hpp"

#include <sstream>
#include <stdexcept>

namespace soda {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose,
                          std::uint64_t index) {
    std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a over the purpose tag
    for (unsigned char c : purpose) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::uint64_t state = master ^ h;
    splitmix64(state);
    state ^= index * 0x9e3779b97f4a7c15ULL;
    splitmix64(state);
    return splitmix64(state);
}

std::string Rng::save_state() const {
    std::ostringstream os;
    os << engine_;
    return os.str();
}

void Rng::load_state(const std::string& text) {
    std::istringstream is(text);
    is >> engine_;
    if (is.fail()) throw std::runtime_error("rng: malformed engine state");
}

} // namespace soda
