#include "soda/augment.hpp"

#include <cmath>
#include <stdexcept>

namespace soda::augment {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// 90-degree counterclockwise index permutation on a square grid:
// out[i][j] = in[j][N-1-i].
Grid rot90_ccw(const Grid& g) {
    Grid out(g.rows, g.cols);
    const int n = g.rows;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = g(j, n - 1 - i);
    return out;
}

double bilinear_at(const Grid& g, double r, double c) {
    const int r0 = static_cast<int>(std::floor(r));
    const int c0 = static_cast<int>(std::floor(c));
    const double fr = r - r0;
    const double fc = c - c0;
    double acc = 0.0;
    for (int dr = 0; dr < 2; ++dr) {
        for (int dc = 0; dc < 2; ++dc) {
            const int rr = r0 + dr;
            const int cc = c0 + dc;
            if (rr < 0 || rr >= g.rows || cc < 0 || cc >= g.cols) continue;
            const double w = (dr ? fr : 1.0 - fr) * (dc ? fc : 1.0 - fc);
            acc += w * g(rr, cc);
        }
    }
    return acc;
}

double nearest_at(const Grid& g, double r, double c) {
    const int rr = static_cast<int>(std::lround(r));
    const int cc = static_cast<int>(std::lround(c));
    if (rr < 0 || rr >= g.rows || cc < 0 || cc >= g.cols) return 0.0;
    return g(rr, cc);
}

// General rotation about the grid center; the source coordinate of output
// pixel (r, c) is the forward rotation of its centered coordinates.
ImageSample rotate_resampled(const ImageSample& s, double theta) {
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    const double mr = 0.5 * (s.image.rows - 1);
    const double mc = 0.5 * (s.image.cols - 1);
    ImageSample out{Grid(s.image.rows, s.image.cols),
                    Grid(s.mask.rows, s.mask.cols)};
    for (int r = 0; r < s.image.rows; ++r) {
        for (int c = 0; c < s.image.cols; ++c) {
            const double rc = r - mr;
            const double cc = c - mc;
            const double sr = ct * rc + st * cc + mr;
            const double sc = -st * rc + ct * cc + mc;
            out.image(r, c) = bilinear_at(s.image, sr, sc);
            out.mask(r, c) = nearest_at(s.mask, sr, sc);
        }
    }
    return out;
}

void check_sample(const ImageSample& s) {
    if (!s.image.same_shape(s.mask))
        throw std::invalid_argument("image and mask shapes differ");
    if (s.image.size() == 0) throw std::invalid_argument("empty sample");
}

} // namespace

ImageSample noise_inject_with_sigma(const ImageSample& s, double sigma,
                                    NoiseMode mode, Rng& rng) {
    check_sample(s);
    ImageSample out = s;
    for (double& px : out.image.data) {
        const double eps = rng.normal(0.0, sigma);
        switch (mode) {
        case NoiseMode::multiplicative: px *= 1.0 + eps; break;
        case NoiseMode::additive: px += eps; break;
        case NoiseMode::literal: px *= eps; break;
        }
    }
    return out;
}

ImageSample noise_inject(const ImageSample& s, const GeneratorSpec& spec,
                         Rng& rng) {
    if (spec.sigma_grid.empty())
        throw std::invalid_argument("empty sigma grid");
    const double sigma = spec.sigma_grid[rng.index(spec.sigma_grid.size())];
    return noise_inject_with_sigma(s, sigma, spec.noise_mode, rng);
}

ImageSample rotate_by_steps(const ImageSample& s, int a) {
    check_sample(s);
    const int steps = ((a % 8) + 8) % 8;
    if (steps == 0) return s;
    if (steps % 2 == 0 && s.image.rows == s.image.cols) {
        ImageSample out = s;
        for (int q = 0; q < steps / 2; ++q) {
            out.image = rot90_ccw(out.image);
            out.mask = rot90_ccw(out.mask);
        }
        return out;
    }
    return rotate_resampled(s, steps * kPi / 4.0);
}

ImageSample rotate(const ImageSample& s, const GeneratorSpec& spec, Rng& rng) {
    if (spec.angle_steps.empty())
        throw std::invalid_argument("empty angle grid");
    return rotate_by_steps(s, spec.angle_steps[rng.index(spec.angle_steps.size())]);
}

ImageSample junk_in_range(const ImageSample& s, double lo, double hi,
                          Rng& rng) {
    check_sample(s);
    ImageSample out = s;
    for (double& px : out.image.data) px = rng.uniform(lo, hi);
    return out;
}

ImageSample junk(const ImageSample& s, const GeneratorSpec& spec, Rng& rng) {
    return junk_in_range(s, spec.junk_lo, spec.junk_hi, rng);
}

ImageSample apply(const GeneratorSpec& spec, const ImageSample& s, Rng& rng) {
    switch (spec.kind) {
    case GeneratorKind::noise_injection: return noise_inject(s, spec, rng);
    case GeneratorKind::rotation: return rotate(s, spec, rng);
    case GeneratorKind::junk: return junk(s, spec, rng);
    }
    throw std::logic_error("unknown generator kind");
}

std::vector<AugmentedSample>
generate_batch(const std::vector<GeneratorSpec>& registry,
               const budget::BudgetAllocation& allocation,
               const std::vector<ImageSample>& pool, Rng& rng) {
    if (allocation.counts.size() != registry.size())
        throw std::invalid_argument(
            "allocation length does not match registry");
    if (pool.empty()) throw std::invalid_argument("empty sample pool");
    std::vector<AugmentedSample> out;
    for (std::size_t k = 0; k < registry.size(); ++k) {
        for (int i = 0; i < allocation.counts[k]; ++i) {
            const ImageSample& base = pool[rng.index(pool.size())];
            out.push_back({apply(registry[k], base, rng), registry[k].id});
        }
    }
    rng.shuffle(out);
    return out;
}

} // namespace soda::augment
