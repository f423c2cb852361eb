#ifndef SODA_AUGMENT_HPP
#define SODA_AUGMENT_HPP

#include <vector>

#include "soda/budget.hpp"
#include "soda/grid.hpp"
#include "soda/rng.hpp"

namespace soda::augment {

// One input/target pair: image (standardized intensities) and binary mask.
struct ImageSample {
    Grid image;
    Grid mask;
};

enum class GeneratorKind { noise_injection, rotation, junk };

// How the drawn noise field eps ~ N(0, sigma^2) is combined with the image.
//   multiplicative: x * (1 + eps)   (default; perturbation around identity)
//   additive:       x + eps
//   literal:        x * eps         (zero-mean product, erases the image)
enum class NoiseMode { multiplicative, additive, literal };

struct GeneratorSpec {
    int id = 0; // 1..K, unique within a registry
    GeneratorKind kind = GeneratorKind::noise_injection;

    // noise_injection
    std::vector<double> sigma_grid = {0.01, 0.02, 0.03, 0.04, 0.05};
    NoiseMode noise_mode = NoiseMode::multiplicative;

    // rotation: multiples of 45 degrees to draw from
    std::vector<int> angle_steps = {1, 2, 3, 4, 5, 6, 7, 8};

    // junk: pixel value range
    double junk_lo = 0.0;
    double junk_hi = 1.0;
};

struct AugmentedSample {
    ImageSample sample;
    int generator_id = 0;
};

// sigma drawn uniformly from the configured grid, then an i.i.d.
// N(0, sigma^2) field is applied per noise_mode. The mask is untouched.
ImageSample noise_inject(const ImageSample& s, const GeneratorSpec& spec,
                         Rng& rng);
ImageSample noise_inject_with_sigma(const ImageSample& s, double sigma,
                                    NoiseMode mode, Rng& rng);

// Rotates image and mask by a * 45 degrees counterclockwise about the image
// center, a drawn uniformly from the configured grid. Multiples of 90
// degrees on
// square grids are exact index permutations; other angles sample the image
// bilinearly and the mask nearest-neighbor (keeps it binary), with zeros
// outside the frame.
ImageSample rotate(const ImageSample& s, const GeneratorSpec& spec, Rng& rng);
ImageSample rotate_by_steps(const ImageSample& s, int a);

// Replaces the image with i.i.d. Uniform[lo, hi) pixels. The original mask
// is kept, which is what makes this arm harmful: the target no longer
// matches the input.
ImageSample junk(const ImageSample& s, const GeneratorSpec& spec, Rng& rng);
ImageSample junk_in_range(const ImageSample& s, double lo, double hi,
                          Rng& rng);

ImageSample apply(const GeneratorSpec& spec, const ImageSample& s, Rng& rng);

// Produces exactly allocation.counts[k] samples from registry[k], each
// built from a pool sample drawn uniformly with replacement, then shuffles
// the combined batch. All randomness comes from `rng`.
std::vector<AugmentedSample>
generate_batch(const std::vector<GeneratorSpec>& registry,
               const budget::BudgetAllocation& allocation,
               const std::vector<ImageSample>& pool, Rng& rng);

} // namespace soda::augment

#endif
