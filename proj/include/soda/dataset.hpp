#ifndef SODA_DATASET_HPP
#define SODA_DATASET_HPP

#include <cstdint>
#include <vector>

#include "soda/augment.hpp"
#include "soda/rng.hpp"

namespace soda::dataset {

struct DatasetConfig {
    int height = 32;
    int width = 32;
    int n_train = 20;
    int n_test = 30;
};

struct Dataset {
    std::vector<augment::ImageSample> train;
    std::vector<augment::ImageSample> test;
};

// One synthetic segmentation sample: 1-3 bright ellipses/rectangles with
// random orientation over an isotropic textured background plus pixel
// noise, standardized to zero mean / unit variance per image. The mask is
// the union of shape interiors. Shape positions and orientations are drawn
// isotropically about the image center, so the sample distribution is
// invariant under rotations about the center and the rotation generator is
// distribution-preserving.
augment::ImageSample make_synthetic_sample(int height, int width, Rng& rng);

// Train and test sets come from independent substreams of `seed`, so they
// are disjoint and each is reproducible on its own.
Dataset make_synthetic_dataset(const DatasetConfig& cfg, std::uint64_t seed);

} // namespace soda::dataset

#endif
