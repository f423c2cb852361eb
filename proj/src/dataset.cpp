#include "soda/dataset.hpp"

#include <cmath>
#include <stdexcept>

#include "soda/kernels.hpp"

namespace soda::dataset {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

struct Shape {
    bool ellipse;
    double cr, cc;     // center
    double a1, a2;     // semi-axes / half-extents
    double cos_o, sin_o;
    double intensity;
};

bool inside(const Shape& s, double r, double c) {
    const double dr = r - s.cr;
    const double dc = c - s.cc;
    const double u = (s.cos_o * dr + s.sin_o * dc) / s.a1;
    const double v = (-s.sin_o * dr + s.cos_o * dc) / s.a2;
    if (s.ellipse) return u * u + v * v <= 1.0;
    return std::abs(u) <= 1.0 && std::abs(v) <= 1.0;
}

void standardize(Grid& img) {
    const double n = static_cast<double>(img.size());
    const double mean = kernels::sum(img.span()) / n;
    for (double& v : img.data) v -= mean;
    const double var = kernels::sum_squares(img.span()) / n;
    const double sd = std::sqrt(var);
    if (sd > 1e-9) kernels::scale(img.span(), 1.0 / sd);
}

} // namespace

augment::ImageSample make_synthetic_sample(int height, int width, Rng& rng) {
    if (height < 4 || width < 4)
        throw std::invalid_argument("sample dimensions too small");
    Grid img(height, width);
    Grid mask(height, width);

    // Isotropic background: a sinusoidal grating with uniformly random
    // direction, plus i.i.d. pixel noise.
    const double freq = rng.uniform(0.2, 0.8);
    const double dir = rng.uniform(0.0, kTau);
    const double phase = rng.uniform(0.0, kTau);
    const double amp = rng.uniform(0.2, 0.5);
    const double kr = freq * std::cos(dir);
    const double kc = freq * std::sin(dir);

    const int n_shapes = 1 + static_cast<int>(rng.index(3));
    std::vector<Shape> shapes;
    const double mr = 0.5 * (height - 1);
    const double mc = 0.5 * (width - 1);
    const double max_offset = 0.25 * std::min(height, width);
    for (int i = 0; i < n_shapes; ++i) {
        Shape s;
        s.ellipse = rng.uniform() < 0.5;
        const double radius = rng.uniform(0.0, max_offset);
        const double angle = rng.uniform(0.0, kTau);
        s.cr = mr + radius * std::cos(angle);
        s.cc = mc + radius * std::sin(angle);
        s.a1 = rng.uniform(3.5, 8.0);
        s.a2 = rng.uniform(3.5, 8.0);
        const double orient = rng.uniform(0.0, kTau);
        s.cos_o = std::cos(orient);
        s.sin_o = std::sin(orient);
        s.intensity = rng.uniform(0.8, 1.4);
        shapes.push_back(s);
    }

    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            double v = amp * std::sin(kr * (r - mr) + kc * (c - mc) + phase);
            v += rng.normal(0.0, 0.1);
            for (const Shape& s : shapes) {
                if (inside(s, r, c)) {
                    v += s.intensity;
                    mask(r, c) = 1.0;
                }
            }
            img(r, c) = v;
        }
    }

    standardize(img);
    return {std::move(img), std::move(mask)};
}

Dataset make_synthetic_dataset(const DatasetConfig& cfg, std::uint64_t seed) {
    if (cfg.n_train < 1) throw std::invalid_argument("n_train must be >= 1");
    if (cfg.n_test < 0) throw std::invalid_argument("n_test must be >= 0");
    Dataset ds;
    Rng train_rng = derive_stream(seed, "dataset.train");
    Rng test_rng = derive_stream(seed, "dataset.test");
    for (int i = 0; i < cfg.n_train; ++i)
        ds.train.push_back(make_synthetic_sample(cfg.height, cfg.width, train_rng));
    for (int i = 0; i < cfg.n_test; ++i)
        ds.test.push_back(make_synthetic_sample(cfg.height, cfg.width, test_rng));
    return ds;
}

} // namespace soda::dataset
