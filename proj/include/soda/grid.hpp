#ifndef SODA_GRID_HPP
#define SODA_GRID_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace soda {

// Dense row-major H x W matrix of doubles. Images, masks and the model's
// per-pixel planes all use this; the contiguous layout is what the kernels
// operate on.
struct Grid {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Grid() = default;
    Grid(int r, int c, double fill = 0.0)
        : rows(r), cols(c),
          data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c),
               fill) {}

    double& operator()(int r, int c) {
        return data[static_cast<std::size_t>(r) * cols + c];
    }
    double operator()(int r, int c) const {
        return data[static_cast<std::size_t>(r) * cols + c];
    }

    std::size_t size() const { return data.size(); }
    bool same_shape(const Grid& o) const {
        return rows == o.rows && cols == o.cols;
    }

    std::span<double> span() { return data; }
    std::span<const double> span() const { return data; }

    void fill(double v) { data.assign(data.size(), v); }

    friend bool operator==(const Grid&, const Grid&) = default;
};

} // namespace soda

#endif
