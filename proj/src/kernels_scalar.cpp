#include "soda/kernels.hpp"

#include <algorithm>

namespace soda::kernels::scalar {

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sum(std::span<const double> a) {
    double acc = 0.0;
    for (double v : a) acc += v;
    return acc;
}

double sum_squares(std::span<const double> a) {
    double acc = 0.0;
    for (double v : a) acc += v * v;
    return acc;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale(std::span<double> x, double a) {
    for (double& v : x) v *= a;
}

void ema(double rho, std::span<double> m, std::span<const double> g) {
    const double w = 1.0 - rho;
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) m[i] = rho * m[i] + w * g[i];
}

void conv3x3_same(const double* in, int h, int w, const double* k9,
                  double bias, double* out) {
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double acc = bias;
            for (int u = 0; u < 3; ++u) {
                const int rr = r + u - 1;
                if (rr < 0 || rr >= h) continue;
                const double* row = in + static_cast<std::size_t>(rr) * w;
                for (int v = 0; v < 3; ++v) {
                    const int cc = c + v - 1;
                    if (cc < 0 || cc >= w) continue;
                    acc += k9[3 * u + v] * row[cc];
                }
            }
            out[static_cast<std::size_t>(r) * w + c] = acc;
        }
    }
}

void conv3x3_grad_kernel(const double* in, int h, int w, const double* dout,
                         double* dk9) {
    for (int u = 0; u < 3; ++u) {
        for (int v = 0; v < 3; ++v) {
            const int du = u - 1, dv = v - 1;
            const int r0 = std::max(0, -du), r1 = std::min(h, h - du);
            const int c0 = std::max(0, -dv), c1 = std::min(w, w - dv);
            double acc = 0.0;
            for (int r = r0; r < r1; ++r) {
                const double* drow = dout + static_cast<std::size_t>(r) * w;
                const double* irow =
                    in + static_cast<std::size_t>(r + du) * w + dv;
                for (int c = c0; c < c1; ++c) acc += drow[c] * irow[c];
            }
            dk9[3 * u + v] += acc;
        }
    }
}

} // namespace soda::kernels::scalar
