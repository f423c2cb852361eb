#include "soda/kernels.hpp"

#if defined(SODA_HAVE_AVX2) && defined(__AVX2__)

#include <immintrin.h>

#include <algorithm>

namespace soda::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

} // namespace

double dot(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    const double* pa = a.data();
    const double* pb = b.data();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i),
                               _mm256_loadu_pd(pb + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i + 4),
                               _mm256_loadu_pd(pb + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i),
                               _mm256_loadu_pd(pb + i), acc0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += pa[i] * pb[i];
    return acc;
}

double sum(std::span<const double> a) {
    const std::size_t n = a.size();
    const double* p = a.data();
    __m256d acc0 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(p + i));
    double acc = hsum(acc0);
    for (; i < n; ++i) acc += p[i];
    return acc;
}

double sum_squares(std::span<const double> a) {
    const std::size_t n = a.size();
    const double* p = a.data();
    __m256d acc0 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(p + i);
        acc0 = _mm256_fmadd_pd(v, v, acc0);
    }
    double acc = hsum(acc0);
    for (; i < n; ++i) acc += p[i] * p[i];
    return acc;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    const std::size_t n = x.size();
    const double* px = x.data();
    double* py = y.data();
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(px + i),
                                           _mm256_loadu_pd(py + i));
        _mm256_storeu_pd(py + i, vy);
    }
    for (; i < n; ++i) py[i] += a * px[i];
}

void scale(std::span<double> x, double a) {
    const std::size_t n = x.size();
    double* p = x.data();
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(p + i, _mm256_mul_pd(va, _mm256_loadu_pd(p + i)));
    }
    for (; i < n; ++i) p[i] *= a;
}

void ema(double rho, std::span<double> m, std::span<const double> g) {
    const std::size_t n = m.size();
    double* pm = m.data();
    const double* pg = g.data();
    const __m256d vr = _mm256_set1_pd(rho);
    const __m256d vw = _mm256_set1_pd(1.0 - rho);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_fmadd_pd(
            vr, _mm256_loadu_pd(pm + i),
            _mm256_mul_pd(vw, _mm256_loadu_pd(pg + i)));
        _mm256_storeu_pd(pm + i, v);
    }
    const double w = 1.0 - rho;
    for (; i < n; ++i) pm[i] = rho * pm[i] + w * pg[i];
}

void conv3x3_same(const double* in, int h, int w, const double* k9,
                  double bias, double* out) {
    // Rows vectorized over the output column; the first/last column and the
    // padded rows fall back to the scalar tap loop.
    const __m256d vbias = _mm256_set1_pd(bias);
    __m256d vk[9];
    for (int t = 0; t < 9; ++t) vk[t] = _mm256_set1_pd(k9[t]);

    for (int r = 0; r < h; ++r) {
        double* orow = out + static_cast<std::size_t>(r) * w;
        const int u0 = (r == 0) ? 1 : 0;
        const int u1 = (r == h - 1) ? 2 : 3;
        int c = 1;
        for (; c + 4 <= w - 1; c += 4) {
            __m256d acc = vbias;
            for (int u = u0; u < u1; ++u) {
                const double* irow =
                    in + static_cast<std::size_t>(r + u - 1) * w + c;
                acc = _mm256_fmadd_pd(vk[3 * u + 0], _mm256_loadu_pd(irow - 1),
                                      acc);
                acc = _mm256_fmadd_pd(vk[3 * u + 1], _mm256_loadu_pd(irow),
                                      acc);
                acc = _mm256_fmadd_pd(vk[3 * u + 2], _mm256_loadu_pd(irow + 1),
                                      acc);
            }
            _mm256_storeu_pd(orow + c, acc);
        }
        auto tap = [&](int col) {
            double acc = bias;
            for (int u = u0; u < u1; ++u) {
                const double* irow = in + static_cast<std::size_t>(r + u - 1) * w;
                for (int v = 0; v < 3; ++v) {
                    const int cc = col + v - 1;
                    if (cc < 0 || cc >= w) continue;
                    acc += k9[3 * u + v] * irow[cc];
                }
            }
            orow[col] = acc;
        };
        tap(0);
        for (; c < w; ++c) tap(c);
    }
}

void conv3x3_grad_kernel(const double* in, int h, int w, const double* dout,
                         double* dk9) {
    for (int u = 0; u < 3; ++u) {
        for (int v = 0; v < 3; ++v) {
            const int du = u - 1, dv = v - 1;
            const int r0 = std::max(0, -du), r1 = std::min(h, h - du);
            const int c0 = std::max(0, -dv), c1 = std::min(w, w - dv);
            __m256d vacc = _mm256_setzero_pd();
            double tail = 0.0;
            for (int r = r0; r < r1; ++r) {
                const double* drow = dout + static_cast<std::size_t>(r) * w;
                const double* irow =
                    in + static_cast<std::size_t>(r + du) * w + dv;
                int c = c0;
                for (; c + 4 <= c1; c += 4) {
                    vacc = _mm256_fmadd_pd(_mm256_loadu_pd(drow + c),
                                           _mm256_loadu_pd(irow + c), vacc);
                }
                for (; c < c1; ++c) tail += drow[c] * irow[c];
            }
            dk9[3 * u + v] += hsum(vacc) + tail;
        }
    }
}

} // namespace soda::kernels::avx2

#endif // SODA_HAVE_AVX2 && __AVX2__
