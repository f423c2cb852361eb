#include "soda/kernels.hpp"

#include <atomic>
#include <cstdlib>

namespace soda::kernels {

namespace {

std::atomic<bool> g_force_scalar{false};

bool env_forces_scalar() {
    static const bool forced = [] {
        const char* v = std::getenv("SODA_FORCE_SCALAR");
        return v != nullptr && v[0] != '\0' && v[0] != '0';
    }();
    return forced;
}

} // namespace

bool avx2_available() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

bool avx2_enabled() {
#ifdef SODA_HAVE_AVX2
    static const bool cpu_ok = avx2_available();
    return cpu_ok && !env_forces_scalar() &&
           !g_force_scalar.load(std::memory_order_relaxed);
#else
    return false;
#endif
}

void force_scalar(bool on) {
    g_force_scalar.store(on, std::memory_order_relaxed);
}

#ifdef SODA_HAVE_AVX2
#define SODA_DISPATCH(fn, ...)                                                \
    do {                                                                       \
        if (avx2_enabled()) return avx2::fn(__VA_ARGS__);                      \
        return scalar::fn(__VA_ARGS__);                                        \
    } while (0)
#else
#define SODA_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

double dot(std::span<const double> a, std::span<const double> b) {
    SODA_DISPATCH(dot, a, b);
}

double sum(std::span<const double> a) { SODA_DISPATCH(sum, a); }

double sum_squares(std::span<const double> a) { SODA_DISPATCH(sum_squares, a); }

void axpy(double a, std::span<const double> x, std::span<double> y) {
    SODA_DISPATCH(axpy, a, x, y);
}

void scale(std::span<double> x, double a) { SODA_DISPATCH(scale, x, a); }

void ema(double rho, std::span<double> m, std::span<const double> g) {
    SODA_DISPATCH(ema, rho, m, g);
}

void conv3x3_same(const double* in, int h, int w, const double* k9,
                  double bias, double* out) {
    SODA_DISPATCH(conv3x3_same, in, h, w, k9, bias, out);
}

void conv3x3_grad_kernel(const double* in, int h, int w, const double* dout,
                         double* dk9) {
    SODA_DISPATCH(conv3x3_grad_kernel, in, h, w, dout, dk9);
}

#undef SODA_DISPATCH

} // namespace soda::kernels
