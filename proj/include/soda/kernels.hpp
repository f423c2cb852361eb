#ifndef SODA_KERNELS_HPP
#define SODA_KERNELS_HPP

#include <cstddef>
#include <span>

// Arithmetic inner loops shared by the feedback and model code. Every
// kernel has a scalar reference implementation and, on x86-64 builds with
// SODA_HAVE_AVX2, an AVX2/FMA variant. The unprefixed entry points pick the
// variant at runtime (CPUID probe, overridable for tests); the AVX2 path is
// equivalence-tested against the scalar path.
namespace soda::kernels {

// True when the running CPU reports AVX2 + FMA.
bool avx2_available();

// True when dispatch will actually take the AVX2 path (compiled in,
// CPU supports it, not forced off).
bool avx2_enabled();

// Test hook. Also settable via environment: SODA_FORCE_SCALAR=1.
void force_scalar(bool on);

double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> a);
double sum_squares(std::span<const double> a);

// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
// x *= a
void scale(std::span<double> x, double a);
// m = rho * m + (1 - rho) * g
void ema(double rho, std::span<double> m, std::span<const double> g);

// Same-size 3x3 cross-correlation with zero padding:
//   out[r][c] = bias + sum_{u,v in 0..2} k9[3u+v] * in[r+u-1][c+v-1]
void conv3x3_same(const double* in, int h, int w, const double* k9,
                  double bias, double* out);

// Kernel gradient of the same correlation:
//   dk9[3u+v] += sum_{r,c} dout[r][c] * in[r+u-1][c+v-1]
void conv3x3_grad_kernel(const double* in, int h, int w, const double* dout,
                         double* dk9);

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> a);
double sum_squares(std::span<const double> a);
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(std::span<double> x, double a);
void ema(double rho, std::span<double> m, std::span<const double> g);
void conv3x3_same(const double* in, int h, int w, const double* k9,
                  double bias, double* out);
void conv3x3_grad_kernel(const double* in, int h, int w, const double* dout,
                         double* dk9);
} // namespace scalar

#ifdef SODA_HAVE_AVX2
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> a);
double sum_squares(std::span<const double> a);
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(std::span<double> x, double a);
void ema(double rho, std::span<double> m, std::span<const double> g);
void conv3x3_same(const double* in, int h, int w, const double* k9,
                  double bias, double* out);
void conv3x3_grad_kernel(const double* in, int h, int w, const double* dout,
                         double* dk9);
} // namespace avx2
#endif

} // namespace soda::kernels

#endif
