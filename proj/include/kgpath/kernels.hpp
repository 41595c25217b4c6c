#pragma once

#include <cstddef>

namespace kgpath::kernels {

// Data-parallel inner loops of the tensor engine. Every entry has a scalar
// reference implementation and, on x86-64, an AVX2 variant selected once at
// runtime. Elementwise entries (add/sub/mul/scale/axpy/relu/max-style ops and
// the Adam update) apply the same correctly rounded operation per element in
// both variants and therefore produce bit-identical results. Reductions
// (dot/sum) reassociate the accumulation in the SIMD variant and agree with
// the scalar reference only to rounding; the equivalence tests pin both
// contracts.
struct Ops {
  const char* name;

  void (*add)(const double* a, const double* b, double* out, std::size_t n);
  void (*sub)(const double* a, const double* b, double* out, std::size_t n);
  void (*mul)(const double* a, const double* b, double* out, std::size_t n);
  // out[i] = alpha * a[i]
  void (*scale)(double alpha, const double* a, double* out, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
  // n must be >= 1
  double (*max)(const double* a, std::size_t n);
  void (*relu)(const double* a, double* out, std::size_t n);
  // gx[i] += (x[i] > 0) ? gy[i] : 0
  void (*relu_backward)(const double* x, const double* gy, double* gx,
                        std::size_t n);
  // Adam with bias correction; corr1 = 1 - beta1^t, corr2 = 1 - beta2^t.
  void (*adam_step)(double lr, double beta1, double beta2, double eps,
                    double corr1, double corr2, const double* grad, double* m,
                    double* v, double* param, std::size_t n);
};

const Ops& scalar_ops();

#if defined(__x86_64__)
bool avx2_supported();
const Ops& avx2_ops();
#endif

// Active kernel set: AVX2 when the CPU supports it, scalar otherwise.
// Overridable with KGPATH_KERNELS=scalar|avx2 (checked once, first call).
const Ops& active();

}  // namespace kgpath::kernels
