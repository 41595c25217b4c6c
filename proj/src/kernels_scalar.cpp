#include <cmath>

#include "kgpath/kernels.hpp"

namespace kgpath::kernels {
namespace {

void s_add(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void s_sub(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void s_mul(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void s_scale(double alpha, const double* a, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = alpha * a[i];
}

void s_axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

double s_dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double s_sum(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double s_max(const double* a, std::size_t n) {
  double best = a[0];
  for (std::size_t i = 1; i < n; ++i) best = a[i] > best ? a[i] : best;
  return best;
}

void s_relu(const double* a, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] > 0.0 ? a[i] : 0.0;
}

void s_relu_backward(const double* x, const double* gy, double* gx,
                     std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] > 0.0) gx[i] += gy[i];
  }
}

void s_adam_step(double lr, double beta1, double beta2, double eps,
                 double corr1, double corr2, const double* grad, double* m,
                 double* v, double* param, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double g = grad[i];
    m[i] = beta1 * m[i] + (1.0 - beta1) * g;
    v[i] = beta2 * v[i] + (1.0 - beta2) * (g * g);
    const double m_hat = m[i] / corr1;
    const double v_hat = v[i] / corr2;
    param[i] = param[i] - lr * (m_hat / (std::sqrt(v_hat) + eps));
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{
      "scalar", s_add,  s_sub,           s_mul,       s_scale, s_axpy,
      s_dot,    s_sum,  s_max,           s_relu,      s_relu_backward,
      s_adam_step,
  };
  return ops;
}

}  // namespace kgpath::kernels
