#include "kgpath/tensor.hpp"

#include <atomic>
#include <cmath>
#include <numeric>
#include <utility>

#include "kgpath/error.hpp"
#include "kgpath/kernels.hpp"

namespace kgpath {

namespace {

std::atomic<bool> g_checked{false};

std::size_t shape_numel(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t e : shape) n *= e;
  return n;
}

void require_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) {
    throw ShapeError(
        msg(op, ": shape mismatch ", a.shape_str(), " vs ", b.shape_str()));
  }
}

}  // namespace

bool checked_mode() { return g_checked.load(std::memory_order_relaxed); }
void set_checked_mode(bool on) { g_checked.store(on, std::memory_order_relaxed); }

void check_finite(const Tensor& t, const char* what) {
  for (double v : t.raw()) {
    if (!std::isfinite(v)) {
      throw Error(msg(what, ": non-finite value ", v));
    }
  }
}

std::string shape_str(const std::vector<std::size_t>& shape) {
  std::string s = "{";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  s += "}";
  return s;
}

Tensor Tensor::zeros(std::vector<std::size_t> shape) {
  Tensor t;
  t.shape_ = std::move(shape);
  t.data_.assign(shape_numel(t.shape_), 0.0);
  return t;
}

Tensor Tensor::full(std::vector<std::size_t> shape, double fill) {
  Tensor t;
  t.shape_ = std::move(shape);
  t.data_.assign(shape_numel(t.shape_), fill);
  return t;
}

Tensor Tensor::from(std::vector<std::size_t> shape, std::vector<double> data) {
  if (shape_numel(shape) != data.size()) {
    throw ShapeError(msg("Tensor::from: shape ", kgpath::shape_str(shape),
                         " expects ", shape_numel(shape), " values, got ",
                         data.size()));
  }
  Tensor t;
  t.shape_ = std::move(shape);
  t.data_ = std::move(data);
  if (checked_mode()) check_finite(t, "Tensor::from");
  return t;
}

Tensor Tensor::scalar(double v) { return from({1}, {v}); }

Tensor Tensor::vector(std::vector<double> data) {
  const std::size_t n = data.size();
  return from({n}, std::move(data));
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols,
                      std::vector<double> data) {
  return from({rows, cols}, std::move(data));
}

std::size_t Tensor::rows() const {
  if (rank() != 2) throw ShapeError(msg("rows(): tensor is ", shape_str()));
  return shape_[0];
}

std::size_t Tensor::cols() const {
  if (rank() != 2) throw ShapeError(msg("cols(): tensor is ", shape_str()));
  return shape_[1];
}

double Tensor::item() const {
  if (numel() != 1) {
    throw ShapeError(msg("item(): tensor is ", shape_str(), ", want 1 value"));
  }
  return data_[0];
}

void Tensor::fill(double v) { data_.assign(data_.size(), v); }

std::string Tensor::shape_str() const { return kgpath::shape_str(shape_); }

Tensor t_add(const Tensor& a, const Tensor& b) {
  require_same_shape("add", a, b);
  Tensor out = Tensor::zeros(a.shape());
  kernels::active().add(a.data(), b.data(), out.data(), a.numel());
  return out;
}

Tensor t_sub(const Tensor& a, const Tensor& b) {
  require_same_shape("sub", a, b);
  Tensor out = Tensor::zeros(a.shape());
  kernels::active().sub(a.data(), b.data(), out.data(), a.numel());
  return out;
}

Tensor t_mul(const Tensor& a, const Tensor& b) {
  require_same_shape("mul", a, b);
  Tensor out = Tensor::zeros(a.shape());
  kernels::active().mul(a.data(), b.data(), out.data(), a.numel());
  return out;
}

Tensor t_scale(const Tensor& a, double alpha) {
  Tensor out = Tensor::zeros(a.shape());
  kernels::active().scale(alpha, a.data(), out.data(), a.numel());
  return out;
}

void add_into(Tensor& dst, const Tensor& src) {
  require_same_shape("add_into", dst, src);
  kernels::active().axpy(1.0, src.data(), dst.data(), dst.numel());
}

void axpy_into(Tensor& dst, double alpha, const Tensor& src) {
  require_same_shape("axpy_into", dst, src);
  kernels::active().axpy(alpha, src.data(), dst.data(), dst.numel());
}

double t_dot(const Tensor& a, const Tensor& b) {
  require_same_shape("dot", a, b);
  return kernels::active().dot(a.data(), b.data(), a.numel());
}

double t_sum(const Tensor& a) {
  return kernels::active().sum(a.data(), a.numel());
}

double t_max(const Tensor& a) {
  if (a.numel() == 0) throw ShapeError("max: empty tensor");
  return kernels::active().max(a.data(), a.numel());
}

double l2_norm(const Tensor& a) { return std::sqrt(t_dot(a, a)); }

Tensor matmul_nn(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.cols() != b.rows()) {
    throw ShapeError(
        msg("matmul: lhs ", a.shape_str(), " rhs ", b.shape_str()));
  }
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  Tensor c = Tensor::zeros({m, n});
  const auto& ops = kernels::active();
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c.data() + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      ops.axpy(a.at(i, p), b.data() + p * n, crow, n);
    }
  }
  return c;
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.cols() != b.cols()) {
    throw ShapeError(
        msg("matmul_nt: lhs ", a.shape_str(), " rhs ", b.shape_str()));
  }
  const std::size_t m = a.rows(), k = a.cols(), n = b.rows();
  Tensor c = Tensor::zeros({m, n});
  const auto& ops = kernels::active();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      c.at(i, j) = ops.dot(a.data() + i * k, b.data() + j * k, k);
    }
  }
  return c;
}

Tensor matmul_tn(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.rows() != b.rows()) {
    throw ShapeError(
        msg("matmul_tn: lhs ", a.shape_str(), " rhs ", b.shape_str()));
  }
  const std::size_t k = a.rows(), m = a.cols(), n = b.cols();
  Tensor c = Tensor::zeros({m, n});
  const auto& ops = kernels::active();
  for (std::size_t p = 0; p < k; ++p) {
    const double* brow = b.data() + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      ops.axpy(a.at(p, i), brow, c.data() + i * n, n);
    }
  }
  return c;
}

Tensor matvec(const Tensor& w, const Tensor& x) {
  if (w.rank() != 2 || x.rank() != 1 || w.cols() != x.numel()) {
    throw ShapeError(msg("matvec: W ", w.shape_str(), " x ", x.shape_str()));
  }
  const std::size_t m = w.rows(), k = w.cols();
  Tensor y = Tensor::zeros({m});
  const auto& ops = kernels::active();
  for (std::size_t i = 0; i < m; ++i) {
    y.at(i) = ops.dot(w.data() + i * k, x.data(), k);
  }
  return y;
}

Tensor matvec_t(const Tensor& w, const Tensor& x) {
  if (w.rank() != 2 || x.rank() != 1 || w.rows() != x.numel()) {
    throw ShapeError(msg("matvec_t: W ", w.shape_str(), " x ", x.shape_str()));
  }
  const std::size_t m = w.rows(), k = w.cols();
  Tensor y = Tensor::zeros({k});
  const auto& ops = kernels::active();
  for (std::size_t i = 0; i < m; ++i) {
    ops.axpy(x.at(i), w.data() + i * k, y.data(), k);
  }
  return y;
}

Tensor transpose(const Tensor& a) {
  if (a.rank() != 2) throw ShapeError(msg("transpose: ", a.shape_str()));
  Tensor t = Tensor::zeros({a.cols(), a.rows()});
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) t.at(j, i) = a.at(i, j);
  }
  return t;
}

void outer_into(Tensor& dst, const Tensor& g, const Tensor& x) {
  if (dst.rank() != 2 || g.rank() != 1 || x.rank() != 1 ||
      dst.rows() != g.numel() || dst.cols() != x.numel()) {
    throw ShapeError(msg("outer_into: dst ", dst.shape_str(), " g ",
                         g.shape_str(), " x ", x.shape_str()));
  }
  const auto& ops = kernels::active();
  for (std::size_t i = 0; i < g.numel(); ++i) {
    ops.axpy(g.at(i), x.data(), dst.data() + i * dst.cols(), dst.cols());
  }
}

}  // namespace kgpath
