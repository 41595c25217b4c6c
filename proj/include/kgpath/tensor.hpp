#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace kgpath {

// Dense row-major array of 64-bit reals. Value-semantic; shapes are checked
// by every op and mismatches raise ShapeError naming the op and shapes.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(std::vector<std::size_t> shape);
  static Tensor full(std::vector<std::size_t> shape, double fill);
  // Validates product(shape) == data.size(); in checked mode also rejects
  // non-finite values.
  static Tensor from(std::vector<std::size_t> shape, std::vector<double> data);
  static Tensor scalar(double v);
  static Tensor vector(std::vector<double> data);
  static Tensor matrix(std::size_t rows, std::size_t cols,
                       std::vector<double> data);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t numel() const { return data_.size(); }
  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

  std::size_t rows() const;
  std::size_t cols() const;

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

  double& at(std::size_t i) { return data_[i]; }
  double at(std::size_t i) const { return data_[i]; }
  double& at(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }

  // Scalar access for {1}-shaped tensors.
  double item() const;

  void fill(double v);
  std::string shape_str() const;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

// Rejecting NaN/Inf at construction is opt-in; tests and the trainer's
// diagnostics turn it on.
bool checked_mode();
void set_checked_mode(bool on);
void check_finite(const Tensor& t, const char* what);

std::string shape_str(const std::vector<std::size_t>& shape);

// Kernel-backed forward helpers. "into" forms accumulate.
Tensor t_add(const Tensor& a, const Tensor& b);
Tensor t_sub(const Tensor& a, const Tensor& b);
Tensor t_mul(const Tensor& a, const Tensor& b);
Tensor t_scale(const Tensor& a, double alpha);
void add_into(Tensor& dst, const Tensor& src);
void axpy_into(Tensor& dst, double alpha, const Tensor& src);
double t_dot(const Tensor& a, const Tensor& b);
double t_sum(const Tensor& a);
double t_max(const Tensor& a);
double l2_norm(const Tensor& a);

// C {m,n} = A {m,k} * B {k,n}
Tensor matmul_nn(const Tensor& a, const Tensor& b);
// C {m,n} = A {m,k} * B^T, B {n,k}
Tensor matmul_nt(const Tensor& a, const Tensor& b);
// C {m,n} = A^T * B, A {k,m}, B {k,n}
Tensor matmul_tn(const Tensor& a, const Tensor& b);
// y {m} = W {m,k} * x {k}
Tensor matvec(const Tensor& w, const Tensor& x);
// y {k} = W^T {m,k} * x {m}
Tensor matvec_t(const Tensor& w, const Tensor& x);
Tensor transpose(const Tensor& a);
// outer {m,n} += g {m} x^T {n}
void outer_into(Tensor& dst, const Tensor& g, const Tensor& x);

}  // namespace kgpath
