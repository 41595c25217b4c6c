#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

#include "kgpath/params.hpp"
#include "kgpath/tensor.hpp"

namespace kgpath {

// Handle into a Tape's node list.
struct Var {
  std::uint32_t idx = 0;
};

// Reverse-mode tape. Ops evaluate eagerly and, when grad mode is on, record
// a backward closure. backward() walks nodes in exact reverse recording
// order, so replaying a forward pass with identical inputs reproduces
// identical values and gradients bit-for-bit. One tape per example; tapes are
// single-threaded.
class Tape {
 public:
  explicit Tape(bool grad_enabled = true) : grad_enabled_(grad_enabled) {}

  bool grad_enabled() const { return grad_enabled_; }

  // Leaves.
  Var constant(Tensor v);
  Var param(Parameter& p);

  // Elementwise, same shape.
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var div(Var a, Var b);
  Var scale(Var a, double c);
  // out = s * a where s is a {1} tensor on the tape (gradient flows to both).
  Var scale_var(Var a, Var s);
  Var add_scalar(Var a, double c);
  Var relu(Var a);
  Var sigmoid(Var a);
  Var log(Var a);
  Var sqrt(Var a);
  Var clamp(Var a, double lo, double hi);

  // Linear algebra.
  Var matmul(Var a, Var b);           // {m,k} x {k,n}
  Var matvec(Var w, Var x);           // {m,k} x {k} -> {m}
  Var dot(Var a, Var b);              // {n},{n} -> {1}
  Var transpose(Var a);

  // Structure.
  Var concat(const std::vector<Var>& parts);      // 1-D pieces -> 1-D
  Var stack_rows(const std::vector<Var>& rows);   // each {d} -> {L,d}
  Var slice_cols(Var a, std::size_t c0, std::size_t c1);
  Var row(Var a, std::size_t r);

  // Reductions.
  Var sum(Var a);         // -> {1}
  Var mean(Var a);        // -> {1}
  Var mean_rows(Var a);   // {L,d} -> {d}, mean over rows

  // Stabilized softmax (max subtraction); output sums to 1.
  Var softmax(Var x);        // 1-D
  Var softmax_rows(Var x);   // 2-D, softmax per row

  // Seeds d(loss)/d(loss) = 1 and accumulates into every Parameter's grad.
  // loss must be a scalar recorded on this tape.
  void backward(Var loss);

  const Tensor& value(Var v) const;
  const Tensor& grad(Var v) const;
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    std::function<void(Tape&)> backprop;  // empty for leaves
    Parameter* param = nullptr;
  };

  Var push(Tensor value, std::function<void(Tape&)> backprop);
  void check_var(Var v, const char* op) const;
  Tensor& grad_ref(Var v) { return nodes_[v.idx].grad; }

  // deque: references returned by value()/grad() stay valid as ops are added.
  std::deque<Node> nodes_;
  bool grad_enabled_;
};

}  // namespace kgpath
