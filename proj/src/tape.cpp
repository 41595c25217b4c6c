#include "kgpath/tape.hpp"

#include <cmath>

#include "kgpath/error.hpp"
#include "kgpath/kernels.hpp"

namespace kgpath {

namespace {

void require_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) {
    throw ShapeError(
        msg(op, ": shape mismatch ", a.shape_str(), " vs ", b.shape_str()));
  }
}

void softmax_fill(const double* x, double* out, std::size_t n) {
  const double m = kernels::active().max(x, n);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(x[i] - m);
    z += out[i];
  }
  for (std::size_t i = 0; i < n; ++i) out[i] /= z;
}

// g_in = s * (g - <g, s>), written for one row.
void softmax_backward_row(const double* s, const double* g, double* gx,
                          std::size_t n) {
  const double gs = kernels::active().dot(g, s, n);
  for (std::size_t i = 0; i < n; ++i) gx[i] += s[i] * (g[i] - gs);
}

}  // namespace

Var Tape::push(Tensor value, std::function<void(Tape&)> backprop) {
  Node node;
  node.grad = Tensor::zeros(value.shape());
  node.value = std::move(value);
  if (grad_enabled_) node.backprop = std::move(backprop);
  nodes_.push_back(std::move(node));
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

void Tape::check_var(Var v, const char* op) const {
  if (v.idx >= nodes_.size()) {
    throw Error(msg(op, ": var #", v.idx, " is not on this tape (",
                    nodes_.size(), " nodes)"));
  }
}

const Tensor& Tape::value(Var v) const {
  check_var(v, "value");
  return nodes_[v.idx].value;
}

const Tensor& Tape::grad(Var v) const {
  check_var(v, "grad");
  return nodes_[v.idx].grad;
}

Var Tape::constant(Tensor v) { return push(std::move(v), {}); }

Var Tape::param(Parameter& p) {
  Var v = push(p.value, {});
  nodes_[v.idx].param = &p;
  return v;
}

Var Tape::add(Var a, Var b) {
  require_same_shape("add", value(a), value(b));
  Tensor out = t_add(value(a), value(b));
  return push(std::move(out), [a, b, self = nodes_.size()](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    add_into(t.grad_ref(a), g);
    add_into(t.grad_ref(b), g);
  });
}

Var Tape::sub(Var a, Var b) {
  require_same_shape("sub", value(a), value(b));
  Tensor out = t_sub(value(a), value(b));
  return push(std::move(out), [a, b, self = nodes_.size()](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    add_into(t.grad_ref(a), g);
    axpy_into(t.grad_ref(b), -1.0, g);
  });
}

Var Tape::mul(Var a, Var b) {
  require_same_shape("mul", value(a), value(b));
  Tensor out = t_mul(value(a), value(b));
  return push(std::move(out), [a, b, self = nodes_.size()](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    add_into(t.grad_ref(a), t_mul(g, t.value(b)));
    add_into(t.grad_ref(b), t_mul(g, t.value(a)));
  });
}

Var Tape::div(Var a, Var b) {
  const Tensor& va = value(a);
  const Tensor& vb = value(b);
  require_same_shape("div", va, vb);
  Tensor out = Tensor::zeros(va.shape());
  for (std::size_t i = 0; i < va.numel(); ++i) out.at(i) = va.at(i) / vb.at(i);
  return push(std::move(out), [a, b, self = nodes_.size()](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& va = t.value(a);
    const Tensor& vb = t.value(b);
    Tensor& ga = t.grad_ref(a);
    Tensor& gb = t.grad_ref(b);
    for (std::size_t i = 0; i < va.numel(); ++i) {
      ga.at(i) += g.at(i) / vb.at(i);
      gb.at(i) -= g.at(i) * va.at(i) / (vb.at(i) * vb.at(i));
    }
  });
}

Var Tape::scale(Var a, double c) {
  Tensor out = t_scale(value(a), c);
  return push(std::move(out), [a, c, self = nodes_.size()](Tape& t) {
    axpy_into(t.grad_ref(a), c, t.nodes_[self].grad);
  });
}

Var Tape::scale_var(Var a, Var s) {
  const Tensor& vs = value(s);
  if (vs.numel() != 1) {
    throw ShapeError(msg("scale_var: scale must be {1}, got ", vs.shape_str()));
  }
  Tensor out = t_scale(value(a), vs.at(0));
  return push(std::move(out), [a, s, self = nodes_.size()](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    const double sv = t.value(s).at(0);
    axpy_into(t.grad_ref(a), sv, g);
    t.grad_ref(s).at(0) += t_dot(g, t.value(a));
  });
}

Var Tape::add_scalar(Var a, double c) {
  const Tensor& va = value(a);
  Tensor out = va;
  for (std::size_t i = 0; i < out.numel(); ++i) out.at(i) += c;
  return push(std::move(out), [a, self = nodes_.size()](Tape& t) {
    add_into(t.grad_ref(a), t.nodes_[self].grad);
  });
}

Var Tape::relu(Var a) {
  const Tensor& va = value(a);
  Tensor out = Tensor::zeros(va.shape());
  kernels::active().relu(va.data(), out.data(), va.numel());
  return push(std::move(out), [a, self = nodes_.size()](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& x = t.value(a);
    kernels::active().relu_backward(x.data(), g.data(), t.grad_ref(a).data(),
                                    x.numel());
  });
}

Var Tape::sigmoid(Var a) {
  const Tensor& va = value(a);
  Tensor out = Tensor::zeros(va.shape());
  for (std::size_t i = 0; i < va.numel(); ++i) {
    out.at(i) = 1.0 / (1.0 + std::exp(-va.at(i)));
  }
  return push(std::move(out), [a, self = nodes_.size()](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& s = t.nodes_[self].value;
    Tensor& ga = t.grad_ref(a);
    for (std::size_t i = 0; i < s.numel(); ++i) {
      ga.at(i) += g.at(i) * s.at(i) * (1.0 - s.at(i));
    }
  });
}

Var Tape::log(Var a) {
  const Tensor& va = value(a);
  Tensor out = Tensor::zeros(va.shape());
  for (std::size_t i = 0; i < va.numel(); ++i) out.at(i) = std::log(va.at(i));
  return push(std::move(out), [a, self = nodes_.size()](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& x = t.value(a);
    Tensor& ga = t.grad_ref(a);
    for (std::size_t i = 0; i < x.numel(); ++i) ga.at(i) += g.at(i) / x.at(i);
  });
}

Var Tape::sqrt(Var a) {
  const Tensor& va = value(a);
  Tensor out = Tensor::zeros(va.shape());
  for (std::size_t i = 0; i < va.numel(); ++i) out.at(i) = std::sqrt(va.at(i));
  return push(std::move(out), [a, self = nodes_.size()](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& s = t.nodes_[self].value;
    Tensor& ga = t.grad_ref(a);
    for (std::size_t i = 0; i < s.numel(); ++i) {
      ga.at(i) += g.at(i) * 0.5 / s.at(i);
    }
  });
}

Var Tape::clamp(Var a, double lo, double hi) {
  const Tensor& va = value(a);
  Tensor out = Tensor::zeros(va.shape());
  for (std::size_t i = 0; i < va.numel(); ++i) {
    double v = va.at(i);
    out.at(i) = v < lo ? lo : (v > hi ? hi : v);
  }
  return push(std::move(out), [a, lo, hi, self = nodes_.size()](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& x = t.value(a);
    Tensor& ga = t.grad_ref(a);
    for (std::size_t i = 0; i < x.numel(); ++i) {
      if (x.at(i) > lo && x.at(i) < hi) ga.at(i) += g.at(i);
    }
  });
}

Var Tape::matmul(Var a, Var b) {
  Tensor out = matmul_nn(value(a), value(b));
  return push(std::move(out), [a, b, self = nodes_.size()](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    add_into(t.grad_ref(a), matmul_nt(g, t.value(b)));
    add_into(t.grad_ref(b), matmul_tn(t.value(a), g));
  });
}

Var Tape::matvec(Var w, Var x) {
  Tensor out = kgpath::matvec(value(w), value(x));
  return push(std::move(out), [w, x, self = nodes_.size()](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    outer_into(t.grad_ref(w), g, t.value(x));
    add_into(t.grad_ref(x), matvec_t(t.value(w), g));
  });
}

Var Tape::dot(Var a, Var b) {
  const Tensor& va = value(a);
  const Tensor& vb = value(b);
  require_same_shape("dot", va, vb);
  if (va.rank() != 1) throw ShapeError(msg("dot: want vectors, got ", va.shape_str()));
  Tensor out = Tensor::scalar(t_dot(va, vb));
  return push(std::move(out), [a, b, self = nodes_.size()](Tape& t) {
    const double g = t.nodes_[self].grad.at(0);
    axpy_into(t.grad_ref(a), g, t.value(b));
    axpy_into(t.grad_ref(b), g, t.value(a));
  });
}

Var Tape::transpose(Var a) {
  Tensor out = kgpath::transpose(value(a));
  return push(std::move(out), [a, self = nodes_.size()](Tape& t) {
    add_into(t.grad_ref(a), kgpath::transpose(t.nodes_[self].grad));
  });
}

Var Tape::concat(const std::vector<Var>& parts) {
  if (parts.empty()) throw ShapeError("concat: no inputs");
  std::size_t total = 0;
  for (Var p : parts) {
    const Tensor& v = value(p);
    if (v.rank() != 1) {
      throw ShapeError(msg("concat: want 1-D parts, got ", v.shape_str()));
    }
    total += v.numel();
  }
  Tensor out = Tensor::zeros({total});
  std::size_t off = 0;
  for (Var p : parts) {
    const Tensor& v = value(p);
    for (std::size_t i = 0; i < v.numel(); ++i) out.at(off + i) = v.at(i);
    off += v.numel();
  }
  return push(std::move(out), [parts, self = nodes_.size()](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    std::size_t off = 0;
    for (Var p : parts) {
      Tensor& gp = t.grad_ref(p);
      for (std::size_t i = 0; i < gp.numel(); ++i) gp.at(i) += g.at(off + i);
      off += gp.numel();
    }
  });
}

Var Tape::stack_rows(const std::vector<Var>& rows) {
  if (rows.empty()) throw ShapeError("stack_rows: no inputs");
  const std::size_t d = value(rows[0]).numel();
  for (Var r : rows) {
    const Tensor& v = value(r);
    if (v.rank() != 1 || v.numel() != d) {
      throw ShapeError(msg("stack_rows: row ", v.shape_str(), ", want {", d, "}"));
    }
  }
  Tensor out = Tensor::zeros({rows.size(), d});
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Tensor& v = value(rows[r]);
    for (std::size_t i = 0; i < d; ++i) out.at(r, i) = v.at(i);
  }
  return push(std::move(out), [rows, d, self = nodes_.size()](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      Tensor& gr = t.grad_ref(rows[r]);
      for (std::size_t i = 0; i < d; ++i) gr.at(i) += g.at(r, i);
    }
  });
}

Var Tape::slice_cols(Var a, std::size_t c0, std::size_t c1) {
  const Tensor& va = value(a);
  if (va.rank() != 2 || c0 >= c1 || c1 > va.cols()) {
    throw ShapeError(msg("slice_cols: ", va.shape_str(), " cols [", c0, ",", c1, ")"));
  }
  Tensor out = Tensor::zeros({va.rows(), c1 - c0});
  for (std::size_t r = 0; r < va.rows(); ++r) {
    for (std::size_t c = c0; c < c1; ++c) out.at(r, c - c0) = va.at(r, c);
  }
  return push(std::move(out), [a, c0, self = nodes_.size()](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    Tensor& ga = t.grad_ref(a);
    for (std::size_t r = 0; r < g.rows(); ++r) {
      for (std::size_t c = 0; c < g.cols(); ++c) ga.at(r, c0 + c) += g.at(r, c);
    }
  });
}

Var Tape::row(Var a, std::size_t r) {
  const Tensor& va = value(a);
  if (va.rank() != 2 || r >= va.rows()) {
    throw ShapeError(msg("row: ", va.shape_str(), " row ", r));
  }
  Tensor out = Tensor::zeros({va.cols()});
  for (std::size_t c = 0; c < va.cols(); ++c) out.at(c) = va.at(r, c);
  return push(std::move(out), [a, r, self = nodes_.size()](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    Tensor& ga = t.grad_ref(a);
    for (std::size_t c = 0; c < g.numel(); ++c) ga.at(r, c) += g.at(c);
  });
}

Var Tape::sum(Var a) {
  Tensor out = Tensor::scalar(t_sum(value(a)));
  return push(std::move(out), [a, self = nodes_.size()](Tape& t) {
    const double g = t.nodes_[self].grad.at(0);
    Tensor& ga = t.grad_ref(a);
    for (std::size_t i = 0; i < ga.numel(); ++i) ga.at(i) += g;
  });
}

Var Tape::mean(Var a) {
  const std::size_t n = value(a).numel();
  if (n == 0) throw ShapeError("mean: empty tensor");
  Tensor out = Tensor::scalar(t_sum(value(a)) / static_cast<double>(n));
  return push(std::move(out), [a, n, self = nodes_.size()](Tape& t) {
    const double g = t.nodes_[self].grad.at(0) / static_cast<double>(n);
    Tensor& ga = t.grad_ref(a);
    for (std::size_t i = 0; i < ga.numel(); ++i) ga.at(i) += g;
  });
}

Var Tape::mean_rows(Var a) {
  const Tensor& va = value(a);
  if (va.rank() != 2) throw ShapeError(msg("mean_rows: ", va.shape_str()));
  const std::size_t rows = va.rows(), cols = va.cols();
  Tensor out = Tensor::zeros({cols});
  for (std::size_t r = 0; r < rows; ++r) {
    kernels::active().axpy(1.0 / static_cast<double>(rows), va.data() + r * cols,
                           out.data(), cols);
  }
  return push(std::move(out), [a, rows, cols, self = nodes_.size()](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    Tensor& ga = t.grad_ref(a);
    for (std::size_t r = 0; r < rows; ++r) {
      kernels::active().axpy(1.0 / static_cast<double>(rows), g.data(),
                             ga.data() + r * cols, cols);
    }
  });
}

Var Tape::softmax(Var x) {
  const Tensor& vx = value(x);
  if (vx.rank() != 1 || vx.numel() == 0) {
    throw ShapeError(msg("softmax: want non-empty vector, got ", vx.shape_str()));
  }
  Tensor out = Tensor::zeros(vx.shape());
  softmax_fill(vx.data(), out.data(), vx.numel());
  return push(std::move(out), [x, self = nodes_.size()](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& s = t.nodes_[self].value;
    softmax_backward_row(s.data(), g.data(), t.grad_ref(x).data(), s.numel());
  });
}

Var Tape::softmax_rows(Var x) {
  const Tensor& vx = value(x);
  if (vx.rank() != 2) throw ShapeError(msg("softmax_rows: ", vx.shape_str()));
  const std::size_t rows = vx.rows(), cols = vx.cols();
  Tensor out = Tensor::zeros(vx.shape());
  for (std::size_t r = 0; r < rows; ++r) {
    softmax_fill(vx.data() + r * cols, out.data() + r * cols, cols);
  }
  return push(std::move(out), [x, rows, cols, self = nodes_.size()](Tape& t) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& s = t.nodes_[self].value;
    Tensor& gx = t.grad_ref(x);
    for (std::size_t r = 0; r < rows; ++r) {
      softmax_backward_row(s.data() + r * cols, g.data() + r * cols,
                           gx.data() + r * cols, cols);
    }
  });
}

void Tape::backward(Var loss) {
  if (!grad_enabled_) throw Error("backward: tape recorded without gradients");
  check_var(loss, "backward");
  if (nodes_[loss.idx].value.numel() != 1) {
    throw ShapeError(msg("backward: loss must be scalar, got ",
                         nodes_[loss.idx].value.shape_str()));
  }
  for (auto& node : nodes_) node.grad.fill(0.0);
  nodes_[loss.idx].grad.at(0) = 1.0;
  for (std::size_t i = loss.idx + 1; i-- > 0;) {
    Node& node = nodes_[i];
    if (node.backprop) node.backprop(*this);
    if (node.param != nullptr) add_into(node.param->grad, node.grad);
  }
}

}  // namespace kgpath
