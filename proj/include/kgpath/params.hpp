#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "kgpath/tensor.hpp"

namespace kgpath {

// Named trainable tensor; grad has the same shape and accumulates across
// backward passes until zeroed.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  Parameter(std::string n, Tensor v)
      : name(std::move(n)), value(std::move(v)), grad(Tensor::zeros(value.shape())) {}
};

// Owns all parameters of a model. Iteration order is name order, which keeps
// checkpoint bytes and update order deterministic.
class ParamStore {
 public:
  Parameter& create(const std::string& name, Tensor init);
  Parameter& get(const std::string& name);
  const Parameter& get(const std::string& name) const;
  bool has(const std::string& name) const { return params_.count(name) > 0; }

  std::vector<Parameter*> all();
  std::vector<const Parameter*> all() const;
  std::size_t count() const { return params_.size(); }

  void zero_grads();
  double grad_norm() const;
  // Scales all grads so the global norm is at most max_norm.
  void clip_grad_norm(double max_norm);

 private:
  std::map<std::string, std::unique_ptr<Parameter>> params_;
};

}  // namespace kgpath
