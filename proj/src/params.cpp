#include "kgpath/params.hpp"

#include <cmath>

#include "kgpath/error.hpp"

namespace kgpath {

Parameter& ParamStore::create(const std::string& name, Tensor init) {
  if (params_.count(name) > 0) {
    throw Error(msg("parameter already exists: ", name));
  }
  auto p = std::make_unique<Parameter>(name, std::move(init));
  Parameter& ref = *p;
  params_.emplace(name, std::move(p));
  return ref;
}

Parameter& ParamStore::get(const std::string& name) {
  auto it = params_.find(name);
  if (it == params_.end()) throw NotFoundError(msg("no such parameter: ", name));
  return *it->second;
}

const Parameter& ParamStore::get(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw NotFoundError(msg("no such parameter: ", name));
  return *it->second;
}

std::vector<Parameter*> ParamStore::all() {
  std::vector<Parameter*> out;
  out.reserve(params_.size());
  for (auto& [_, p] : params_) out.push_back(p.get());
  return out;
}

std::vector<const Parameter*> ParamStore::all() const {
  std::vector<const Parameter*> out;
  out.reserve(params_.size());
  for (const auto& [_, p] : params_) out.push_back(p.get());
  return out;
}

void ParamStore::zero_grads() {
  for (auto& [_, p] : params_) p->grad.fill(0.0);
}

double ParamStore::grad_norm() const {
  double sq = 0.0;
  for (const auto& [_, p] : params_) sq += t_dot(p->grad, p->grad);
  return std::sqrt(sq);
}

void ParamStore::clip_grad_norm(double max_norm) {
  const double norm = grad_norm();
  if (norm <= max_norm || norm == 0.0) return;
  const double factor = max_norm / norm;
  for (auto& [_, p] : params_) {
    Tensor scaled = t_scale(p->grad, factor);
    p->grad = std::move(scaled);
  }
}

}  // namespace kgpath
