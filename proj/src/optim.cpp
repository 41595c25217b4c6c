#include "kgpath/optim.hpp"

#include <cmath>

#include "kgpath/kernels.hpp"

namespace kgpath {

void AdamOptimizer::step(ParamStore& params) {
  ++t_;
  const double corr1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double corr2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (Parameter* p : params.all()) {
    auto [it, inserted] = moments_.try_emplace(p->name);
    if (inserted) {
      it->second.m = Tensor::zeros(p->value.shape());
      it->second.v = Tensor::zeros(p->value.shape());
    }
    kernels::active().adam_step(lr_, beta1_, beta2_, eps_, corr1, corr2,
                                p->grad.data(), it->second.m.data(),
                                it->second.v.data(), p->value.data(),
                                p->value.numel());
  }
}

}  // namespace kgpath
