#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "kgpath/params.hpp"

namespace kgpath {

// Adam with bias correction. Moment buffers are keyed by parameter name and
// created lazily on the first step.
class AdamOptimizer {
 public:
  explicit AdamOptimizer(double lr = 1e-3, double beta1 = 0.9,
                         double beta2 = 0.999, double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(ParamStore& params);
  std::int64_t steps() const { return t_; }

 private:
  struct Moments {
    Tensor m;
    Tensor v;
  };

  double lr_, beta1_, beta2_, eps_;
  std::int64_t t_ = 0;
  std::map<std::string, Moments> moments_;
};

}  // namespace kgpath
