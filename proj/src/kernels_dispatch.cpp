#include <cstdlib>
#include <cstring>

#include "kgpath/error.hpp"
#include "kgpath/kernels.hpp"

namespace kgpath::kernels {

#if defined(__x86_64__)
bool avx2_supported() { return __builtin_cpu_supports("avx2"); }
#endif

namespace {

const Ops& select() {
  const char* forced = std::getenv("KGPATH_KERNELS");
  if (forced != nullptr && *forced != '\0') {
    if (std::strcmp(forced, "scalar") == 0) return scalar_ops();
#if defined(__x86_64__)
    if (std::strcmp(forced, "avx2") == 0) {
      if (!avx2_supported())
        throw ConfigError("KGPATH_KERNELS=avx2 but CPU lacks AVX2");
      return avx2_ops();
    }
#endif
    throw ConfigError(msg("unknown KGPATH_KERNELS value: ", forced));
  }
#if defined(__x86_64__)
  if (avx2_supported()) return avx2_ops();
#endif
  return scalar_ops();
}

}  // namespace

const Ops& active() {
  static const Ops& ops = select();
  return ops;
}

}  // namespace kgpath::kernels
