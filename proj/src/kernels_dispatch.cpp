#include <cstdlib>
#include <string_view>

#include "efista/kernels.hpp"

namespace efista::kernels {

#if defined(EFISTA_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

const KernelTable* avx2() {
#if defined(EFISTA_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select() {
  const char* forced = std::getenv("EFISTA_KERNELS");
  if (forced != nullptr && std::string_view(forced) == "scalar") return scalar();
  if (const KernelTable* t = avx2()) return *t;
  return scalar();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace efista::kernels
