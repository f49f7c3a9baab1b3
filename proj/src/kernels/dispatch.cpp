#include "kernels_impl.hpp"

#include <cstdlib>
#include <string_view>

namespace skewlab::kernels {

std::string_view isa_name(Isa isa) noexcept {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

const KernelTable& scalar_table() noexcept {
  static const KernelTable t{Isa::scalar, &scalar::step_linear, &scalar::gate_mask,
                             &scalar::bin_index4};
  return t;
}

const KernelTable* avx2_table() noexcept {
#if SKEWLAB_HAVE_AVX2
  static const KernelTable t{Isa::avx2, &avx2::step_linear, &avx2::gate_mask, &avx2::bin_index4};
  return &t;
#else
  return nullptr;
#endif
}

Isa detect_isa() noexcept {
#if SKEWLAB_HAVE_AVX2 && (defined(__x86_64__) || defined(__i386__))
  if (__builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
  return Isa::scalar;
}

const KernelTable& active() noexcept {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    Isa isa = detect_isa();
    if (const char* env = std::getenv("SKEWLAB_SIMD")) {
      const std::string_view want(env);
      if (want == "scalar") isa = Isa::scalar;
      else if (want == "avx2" && detect_isa() == Isa::avx2) isa = Isa::avx2;
    }
    return isa == Isa::avx2 ? *avx2_table() : scalar_table();
  }();
  return chosen;
}

}  // namespace skewlab::kernels
