#pragma once

#include "skewlab/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace skewlab::kernels {

// Must stay in lockstep with wrap_unit() in torus.hpp.
inline double wrap1(double v) noexcept {
  const double r = v - std::floor(v);
  return r >= 1.0 ? 0.0 : r;
}

inline double gap1(double a, double b) noexcept {
  const double d = std::abs(a - b);
  return std::min(d, 1.0 - d);
}

namespace scalar {
void step_linear(const LinearStep& s, double* bx, double* by, double* fx, double* fy,
                 std::size_t n);
void gate_mask(double cx, double cy, double radius2, const double* bx, const double* by,
               std::uint8_t* mask, std::size_t n);
void bin_index4(std::uint32_t m, const double* bx, const double* by, const double* fx,
                const double* fy, std::uint32_t* out, std::size_t n);
}  // namespace scalar

#if SKEWLAB_HAVE_AVX2
namespace avx2 {
void step_linear(const LinearStep& s, double* bx, double* by, double* fx, double* fy,
                 std::size_t n);
void gate_mask(double cx, double cy, double radius2, const double* bx, const double* by,
               std::uint8_t* mask, std::size_t n);
void bin_index4(std::uint32_t m, const double* bx, const double* by, const double* fx,
                const double* fy, std::uint32_t* out, std::size_t n);
}  // namespace avx2
#endif

}  // namespace skewlab::kernels
