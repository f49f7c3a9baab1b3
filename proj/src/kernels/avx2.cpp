// Compiled with -mavx2 only. No FMA: every product and sum rounds exactly
// like the scalar loop.
#include "kernels_impl.hpp"

#include <immintrin.h>

namespace skewlab::kernels::avx2 {
namespace {

inline __m256d wrap4(__m256d v) {
  const __m256d r = _mm256_sub_pd(v, _mm256_floor_pd(v));
  const __m256d ge = _mm256_cmp_pd(r, _mm256_set1_pd(1.0), _CMP_GE_OQ);
  return _mm256_andnot_pd(ge, r);
}

inline __m256d gap4(__m256d a, __m256d b) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d d = _mm256_andnot_pd(sign, _mm256_sub_pd(a, b));
  const __m256d e = _mm256_sub_pd(_mm256_set1_pd(1.0), d);
  // (e < d) ? e : d, same as std::min(d, e)
  return _mm256_min_pd(e, d);
}

inline __m128i cell4(__m256d v, __m256d dm, __m256d top) {
  const __m256d c = _mm256_floor_pd(_mm256_mul_pd(v, dm));
  return _mm256_cvttpd_epi32(_mm256_min_pd(top, c));
}

}  // namespace

void step_linear(const LinearStep& s, double* bx, double* by, double* fx, double* fy,
                 std::size_t n) {
  const __m256d m0 = _mm256_set1_pd(s.base[0]), m1 = _mm256_set1_pd(s.base[1]);
  const __m256d m2 = _mm256_set1_pd(s.base[2]), m3 = _mm256_set1_pd(s.base[3]);
  const __m256d a0 = _mm256_set1_pd(s.fiber[0]), a1 = _mm256_set1_pd(s.fiber[1]);
  const __m256d a2 = _mm256_set1_pd(s.fiber[2]), a3 = _mm256_set1_pd(s.fiber[3]);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(bx + i), y = _mm256_loadu_pd(by + i);
    _mm256_storeu_pd(bx + i, wrap4(_mm256_add_pd(_mm256_mul_pd(m0, x), _mm256_mul_pd(m1, y))));
    _mm256_storeu_pd(by + i, wrap4(_mm256_add_pd(_mm256_mul_pd(m2, x), _mm256_mul_pd(m3, y))));
    const __m256d u = _mm256_loadu_pd(fx + i), v = _mm256_loadu_pd(fy + i);
    _mm256_storeu_pd(fx + i, wrap4(_mm256_add_pd(_mm256_mul_pd(a0, u), _mm256_mul_pd(a1, v))));
    _mm256_storeu_pd(fy + i, wrap4(_mm256_add_pd(_mm256_mul_pd(a2, u), _mm256_mul_pd(a3, v))));
  }
  scalar::step_linear(s, bx + i, by + i, fx + i, fy + i, n - i);
}

void gate_mask(double cx, double cy, double radius2, const double* bx, const double* by,
               std::uint8_t* mask, std::size_t n) {
  const __m256d vcx = _mm256_set1_pd(cx), vcy = _mm256_set1_pd(cy);
  const __m256d r2 = _mm256_set1_pd(radius2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = gap4(_mm256_loadu_pd(bx + i), vcx);
    const __m256d dy = gap4(_mm256_loadu_pd(by + i), vcy);
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    const int bits = _mm256_movemask_pd(_mm256_cmp_pd(d2, r2, _CMP_LT_OQ));
    for (int k = 0; k < 4; ++k) mask[i + k] = std::uint8_t((bits >> k) & 1);
  }
  scalar::gate_mask(cx, cy, radius2, bx + i, by + i, mask + i, n - i);
}

void bin_index4(std::uint32_t m, const double* bx, const double* by, const double* fx,
                const double* fy, std::uint32_t* out, std::size_t n) {
  const __m256d dm = _mm256_set1_pd(double(m));
  const __m256d top = _mm256_set1_pd(double(m - 1));
  const __m128i vm = _mm_set1_epi32(int(m));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m128i idx = cell4(_mm256_loadu_pd(bx + i), dm, top);
    idx = _mm_add_epi32(_mm_mullo_epi32(idx, vm), cell4(_mm256_loadu_pd(by + i), dm, top));
    idx = _mm_add_epi32(_mm_mullo_epi32(idx, vm), cell4(_mm256_loadu_pd(fx + i), dm, top));
    idx = _mm_add_epi32(_mm_mullo_epi32(idx, vm), cell4(_mm256_loadu_pd(fy + i), dm, top));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out + i), idx);
  }
  scalar::bin_index4(m, bx + i, by + i, fx + i, fy + i, out + i, n - i);
}

}  // namespace skewlab::kernels::avx2
