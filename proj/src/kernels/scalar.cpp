#include "kernels_impl.hpp"

#include <cmath>

namespace skewlab::kernels::scalar {

void step_linear(const LinearStep& s, double* bx, double* by, double* fx, double* fy,
                 std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double x = bx[i], y = by[i];
    bx[i] = wrap1(s.base[0] * x + s.base[1] * y);
    by[i] = wrap1(s.base[2] * x + s.base[3] * y);
    const double u = fx[i], v = fy[i];
    fx[i] = wrap1(s.fiber[0] * u + s.fiber[1] * v);
    fy[i] = wrap1(s.fiber[2] * u + s.fiber[3] * v);
  }
}

void gate_mask(double cx, double cy, double radius2, const double* bx, const double* by,
               std::uint8_t* mask, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = gap1(bx[i], cx);
    const double dy = gap1(by[i], cy);
    mask[i] = (dx * dx + dy * dy) < radius2 ? 1 : 0;
  }
}

void bin_index4(std::uint32_t m, const double* bx, const double* by, const double* fx,
                const double* fy, std::uint32_t* out, std::size_t n) {
  const double dm = double(m);
  const double top = double(m - 1);
  auto cell = [&](double v) { return std::uint32_t(std::min(std::floor(v * dm), top)); };
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = ((cell(bx[i]) * m + cell(by[i])) * m + cell(fx[i])) * m + cell(fy[i]);
  }
}

}  // namespace skewlab::kernels::scalar
