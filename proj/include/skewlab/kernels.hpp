#pragma once

// Batch kernels for the data-parallel hot loops: stepping structure-of-arrays
// point batches under a linear product map, base-gate masks and 4D histogram
// binning. Each kernel has a scalar reference and (on x86-64) an AVX2 variant
// that is bit-identical to it; the variant is chosen once at runtime.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace skewlab::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// Linear product step: base <- M b, fiber <- A f, both wrapped into [0, 1).
/// Entries are the integer matrix entries converted to double.
struct LinearStep {
  double base[4];
  double fiber[4];
};

struct KernelTable {
  Isa isa;
  void (*step_linear)(const LinearStep& step, double* bx, double* by, double* fx, double* fy,
                      std::size_t n);
  /// mask[i] = 1 when the torus distance of (bx[i], by[i]) to (cx, cy) is
  /// strictly below sqrt(radius2), else 0.
  void (*gate_mask)(double cx, double cy, double radius2, const double* bx, const double* by,
                    std::uint8_t* mask, std::size_t n);
  /// Flattened cell index ((i_bx*m + i_by)*m + i_fx)*m + i_fy for m bins per
  /// circle factor; 1 <= m <= 255 so indices fit in 32 bits.
  void (*bin_index4)(std::uint32_t m, const double* bx, const double* by, const double* fx,
                     const double* fy, std::uint32_t* out, std::size_t n);
};

const KernelTable& scalar_table() noexcept;
/// nullptr when the variant was not compiled in.
const KernelTable* avx2_table() noexcept;

/// Best ISA supported by this CPU and binary.
Isa detect_isa() noexcept;

/// Table in use: detect_isa(), unless SKEWLAB_SIMD=scalar|avx2 overrides it
/// (an unsupported request falls back to scalar).
const KernelTable& active() noexcept;

/// Structure-of-arrays batch of points in T^4.
struct PointBatch {
  std::vector<double> bx, by, fx, fy;

  explicit PointBatch(std::size_t n = 0) : bx(n), by(n), fx(n), fy(n) {}
  std::size_t size() const noexcept { return bx.size(); }
  void resize(std::size_t n) {
    bx.resize(n);
    by.resize(n);
    fx.resize(n);
    fy.resize(n);
  }
};

}  // namespace skewlab::kernels
