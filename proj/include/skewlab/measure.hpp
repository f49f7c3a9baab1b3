#pragma once

// Empirical measures from Birkhoff averages of leaf Lebesgue, their
// comparison, and the uniqueness / density / su-torus probes.

#include "skewlab/holonomy.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace skewlab {

struct MeasureMeta {
  std::uint64_t system_hash = 0;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  std::uint64_t steps = 0;
  std::uint64_t start_step = 0;
};

/// Sparse histogram on m^dims cells of T^dims (dims 4, or 2 for a fiber or
/// base marginal). 4D index ((ibx*m + iby)*m + ifx)*m + ify; 2D index i*m + j.
class EmpiricalMeasure {
 public:
  EmpiricalMeasure() = default;
  /// Normalizes integer counts (dense, size m^dims).
  static EmpiricalMeasure from_counts(int dims, std::uint32_t m,
                                      const std::vector<std::uint64_t>& counts,
                                      MeasureMeta meta = {});
  /// Takes (index, weight) pairs as given; weights must be >= 0.
  static EmpiricalMeasure from_weights(int dims, std::uint32_t m,
                                       std::vector<std::pair<std::uint32_t, double>> weights,
                                       MeasureMeta meta = {});

  int dims() const noexcept { return dims_; }
  std::uint32_t bins() const noexcept { return m_; }
  std::uint64_t cells() const noexcept;
  const std::vector<std::pair<std::uint32_t, double>>& entries() const noexcept { return w_; }
  std::uint64_t total_count() const noexcept { return total_; }
  double total_weight() const noexcept;
  const MeasureMeta& meta() const noexcept { return meta_; }

  /// Marginal on the fiber (or base) T^2; identity on 2D measures.
  EmpiricalMeasure fiber_marginal() const;
  EmpiricalMeasure base_marginal() const;

 private:
  int dims_ = 4;
  std::uint32_t m_ = 16;
  std::vector<std::pair<std::uint32_t, double>> w_;  // sorted by index, weights > 0
  std::uint64_t total_ = 0;
  MeasureMeta meta_;
};

/// Total variation (1/2) sum |mu_b - nu_b|. Throws ResolutionMismatch.
double measure_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);

struct BirkhoffOptions {
  std::uint64_t samples = 10000;
  double leaf_length = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;  // distinguishes seed points sharing one seed
  std::uint32_t bins = 16;
  std::uint64_t start_step = 0;  // 1 gives the pushforward f_* mu_n
  HolonomyOptions holonomy{};
  unsigned workers = 0;
  double max_uncertified = 0.01;
};

/// mu_n for every n in the increasing schedule, from one pass over the orbits.
std::vector<EmpiricalMeasure> birkhoff_schedule(const SkewProductSystem& f, const TorusPoint4& p,
                                                const std::vector<std::uint64_t>& schedule,
                                                const BirkhoffOptions& opt = {});
EmpiricalMeasure birkhoff_pushforward(const SkewProductSystem& f, const TorusPoint4& p,
                                      std::uint64_t n, const BirkhoffOptions& opt = {});

/// Leaf parameters t_s = (u_s - 1/2) L.
std::vector<double> leaf_parameters(std::uint64_t samples, double length, std::uint64_t seed,
                                    std::uint64_t stream);

enum class Verdict { single_candidate, multiple_candidates, inconclusive };
std::string_view verdict_name(Verdict v) noexcept;

struct UniquenessOptions {
  std::vector<std::uint64_t> schedule{250, 500, 1000, 2000};
  std::uint64_t samples = 10000;
  double threshold_multi = 0.1;
  double threshold_single = 0.05;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> bins;  // per seed point; empty means all 16
  double leaf_length = 1.0;
  HolonomyOptions holonomy{};
  unsigned workers = 0;
};

struct UniquenessReport {
  std::vector<TorusPoint4> seeds;
  std::vector<std::uint64_t> schedule;
  /// distances[s][i][j]: fiber-marginal TV at schedule point s
  std::vector<std::vector<std::vector<double>>> distances;
  int clusters = 1;
  std::vector<int> cluster_of;
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::vector<EmpiricalMeasure>> measures;  // [seed][schedule]
};

UniquenessReport uniqueness_probe(const SkewProductSystem& f, const std::vector<TorusPoint4>& seeds,
                                  const UniquenessOptions& opt = {});

/// Verdict from the distance history alone.
Verdict classify(const std::vector<std::vector<std::vector<double>>>& distances,
                 double threshold_multi, double threshold_single);

struct DensityOptions {
  double epsilon = 0.2;
  int m_max = 60;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  double leaf_length = 1.0;
  HolonomyOptions holonomy{};
  unsigned workers = 0;
};

struct DensityReport {
  double epsilon = 0;
  std::uint32_t cells_per_factor = 0;
  std::vector<double> coverage;  // j = 0..m_max, cumulative
  int first_full = -1;           // -1 when never reached
};

/// Cells of side 1/ceil(2/eps) per factor (diameter <= eps), marked by the
/// forward iterates of W^uu_{L/2}(p).
DensityReport density_probe(const SkewProductSystem& f, const TorusPoint4& p,
                            const DensityOptions& opt = {});

struct Atom {
  std::uint32_t i, j;  // fiber bin
  double weight;
};
struct SuTorusResult {
  bool detected = false;
  std::vector<Atom> atoms;
  double mass = 0;  // mass of the returned atoms
};

/// Concentration of the fiber marginal on at most four bins.
SuTorusResult su_torus_detect(const EmpiricalMeasure& mu, double atom_threshold = 0.9);

/// Orbits of A on the points (i/N, j/N), each listed from its smallest
/// (i, j); exact in integers.
std::vector<std::vector<TorusPoint2>> periodic_fiber_orbits(const IntMatrix2& a, int denominator);

void write_histogram_csv(std::ostream& os, const EmpiricalMeasure& mu);
/// "UGH1", uint32 m, then (uint32 index, float64 weight) pairs, little-endian.
void write_ugh1(std::ostream& os, const EmpiricalMeasure& mu);
EmpiricalMeasure read_ugh1(std::istream& is, int dims = 4);

}  // namespace skewlab
