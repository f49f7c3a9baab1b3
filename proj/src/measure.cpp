#include "skewlab/measure.hpp"

#include "skewlab/errors.hpp"
#include "skewlab/kernels.hpp"
#include "skewlab/parallel.hpp"
#include "skewlab/rng.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <istream>
#include <mutex>
#include <numeric>
#include <ostream>

namespace skewlab {

std::uint64_t EmpiricalMeasure::cells() const noexcept {
  std::uint64_t c = 1;
  for (int k = 0; k < dims_; ++k) c *= m_;
  return c;
}

double EmpiricalMeasure::total_weight() const noexcept {
  double s = 0;
  for (const auto& e : w_) s += e.second;
  return s;
}

EmpiricalMeasure EmpiricalMeasure::from_counts(int dims, std::uint32_t m,
                                               const std::vector<std::uint64_t>& counts,
                                               MeasureMeta meta) {
  EmpiricalMeasure mu;
  mu.dims_ = dims;
  mu.m_ = m;
  mu.meta_ = meta;
  if (counts.size() != mu.cells()) throw InvalidArgument("count vector does not match m^dims");
  mu.total_ = std::accumulate(counts.begin(), counts.end(), std::uint64_t(0));
  if (mu.total_ == 0) throw InvalidArgument("empty histogram");
  const double tot = double(mu.total_);
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i]) mu.w_.emplace_back(std::uint32_t(i), double(counts[i]) / tot);
  return mu;
}

EmpiricalMeasure EmpiricalMeasure::from_weights(int dims, std::uint32_t m,
                                                std::vector<std::pair<std::uint32_t, double>> w,
                                                MeasureMeta meta) {
  EmpiricalMeasure mu;
  mu.dims_ = dims;
  mu.m_ = m;
  mu.meta_ = meta;
  std::sort(w.begin(), w.end());
  for (const auto& [i, x] : w) {
    if (!(x >= 0.0)) throw InvalidArgument("negative histogram weight");
    if (i >= mu.cells()) throw InvalidArgument("histogram index out of range");
    if (x == 0.0) continue;
    if (!mu.w_.empty() && mu.w_.back().first == i) mu.w_.back().second += x;
    else mu.w_.emplace_back(i, x);
  }
  return mu;
}

namespace {
EmpiricalMeasure marginal(const EmpiricalMeasure& mu, bool fiber) {
  if (mu.dims() == 2) return mu;
  const std::uint32_t m = mu.bins(), m2 = m * m;
  std::vector<std::pair<std::uint32_t, double>> acc(m2);
  for (std::uint32_t k = 0; k < m2; ++k) acc[k] = {k, 0.0};
  // entries are visited in index order, so each cell sums in a fixed order
  for (const auto& [i, x] : mu.entries()) acc[fiber ? i % m2 : i / m2].second += x;
  return EmpiricalMeasure::from_weights(2, m, std::move(acc), mu.meta());
}
}  // namespace

EmpiricalMeasure EmpiricalMeasure::fiber_marginal() const { return marginal(*this, true); }
EmpiricalMeasure EmpiricalMeasure::base_marginal() const { return marginal(*this, false); }

double measure_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
  if (mu.dims() != nu.dims() || mu.bins() != nu.bins())
    throw ResolutionMismatch("measures have different bin resolutions (" +
                             std::to_string(mu.bins()) + "^" + std::to_string(mu.dims()) +
                             " vs " + std::to_string(nu.bins()) + "^" +
                             std::to_string(nu.dims()) + ")");
  const auto& a = mu.entries();
  const auto& b = nu.entries();
  double s = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      s += a[i++].second;
    } else if (i == a.size() || b[j].first < a[i].first) {
      s += b[j++].second;
    } else {
      s += std::abs(a[i++].second - b[j++].second);
    }
  }
  return std::min(1.0, 0.5 * s);
}

std::vector<double> leaf_parameters(std::uint64_t samples, double length, std::uint64_t seed,
                                    std::uint64_t stream) {
  const CounterRng rng(seed, stream);
  std::vector<double> t(samples);
  for (std::uint64_t s = 0; s < samples; ++s) t[s] = (rng.uniform(s) - 0.5) * length;
  return t;
}

namespace {

constexpr std::size_t kOrbitGrain = 512;

// Leaf points for all samples, with the number of uncertified holonomies.
std::pair<kernels::PointBatch, std::uint64_t> leaf_batch(const SkewProductSystem& f,
                                                         const TorusPoint4& p,
                                                         const std::vector<double>& t,
                                                         const HolonomyOptions& hopt,
                                                         unsigned workers) {
  kernels::PointBatch batch(t.size());
  std::vector<std::uint64_t> bad(chunk_count(t.size(), 256), 0);
  parallel_chunks(t.size(), 256, workers, [&](std::size_t lo, std::size_t hi, std::size_t c) {
    const std::vector<double> part(t.begin() + lo, t.begin() + hi);
    const auto leaf = sample_uu_leaf(f, p, part, hopt);
    for (std::size_t k = 0; k < leaf.size(); ++k) {
      batch.bx[lo + k] = leaf[k].point.base.x();
      batch.by[lo + k] = leaf[k].point.base.y();
      batch.fx[lo + k] = leaf[k].point.fiber.x();
      batch.fy[lo + k] = leaf[k].point.fiber.y();
      if (!leaf[k].certified) ++bad[c];
    }
  });
  return {std::move(batch), std::accumulate(bad.begin(), bad.end(), std::uint64_t(0))};
}

void check_certified(std::uint64_t bad, std::uint64_t samples, double limit) {
  if (double(bad) > limit * double(samples))
    throw NonConvergence(std::to_string(bad) + " of " + std::to_string(samples) +
                             " leaf samples have uncertified holonomy",
                         double(bad) / double(samples));
}

}  // namespace

std::vector<EmpiricalMeasure> birkhoff_schedule(const SkewProductSystem& f, const TorusPoint4& p,
                                                const std::vector<std::uint64_t>& schedule,
                                                const BirkhoffOptions& opt) {
  if (schedule.empty() || schedule.front() == 0)
    throw InvalidArgument("schedule must be a nonempty list of positive step counts");
  for (std::size_t k = 1; k < schedule.size(); ++k)
    if (schedule[k] <= schedule[k - 1]) throw InvalidArgument("schedule must be increasing");
  if (opt.bins < 1 || opt.bins > 32) throw InvalidArgument("bins must lie in [1, 32]");
  if (opt.samples == 0) throw InvalidArgument("samples must be positive");
  if (!(opt.leaf_length > 0.0)) throw InvalidArgument("leaf length must be positive");

  const auto t = leaf_parameters(opt.samples, opt.leaf_length, opt.seed, opt.stream);
  auto [start, bad] = leaf_batch(f, p, t, opt.holonomy, opt.workers);
  check_certified(bad, opt.samples, opt.max_uncertified);

  const std::uint32_t m = opt.bins;
  const std::size_t cells = std::size_t(m) * m * m * m;
  const std::uint64_t last = schedule.back();
  std::vector<std::vector<std::uint64_t>> totals(schedule.size(),
                                                 std::vector<std::uint64_t>(cells, 0));
  std::mutex merge;
  const auto& table = kernels::active();
  parallel_chunks(opt.samples, kOrbitGrain, opt.workers,
                  [&](std::size_t lo, std::size_t hi, std::size_t) {
    const std::size_t n = hi - lo;
    kernels::PointBatch b(n);
    std::copy_n(start.bx.begin() + lo, n, b.bx.begin());
    std::copy_n(start.by.begin() + lo, n, b.by.begin());
    std::copy_n(start.fx.begin() + lo, n, b.fx.begin());
    std::copy_n(start.fy.begin() + lo, n, b.fy.begin());
    std::vector<std::uint64_t> counts(cells, 0);
    std::vector<std::uint32_t> idx(n);
    for (std::uint64_t step = 0; step < opt.start_step; ++step) f.apply_batch(b, 0, n, table);
    std::size_t next = 0;
    for (std::uint64_t j = 1; j <= last; ++j) {
      table.bin_index4(m, b.bx.data(), b.by.data(), b.fx.data(), b.fy.data(), idx.data(), n);
      for (std::uint32_t i : idx) ++counts[i];
      if (j == schedule[next]) {
        // integer sums: merge order does not affect the result
        std::lock_guard<std::mutex> lock(merge);
        auto& dst = totals[next];
        for (std::size_t c = 0; c < cells; ++c) dst[c] += counts[c];
        ++next;
      }
      if (j < last) f.apply_batch(b, 0, n, table);
    }
  });

  std::vector<EmpiricalMeasure> out;
  for (std::size_t s = 0; s < schedule.size(); ++s) {
    MeasureMeta meta{f.hash(), opt.seed, opt.samples, schedule[s], opt.start_step};
    out.push_back(EmpiricalMeasure::from_counts(4, m, totals[s], meta));
  }
  return out;
}

EmpiricalMeasure birkhoff_pushforward(const SkewProductSystem& f, const TorusPoint4& p,
                                      std::uint64_t n, const BirkhoffOptions& opt) {
  return birkhoff_schedule(f, p, {n}, opt).front();
}

std::string_view verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::single_candidate: return "single-candidate";
    case Verdict::multiple_candidates: return "multiple-candidates";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

Verdict classify(const std::vector<std::vector<std::vector<double>>>& d, double threshold_multi,
                 double threshold_single) {
  if (d.empty()) return Verdict::inconclusive;
  const auto& fin = d.back();
  const std::size_t k = fin.size();
  bool all_small = true, nonincreasing = true;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      if (fin[i][j] > threshold_multi) return Verdict::multiple_candidates;
      if (!(fin[i][j] < threshold_single)) all_small = false;
      for (std::size_t s = 1; s < d.size(); ++s)
        if (d[s][i][j] > d[s - 1][i][j]) nonincreasing = false;
    }
  return all_small && nonincreasing ? Verdict::single_candidate : Verdict::inconclusive;
}

UniquenessReport uniqueness_probe(const SkewProductSystem& f, const std::vector<TorusPoint4>& seeds,
                                  const UniquenessOptions& opt) {
  if (seeds.size() < 2) throw InvalidArgument("uniqueness probe needs at least two seed points");
  if (!opt.bins.empty() && opt.bins.size() != seeds.size())
    throw InvalidArgument("per-seed bins must list one value per seed point");
  UniquenessReport rep;
  rep.seeds = seeds;
  rep.schedule = opt.schedule;
  std::vector<std::vector<EmpiricalMeasure>> marg(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    BirkhoffOptions b;
    b.samples = opt.samples;
    b.leaf_length = opt.leaf_length;
    b.seed = opt.seed;
    b.stream = i;
    b.bins = opt.bins.empty() ? 16 : opt.bins[i];
    b.holonomy = opt.holonomy;
    b.workers = opt.workers;
    rep.measures.push_back(birkhoff_schedule(f, seeds[i], opt.schedule, b));
    for (const auto& mu : rep.measures.back()) marg[i].push_back(mu.fiber_marginal());
  }
  const std::size_t k = seeds.size();
  for (std::size_t s = 0; s < opt.schedule.size(); ++s) {
    std::vector<std::vector<double>> d(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        d[i][j] = d[j][i] = measure_distance(marg[i][s], marg[j][s]);
    rep.distances.push_back(std::move(d));
  }
  // connected components of "TV <= threshold_multi" at the final point
  rep.cluster_of.assign(k, -1);
  rep.clusters = 0;
  const auto& fin = rep.distances.back();
  for (std::size_t i = 0; i < k; ++i) {
    if (rep.cluster_of[i] >= 0) continue;
    std::vector<std::size_t> todo{i};
    rep.cluster_of[i] = rep.clusters;
    while (!todo.empty()) {
      const std::size_t a = todo.back();
      todo.pop_back();
      for (std::size_t b = 0; b < k; ++b)
        if (rep.cluster_of[b] < 0 && fin[a][b] <= opt.threshold_multi) {
          rep.cluster_of[b] = rep.clusters;
          todo.push_back(b);
        }
    }
    ++rep.clusters;
  }
  rep.verdict = classify(rep.distances, opt.threshold_multi, opt.threshold_single);
  return rep;
}

DensityReport density_probe(const SkewProductSystem& f, const TorusPoint4& p,
                            const DensityOptions& opt) {
  if (!(opt.epsilon > 0.0 && opt.epsilon < 0.5))
    throw InvalidArgument("epsilon must lie in (0, 0.5)");
  if (opt.m_max < 0) throw InvalidArgument("m_max must be nonnegative");
  if (opt.samples == 0) throw InvalidArgument("samples must be positive");
  const double kd = std::ceil(2.0 / opt.epsilon);
  if (kd > 255) throw InvalidArgument("epsilon too small for the cell grid");
  const std::uint32_t k = std::uint32_t(kd);
  const std::size_t cells = std::size_t(k) * k * k * k;
  constexpr std::uint16_t never = 0xffff;

  const auto t = leaf_parameters(opt.samples, opt.leaf_length, opt.seed, 0xde5u);
  auto [start, bad] = leaf_batch(f, p, t, opt.holonomy, opt.workers);
  check_certified(bad, opt.samples, 0.01);

  std::vector<std::uint16_t> first(cells, never);
  std::mutex merge;
  const auto& table = kernels::active();
  parallel_chunks(opt.samples, kOrbitGrain, opt.workers,
                  [&](std::size_t lo, std::size_t hi, std::size_t) {
    const std::size_t n = hi - lo;
    kernels::PointBatch b(n);
    std::copy_n(start.bx.begin() + lo, n, b.bx.begin());
    std::copy_n(start.by.begin() + lo, n, b.by.begin());
    std::copy_n(start.fx.begin() + lo, n, b.fx.begin());
    std::copy_n(start.fy.begin() + lo, n, b.fy.begin());
    std::vector<std::uint16_t> local(cells, never);
    std::vector<std::uint32_t> idx(n);
    for (int j = 0; j <= opt.m_max; ++j) {
      table.bin_index4(k, b.bx.data(), b.by.data(), b.fx.data(), b.fy.data(), idx.data(), n);
      for (std::uint32_t i : idx) local[i] = std::min<std::uint16_t>(local[i], std::uint16_t(j));
      if (j < opt.m_max) f.apply_batch(b, 0, n, table);
    }
    std::lock_guard<std::mutex> lock(merge);
    for (std::size_t c = 0; c < cells; ++c) first[c] = std::min(first[c], local[c]);
  });

  DensityReport rep;
  rep.epsilon = opt.epsilon;
  rep.cells_per_factor = k;
  std::vector<std::uint64_t> hist(std::size_t(opt.m_max) + 1, 0);
  for (std::uint16_t v : first)
    if (v != never) ++hist[v];
  std::uint64_t covered = 0;
  for (int j = 0; j <= opt.m_max; ++j) {
    covered += hist[std::size_t(j)];
    rep.coverage.push_back(double(covered) / double(cells));
    if (covered == cells && rep.first_full < 0) rep.first_full = j;
  }
  return rep;
}

SuTorusResult su_torus_detect(const EmpiricalMeasure& mu, double atom_threshold) {
  const EmpiricalMeasure fm = mu.fiber_marginal();
  auto e = fm.entries();
  std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  SuTorusResult r;
  const std::uint32_t m = fm.bins();
  for (std::size_t k = 0; k < std::min<std::size_t>(4, e.size()); ++k) {
    r.atoms.push_back({e[k].first / m, e[k].first % m, e[k].second});
    r.mass += e[k].second;
    if (r.mass >= atom_threshold) {
      r.detected = true;
      break;
    }
  }
  return r;
}

std::vector<std::vector<TorusPoint2>> periodic_fiber_orbits(const IntMatrix2& a, int denominator) {
  if (denominator < 1) throw InvalidArgument("denominator must be positive");
  const std::int64_t n = denominator;
  auto mod = [n](std::int64_t v) { return ((v % n) + n) % n; };
  std::vector<char> seen(std::size_t(n * n), 0);
  std::vector<std::vector<TorusPoint2>> orbits;
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j < n; ++j) {
      if (seen[std::size_t(i * n + j)]) continue;
      std::vector<TorusPoint2> orbit;
      std::int64_t x = i, y = j;
      while (!seen[std::size_t(x * n + y)]) {
        seen[std::size_t(x * n + y)] = 1;
        orbit.push_back(TorusPoint2::reduced(double(x) / double(n), double(y) / double(n)));
        const std::int64_t nx = mod(a.a() * x + a.b() * y), ny = mod(a.c() * x + a.d() * y);
        x = nx;
        y = ny;
      }
      orbits.push_back(std::move(orbit));
    }
  return orbits;
}

namespace {
std::string shortest(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class T>
void put_le(std::ostream& os, T v) {
  static_assert(std::endian::native == std::endian::little, "little-endian host expected");
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <class T>
bool get_le(std::istream& is, T& v) {
  return bool(is.read(reinterpret_cast<char*>(&v), sizeof v));
}
}  // namespace

void write_histogram_csv(std::ostream& os, const EmpiricalMeasure& mu) {
  const std::uint32_t m = mu.bins();
  if (mu.dims() == 4) {
    os << "index,bx,by,fx,fy,weight\r\n";
    for (const auto& [i, w] : mu.entries())
      os << i << ',' << i / (m * m * m) << ',' << (i / (m * m)) % m << ',' << (i / m) % m << ','
         << i % m << ',' << shortest(w) << "\r\n";
  } else {
    os << "index,i,j,weight\r\n";
    for (const auto& [i, w] : mu.entries())
      os << i << ',' << i / m << ',' << i % m << ',' << shortest(w) << "\r\n";
  }
}

void write_ugh1(std::ostream& os, const EmpiricalMeasure& mu) {
  os.write("UGH1", 4);
  put_le<std::uint32_t>(os, mu.bins());
  for (const auto& [i, w] : mu.entries()) {
    put_le<std::uint32_t>(os, i);
    put_le<double>(os, w);
  }
}

EmpiricalMeasure read_ugh1(std::istream& is, int dims) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "UGH1", 4) != 0)
    throw InvalidArgument("not a UGH1 histogram");
  std::uint32_t m = 0;
  if (!get_le(is, m) || m == 0) throw InvalidArgument("truncated UGH1 header");
  std::vector<std::pair<std::uint32_t, double>> w;
  std::uint32_t i;
  double x;
  while (get_le(is, i)) {
    if (!get_le(is, x)) throw InvalidArgument("truncated UGH1 record");
    w.emplace_back(i, x);
  }
  return EmpiricalMeasure::from_weights(dims, m, std::move(w));
}

}  // namespace skewlab
