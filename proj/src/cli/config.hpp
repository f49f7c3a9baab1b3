#pragma once

#include "skewlab/errors.hpp"
#include "skewlab/measure.hpp"
#include "skewlab/rigidity.hpp"
#include "skewlab/splitting.hpp"
#include "skewlab/transversality.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace skewlab::cli {

using Json = nlohmann::ordered_json;

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct RotationSpec {
  std::array<double, 2> center{};
  double rho = 0.0;
  double theta = 0.0;
};

struct PerturbationSpec {
  std::array<double, 2> gate_center{};
  double gate_radius = 0.0;
  std::vector<RotationSpec> rotations;
};

struct SearchSpec {
  int grid = 4;
  double rho = 0.2;
  double theta_max = 0.3;
  std::uint64_t budget = 10000;
  std::optional<std::uint64_t> seed;  // falls back to the run seed
  int field_resolution = 64;
  double angle_tol = 1e-3;
  int refine_levels = 4;
};

struct RigiditySpec {
  std::array<double, 2> p_u{0.0, 0.0};
  std::optional<std::array<double, 3>> t;  // found by scanning when absent
  double gate_radius = 0.02;
  int orbit_depth = 8;
  double holonomy_tol = 1e-9;
  std::optional<std::array<std::vector<RotationSpec>, 3>> h;  // else searched
  SearchSpec search;
};

struct SystemSpec {
  std::array<std::int64_t, 4> base{89, 55, 55, 34};
  std::array<std::int64_t, 4> fiber{2, 1, 1, 1};
  bool check_domination = true;
  std::vector<PerturbationSpec> perturbations;
  std::optional<RigiditySpec> rigidity_breaking;
};

struct VerifySpec {
  std::vector<int> grids{8};
  bool random_offset = false;
  int max_iter = 200;
  double tol = 1e-10;
};

struct TripleSpec {
  std::array<double, 2> p{}, q{}, x{};
};

struct HolonomySpec {
  std::uint64_t triples = 100;
  double leaf_span = 1.0;  // |t| <= leaf_span / 2 for random triples
  double tol = 1e-9;
  int max_depth = 60;
  int min_depth = 3;
  std::vector<TripleSpec> rows;  // explicit triples evaluated after the random ones
};

struct TransversalitySpec {
  int grid = 64;
  int field_resolution = 32;
  double angle_tol = 1e-3;
  bool search = false;
  int profile_steps = 20;
  double profile_half_width = 0.05;
  // used when the system has no rigidity-breaking section
  std::array<double, 2> p_u{0.0, 0.0};
  std::optional<std::array<double, 3>> t;
  SearchSpec search_options;
};

struct UgibbsSpec {
  std::vector<std::array<double, 4>> seeds{{0.1234, 0.5678, 0.0, 0.0},
                                           {0.1234, 0.5678, 0.3217, 0.5893}};
  std::vector<std::uint64_t> schedule{250, 500, 1000, 2000};
  std::uint64_t samples = 10000;
  double leaf_length = 1.0;
  double threshold_multi = 0.1;
  double threshold_single = 0.05;
  std::vector<std::uint32_t> bins;  // per seed; empty means 16 each
  bool histograms = true;
  HolonomyOptions holonomy{};
};

struct DensitySpec {
  double epsilon = 0.2;
  int m_max = 60;
  std::uint64_t samples = 100000;
  std::array<double, 4> seed_point{0.1234, 0.5678, 0.3217, 0.5893};
  double leaf_length = 1.0;
  HolonomyOptions holonomy{};
};

struct Config {
  std::string path;
  SystemSpec system;
  std::uint64_t seed = 0;
  VerifySpec verify;
  HolonomySpec holonomy;
  TransversalitySpec transversality;
  UgibbsSpec ugibbs;
  DensitySpec density;
};

/// Parses a YAML config; throws ConfigError naming the line and key.
Config load_config(const std::string& path);
Config parse_config(const std::string& text, const std::string& origin);

/// Every parameter, defaults included.
Json effective_config(const Config& c);

RotationChain make_chain(const std::vector<RotationSpec>& specs);
std::vector<RotationSpec> chain_specs(const RotationChain& chain);

}  // namespace skewlab::cli
