#include "skewlab/cli.hpp"

#include "commands.hpp"
#include "skewlab/kernels.hpp"
#include "skewlab/parallel.hpp"

#include <CLI11.hpp>

#include <ctime>
#include <iostream>
#include <optional>

#ifndef SKEWLAB_VERSION
#define SKEWLAB_VERSION "unknown"
#endif

namespace skewlab::cli {
namespace {

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int classify(const std::exception& e) {
  if (dynamic_cast<const NonConvergence*>(&e)) return kNonConvergence;
  if (dynamic_cast<const DominationViolated*>(&e) || dynamic_cast<const NotHyperbolic*>(&e) ||
      dynamic_cast<const SingularMatrix*>(&e) || dynamic_cast<const NotOnLeaf*>(&e))
    return kCondition;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidArgument*>(&e) ||
      dynamic_cast<const ResolutionMismatch*>(&e))
    return kConfig;
  return kInternal;
}

// Restores the process-wide worker default when an in-process run ends.
struct WorkerGuard {
  unsigned saved;
  explicit WorkerGuard(std::optional<unsigned> n) : saved(0) {
    if (n) set_default_workers(*n);
  }
  ~WorkerGuard() { set_default_workers(saved); }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rigid skew products on T^2 x T^2: conditions, holonomies, u-Gibbs probes",
               "skewlab"};
  std::string command, config_path, out_dir = "skewlab-out";
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> seed;
  app.add_option("command", command, "Command to run")
      ->required()
      ->check(CLI::IsMember(command_names()));
  app.add_option("--config", config_path, "YAML experiment config")->required();
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--workers", workers, "Worker threads (overrides SKEWLAB_WORKERS)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Overrides the config seed");
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfig;
  }

  const WorkerGuard guard(workers);
  const auto t0 = Timings::Clock::now();
  const std::string started = utc_now();
  Timings timings;
  std::optional<Config> cfg;
  std::optional<OutputDir> dir;
  int code = kOk;
  std::string message;
  std::uint64_t system_hash = 0;
  int warnings = 0;
  try {
    dir.emplace(out_dir);
    {
      auto scope = timings.scope("load_config");
      cfg = load_config(config_path);
    }
    if (seed) cfg->seed = *seed;
    RunContext ctx{*cfg, *dir, timings, 0, 0, {}};
    code = find_command(command)(ctx);
    message = ctx.message;
    system_hash = ctx.system_hash;
    warnings = ctx.warnings;
  } catch (const std::exception& e) {
    code = classify(e);
    message = e.what();
  }
  if (!message.empty()) err << "skewlab " << command << ": " << message << "\n";
  if (!dir) return code;

  Json effective = cfg ? effective_config(*cfg) : Json(nullptr);
  std::vector<std::string> files = dir->files();
  std::sort(files.begin(), files.end());
  Json manifest{
      {"tool", "skewlab"},
      {"version", SKEWLAB_VERSION},
      {"command", command},
      {"config_path", config_path},
      {"config_hash", cfg ? Json(hex64(fnv1a64(effective.dump()))) : Json(nullptr)},
      {"system_hash", system_hash ? Json(hex64(system_hash)) : Json(nullptr)},
      {"seed", cfg ? Json(cfg->seed) : Json(nullptr)},
      {"workers", resolve_workers(0)},
      {"isa", kernels::isa_name(kernels::active().isa)},
      {"started_utc", started},
      {"wall_clock_seconds",
       std::chrono::duration<double>(Timings::Clock::now() - t0).count()},
      {"timings", timings.json()},
      {"exit_code", code},
      {"message", message},
      {"warnings", warnings},
      {"outputs", files},
      {"effective_config", effective}};
  try {
    std::ofstream os(dir->path() / "manifest.json", std::ios::binary | std::ios::trunc);
    os << manifest.dump(2) << "\n";
  } catch (const std::exception& e) {
    err << "skewlab: cannot write manifest: " << e.what() << "\n";
  }
  if (code == kOk) out << "skewlab " << command << ": wrote " << files.size() << " files to "
                       << dir->path().string() << "\n";
  return code;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace skewlab::cli
