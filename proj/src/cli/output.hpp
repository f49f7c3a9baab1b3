#pragma once

#include "config.hpp"

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

namespace skewlab::cli {

/// Shortest round-trip decimal; empty for NaN.
std::string num(double v);
std::string hex64(std::uint64_t v);

/// RFC 4180 row builder (CRLF terminated).
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) { row(header); }
  void row(const std::vector<std::string>& cells);
  const std::string& str() const noexcept { return text_; }

 private:
  std::string text_;
};

/// Data files of one run, recorded for the manifest.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path dir);
  const std::filesystem::path& path() const noexcept { return dir_; }
  void write(const std::string& name, const std::string& bytes);
  void write_json(const std::string& name, const Json& doc);
  const std::vector<std::string>& files() const noexcept { return files_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
};

class Timings {
 public:
  using Clock = std::chrono::steady_clock;
  class Scope {
   public:
    Scope(Timings& t, std::string name) : t_(t), name_(std::move(name)), start_(Clock::now()) {}
    ~Scope() { t_.add(name_, std::chrono::duration<double>(Clock::now() - start_).count()); }

   private:
    Timings& t_;
    std::string name_;
    Clock::time_point start_;
  };
  Scope scope(std::string name) { return Scope(*this, std::move(name)); }
  void add(const std::string& name, double seconds) { entries_.emplace_back(name, seconds); }
  Json json() const;

 private:
  std::vector<std::pair<std::string, double>> entries_;
};

}  // namespace skewlab::cli
