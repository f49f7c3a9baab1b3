#include "output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace skewlab::cli {

std::string num(double v) {
  if (std::isnan(v)) return {};
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    const std::string& c = cells[i];
    if (c.find_first_of(",\"\r\n") == std::string::npos) {
      text_ += c;
      continue;
    }
    text_ += '"';
    for (char ch : c) {
      if (ch == '"') text_ += '"';
      text_ += ch;
    }
    text_ += '"';
  }
  text_ += "\r\n";
}

OutputDir::OutputDir(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

void OutputDir::write(const std::string& name, const std::string& bytes) {
  std::ofstream os(dir_ / name, std::ios::binary | std::ios::trunc);
  os.write(bytes.data(), std::streamsize(bytes.size()));
  if (!os) throw Error("cannot write " + (dir_ / name).string());
  files_.push_back(name);
}

void OutputDir::write_json(const std::string& name, const Json& doc) {
  write(name, doc.dump(2) + "\n");
}

Json Timings::json() const {
  Json j = Json::object();
  for (const auto& [name, s] : entries_) j[name] = j.contains(name) ? j[name].get<double>() + s : s;
  return j;
}

}  // namespace skewlab::cli
