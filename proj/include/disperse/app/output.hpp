#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace disperse::app {

using Json = nlohmann::ordered_json;

/// 17 significant digits, '.' decimal, "inf"/"-inf"/"nan" for non-finite.
std::string format_number(double v);

/// JSON number, or a string for non-finite values (JSON has no inf/nan).
Json json_number(double v);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  /// Mixed text and numbers; text cells are written verbatim.
  void cells(const std::vector<std::string>& values);
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

void write_json(const std::filesystem::path& path, const Json& value);

/// UTC wall-clock time, ISO 8601.
std::string utc_timestamp();

/// Artifact record for one command invocation. Timestamps live only here,
/// never in CSV bodies.
struct RunRecord {
  std::string command;
  std::string config_hash;
  std::string version;
  std::string started;
  std::string finished;
  int exit_code = 0;
  Json summary;
  std::vector<std::string> csv_paths;
  Json to_json() const;
};

}  // namespace disperse::app
