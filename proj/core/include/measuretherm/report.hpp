#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace measuretherm {

/// Canonical floating-point rendering: 17 significant digits, enough to
/// round-trip any double bit-exactly.
std::string format_double(double v);

/// Comma-separated, ASCII, LF line endings, mandatory header row.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  void row(const std::vector<std::string>& cells);
  void close();

 private:
  std::ofstream out_;
  std::size_t columns_;
};

std::uint64_t file_digest(const std::filesystem::path& path);

/// Writes manifest.txt: one "<digest>  <relative path>" line per data file,
/// sorted by path; the manifest itself is excluded.
void write_manifest(const std::filesystem::path& dir);

/// True when the two directory trees agree byte for byte.
bool trees_identical(const std::filesystem::path& a, const std::filesystem::path& b,
                     std::string* first_difference = nullptr);

struct CheckResult {
  std::string id;
  double value = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct ScenarioResult {
  std::string scenario;
  std::vector<CheckResult> checks;
  /// Free-form record lines echoed into the summary (instance reports,
  /// ledgers); deterministic content only.
  std::vector<std::string> records;
  bool all_passed() const;
};

}  // namespace measuretherm
