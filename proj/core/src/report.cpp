#include "measuretherm/report.hpp"

#include <algorithm>
#include <cstdio>

#include "measuretherm/errors.hpp"
#include "measuretherm/rng.hpp"

namespace measuretherm {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const fs::path& path, const std::vector<std::string>& header)
    : columns_(header.size()) {
  fs::create_directories(path.parent_path());
  out_.open(path, std::ios::binary);
  if (!out_) throw ConfigurationError("cannot open for writing: " + path.string());
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) {
    throw ConfigurationError("CSV row width does not match the header");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

void CsvWriter::close() { out_.close(); }

std::uint64_t file_digest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigurationError("cannot open for digest: " + path.string());
  std::uint64_t h = 14695981039346656037ull;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  return h;
}

namespace {

std::vector<fs::path> sorted_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(), [&](const fs::path& a, const fs::path& b) {
    return a.lexically_relative(dir).generic_string() <
           b.lexically_relative(dir).generic_string();
  });
  return files;
}

}  // namespace

void write_manifest(const fs::path& dir) {
  std::vector<std::string> lines;
  for (const fs::path& f : sorted_files(dir)) {
    const std::string rel = f.lexically_relative(dir).generic_string();
    if (rel == "manifest.txt") continue;
    char digest[20];
    std::snprintf(digest, sizeof(digest), "%016llx",
                  static_cast<unsigned long long>(file_digest(f)));
    lines.push_back(std::string(digest) + "  " + rel);
  }
  std::ofstream out(dir / "manifest.txt", std::ios::binary);
  if (!out) throw ConfigurationError("cannot write manifest in " + dir.string());
  for (const std::string& line : lines) out << line << '\n';
}

bool trees_identical(const fs::path& a, const fs::path& b, std::string* first_difference) {
  const std::vector<fs::path> files_a = sorted_files(a);
  const std::vector<fs::path> files_b = sorted_files(b);
  auto rel = [](const fs::path& p, const fs::path& root) {
    return p.lexically_relative(root).generic_string();
  };
  if (files_a.size() != files_b.size()) {
    if (first_difference) *first_difference = "file counts differ";
    return false;
  }
  for (std::size_t i = 0; i < files_a.size(); ++i) {
    if (rel(files_a[i], a) != rel(files_b[i], b)) {
      if (first_difference) *first_difference = "file names differ: " + rel(files_a[i], a);
      return false;
    }
    if (file_digest(files_a[i]) != file_digest(files_b[i])) {
      if (first_difference) *first_difference = "contents differ: " + rel(files_a[i], a);
      return false;
    }
  }
  return true;
}

bool ScenarioResult::all_passed() const {
  for (const CheckResult& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

}  // namespace measuretherm
