#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace filmctl {

/// 17 significant digits, `.` decimal separator regardless of locale.
[[nodiscard]] std::string format_double(double value);

/// Comma-separated text with LF line endings. `#` comment lines (the
/// provenance header) precede the column header.
class CsvWriter {
 public:
  void comment(std::string_view text);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  /// Mixed row: already formatted fields.
  void row_text(const std::vector<std::string>& fields);

  [[nodiscard]] const std::string& text() const noexcept { return text_; }

 private:
  std::string text_;
};

/// `filmctl <version> config_hash=<hex> seed=<seed>`
[[nodiscard]] std::string provenance_line(std::string_view config_hash, std::uint64_t seed);

/// Writes `content` to `path`. Throws IoError when the file exists and
/// `force` is false, or when it cannot be written.
void write_output_file(const std::filesystem::path& path, std::string_view content, bool force);

/// Throws IoError when `path` exists and `force` is false (checked before
/// long computations so nothing is lost at the end).
void check_output_path(const std::filesystem::path& path, bool force);

}  // namespace filmctl
