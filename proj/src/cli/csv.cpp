#include "filmctl/csv.hpp"

#include <cstdio>
#include <fstream>

#include "filmctl/config.hpp"
#include "filmctl/errors.hpp"

namespace filmctl {

std::string format_double(double value) {
  // The C locale is never changed by this program, so %g uses '.'.
  if (value == 0.0) return "0";  // no "-0" in the output
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void CsvWriter::comment(std::string_view text) {
  text_ += "# ";
  text_ += text;
  text_ += '\n';
}

void CsvWriter::header(const std::vector<std::string>& columns) { row_text(columns); }

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) text_ += ',';
    text_ += format_double(values[i]);
  }
  text_ += '\n';
}

void CsvWriter::row_text(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) text_ += ',';
    text_ += fields[i];
  }
  text_ += '\n';
}

std::string provenance_line(std::string_view config_hash, std::uint64_t seed) {
  return "filmctl " + std::string(kVersion) + " config_hash=" + std::string(config_hash) +
         " seed=" + std::to_string(seed);
}

void check_output_path(const std::filesystem::path& path, bool force) {
  std::error_code ec;
  if (!force && std::filesystem::exists(path, ec))
    throw IoError("output file '" + path.string() + "' exists (use --force to overwrite)");
}

void write_output_file(const std::filesystem::path& path, std::string_view content, bool force) {
  check_output_path(path, force);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace filmctl
