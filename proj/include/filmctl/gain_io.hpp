#pragma once

#include <filesystem>
#include <string>
#include <vector>
#include <iosfwd>

#include "filmctl/lqr.hpp"

namespace filmctl {

inline constexpr int kGainFormatVersion = 1;

/// Text container: a `filmctl-gain` magic line, `key = value` header lines
/// (model, reduced, reynolds, capillary, theta, aspect, grid_points,
/// actuators, width, beta, solver, rows, cols, version) and then the rows of
/// K, one per line. Optional `# ` comment lines (provenance) follow the magic
/// line and are ignored on reading. Values are written with 17 significant digits so a
/// write/read cycle reproduces every entry bit for bit.
void write_gain(std::ostream& out, const GainMatrix& gain, const std::vector<std::string>& comments = {});
GainMatrix read_gain(std::istream& in);

void write_gain_file(const std::filesystem::path& path, const GainMatrix& gain,
                     const std::vector<std::string>& comments = {});
GainMatrix read_gain_file(const std::filesystem::path& path);

}  // namespace filmctl
