#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "nanotalbot/phase_space.hpp"

namespace nanotalbot {

/// 64-bit FNV-1a, lowercase hex.
std::string fnv1a_hex(std::string_view bytes);

/// Locale-independent fixed-format rendering used by every CSV writer.
std::string format_number(double value);

std::string hash_metadata(const PatternMetadata& meta, double temperature, double omega,
                          double period, double initial_momentum);

/// RFC 4180 CSV with header "x_m,density_per_m".
void write_pattern_csv(std::ostream& out, const FringePattern& pattern);
FringePattern read_pattern_csv(std::istream& in);

/// Sidecar JSON: t0, t1, acceleration, mass, phase amplitude, source, hash, grid.
std::string pattern_metadata_json(const FringePattern& pattern);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

void write_csv(std::ostream& out, const CsvTable& table);

}  // namespace nanotalbot
