#include "nanotalbot/serialize.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "nanotalbot/error.hpp"

namespace nanotalbot {

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_number(double value) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific, 12);
  return std::string(buf, res.ptr);
}

std::string hash_metadata(const PatternMetadata& meta, double temperature, double omega,
                          double period, double initial_momentum) {
  std::string key;
  for (double v : {meta.t0, meta.t1, meta.acceleration, meta.mass, meta.phase_amplitude,
                   temperature, omega, period, initial_momentum}) {
    key += format_number(v);
    key += ';';
  }
  key += meta.source;
  return fnv1a_hex(key);
}

void write_pattern_csv(std::ostream& out, const FringePattern& pattern) {
  out << "x_m,density_per_m\r\n";
  for (std::size_t i = 0; i < pattern.density.size(); ++i)
    out << format_number(pattern.grid.at(i)) << ',' << format_number(pattern.density[i]) << "\r\n";
}

FringePattern read_pattern_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("x_m,density_per_m", 0) != 0)
    throw InvalidArgument("read_pattern_csv: missing header x_m,density_per_m");
  std::vector<double> xs, ds;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InvalidArgument("read_pattern_csv: malformed row");
    xs.push_back(std::stod(line.substr(0, comma)));
    ds.push_back(std::stod(line.substr(comma + 1)));
  }
  if (xs.size() < 2) throw InvalidArgument("read_pattern_csv: need >= 2 rows");
  FringePattern p;
  p.grid = {xs.front(), (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1), xs.size()};
  p.density = std::move(ds);
  return p;
}

std::string pattern_metadata_json(const FringePattern& pattern) {
  nlohmann::ordered_json j;
  j["source"] = pattern.meta.source;
  j["parameter_hash"] = pattern.meta.parameter_hash;
  j["t0_s"] = pattern.meta.t0;
  j["t1_s"] = pattern.meta.t1;
  j["acceleration_m_s2"] = pattern.meta.acceleration;
  j["mass_kg"] = pattern.meta.mass;
  j["phase_amplitude"] = pattern.meta.phase_amplitude;
  j["nominal_period_m"] = pattern.nominal_period;
  j["grid"] = {{"start_m", pattern.grid.start},
               {"spacing_m", pattern.grid.spacing},
               {"count", pattern.grid.count}};
  return j.dump(2);
}

void write_csv(std::ostream& out, const CsvTable& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i)
    out << (i ? "," : "") << table.header[i];
  out << "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << "\r\n";
  }
}

}  // namespace nanotalbot
