#pragma once

#include "pmhd/process.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace pmhd {

// CSV: header line `x`, then one value per line in shortest round-trip form.
void write_series_csv(const Series& series, std::ostream& out);
Series read_series_csv(std::istream& in, std::size_t period);

// JSON: {"p": .., "d": [..], "values": [..]} plus, for simulated series, the
// generating noise/seed/truncation/burn_in so the spec can be rebuilt.
std::string series_to_json(const Series& series);
Series series_from_json(const std::string& text);

/// Dispatches on extension (.json, anything else is CSV).
void save_series(const Series& series, const std::filesystem::path& path);
/// `period` is required for CSV and checked against "p" for JSON when nonzero.
Series load_series(const std::filesystem::path& path, std::size_t period);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

} // namespace pmhd
