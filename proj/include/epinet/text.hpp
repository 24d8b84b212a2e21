#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace epinet {

/// Reads a whole file in binary mode. Throws Error(FileUnreadable).
std::string read_file(const std::string& path);

/// Writes content atomically-ish (truncate + write). Throws Error(FileUnreadable).
void write_file(const std::string& path, std::string_view content);

/// Shortest round-trip decimal rendering of a double (printf %.17g).
std::string g17(double value);

/// Lossless hexadecimal rendering (printf %a); parse back with strtod.
std::string hexfloat(double value);

/// Parses a complete token as a double (decimal or hexfloat). Rejects
/// trailing garbage and empty input; accepts inf/nan spellings.
std::optional<double> try_parse_double(std::string_view token);

std::optional<long long> try_parse_int(std::string_view token);

std::string_view trim(std::string_view s);

std::string to_upper(std::string_view s);

} // namespace epinet
