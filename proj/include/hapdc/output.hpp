#pragma once

// Result tables and their CSV / JSON serializations with a manifest header.

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hapdc {

inline constexpr const char* kToolVersion = "0.1.0";

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Manifest {
    std::string command;
    unsigned long long config_hash = 0;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> extra;
};

enum class OutputFormat { Csv, Json };

/// Shortest round-trip text of a double; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double x);

/// RFC 4180 CSV preceded by `#` manifest lines.
void write_csv(std::ostream& out, const Table& table, const Manifest& manifest);

/// {"manifest": {...}, "columns": [...], "rows": [{column: value}]}; non-finite numbers become null.
void write_json(std::ostream& out, const Table& table, const Manifest& manifest);

void write_table(std::ostream& out, const Table& table, const Manifest& manifest, OutputFormat format);

}  // namespace hapdc
