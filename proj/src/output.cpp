#include "hapdc/output.hpp"

#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

namespace hapdc {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}

std::string cell_text(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* i = std::get_if<long long>(&c)) return fmt::format("{}", *i);
    return csv_field(std::get<std::string>(c));
}

nlohmann::json cell_json(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? nlohmann::json(*d) : nlohmann::json();
    if (const auto* i = std::get_if<long long>(&c)) return *i;
    return std::get<std::string>(c);
}

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return fmt::format("{}", x);
}

void write_csv(std::ostream& out, const Table& t, const Manifest& m) {
    out << "# tool: hapdc " << kToolVersion << "\r\n";
    out << "# command: " << m.command << "\r\n";
    out << fmt::format("# config_hash: {:016x}\r\n", m.config_hash);
    out << "# seed: " << m.seed << "\r\n";
    for (const auto& [k, v] : m.extra) out << "# " << k << ": " << v << "\r\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv_field(t.columns[i]);
    out << "\r\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
        out << "\r\n";
    }
}

void write_json(std::ostream& out, const Table& t, const Manifest& m) {
    nlohmann::ordered_json root;
    auto& man = root["manifest"];
    man["tool"] = std::string("hapdc ") + kToolVersion;
    man["command"] = m.command;
    man["config_hash"] = fmt::format("{:016x}", m.config_hash);
    man["seed"] = m.seed;
    for (const auto& [k, v] : m.extra) man[k] = v;
    root["columns"] = t.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) obj[t.columns[i]] = cell_json(row[i]);
        rows.push_back(std::move(obj));
    }
    root["rows"] = std::move(rows);
    out << root.dump(2) << "\n";
}

void write_table(std::ostream& out, const Table& t, const Manifest& m, OutputFormat format) {
    if (format == OutputFormat::Json) {
        write_json(out, t, m);
    } else {
        write_csv(out, t, m);
    }
}

}  // namespace hapdc
