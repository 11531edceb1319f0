#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace convexity {

// Cells are typed so that serialized tables can be parsed back without loss:
// integers stay integers, doubles always carry a '.' or exponent, missing
// values render as an explicit marker.
using Cell = std::variant<std::monostate, long long, double, std::string>;

inline constexpr const char* kNullCell = "—";

struct Table {
    std::vector<std::pair<std::string, std::string>> meta; // emitted as "# key=value"
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_meta(std::string key, std::string value) {
        meta.emplace_back(std::move(key), std::move(value));
    }
};

namespace detail {

inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    std::string s = buf;
    if (s.find_first_of(".eE") == std::string::npos && s.find("inf") == std::string::npos &&
        s.find("nan") == std::string::npos)
        s += ".0";
    return s;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string cell_to_string(const Cell& c) {
    if (std::holds_alternative<std::monostate>(c)) return kNullCell;
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    return csv_escape(std::get<std::string>(c));
}

inline Cell cell_from_string(const std::string& s) {
    if (s == kNullCell) return std::monostate{};
    if (!s.empty() && (std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '-')) {
        char* end = nullptr;
        long long v = std::strtoll(s.c_str(), &end, 10);
        if (end && *end == '\0') return v;
        double d = std::strtod(s.c_str(), &end);
        if (end && *end == '\0') return d;
    }
    return s;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

} // namespace detail

inline std::string to_csv(const Table& t) {
    std::string out;
    for (const auto& [k, v] : t.meta) out += "# " + k + "=" + v + "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out += ',';
        out += detail::csv_escape(t.columns[i]);
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += detail::cell_to_string(row[i]);
        }
        out += '\n';
    }
    return out;
}

inline Table from_csv(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    bool header_done = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("# ", 0) == 0) {
            std::size_t eq = line.find('=');
            if (eq == std::string::npos) throw std::runtime_error("bad metadata line");
            t.add_meta(line.substr(2, eq - 2), line.substr(eq + 1));
            continue;
        }
        auto fields = detail::split_csv_line(line);
        if (!header_done) {
            t.columns = fields;
            header_done = true;
        } else {
            std::vector<Cell> row;
            row.reserve(fields.size());
            for (const auto& f : fields) row.push_back(detail::cell_from_string(f));
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

inline nlohmann::json to_json(const Table& t) {
    nlohmann::json j;
    for (const auto& [k, v] : t.meta) j["meta"][k] = v;
    j["columns"] = t.columns;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json jr = nlohmann::json::array();
        for (const auto& c : row) {
            if (std::holds_alternative<std::monostate>(c))
                jr.push_back(nullptr);
            else if (const auto* i = std::get_if<long long>(&c))
                jr.push_back(*i);
            else if (const auto* d = std::get_if<double>(&c))
                jr.push_back(*d);
            else
                jr.push_back(std::get<std::string>(c));
        }
        j["rows"].push_back(std::move(jr));
    }
    return j;
}

inline Table from_json(const nlohmann::json& j) {
    Table t;
    if (j.contains("meta"))
        for (auto it = j["meta"].begin(); it != j["meta"].end(); ++it)
            t.add_meta(it.key(), it.value().get<std::string>());
    t.columns = j["columns"].get<std::vector<std::string>>();
    for (const auto& jr : j["rows"]) {
        std::vector<Cell> row;
        for (const auto& c : jr) {
            if (c.is_null())
                row.emplace_back(std::monostate{});
            else if (c.is_number_integer())
                row.emplace_back(c.get<long long>());
            else if (c.is_number_float())
                row.emplace_back(c.get<double>());
            else
                row.emplace_back(c.get<std::string>());
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

/// Write-temp-then-rename so a crash never leaves a half-written report.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

} // namespace convexity
