#include "probe/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace probe {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& field) {
    bool needs_quote = false;
    for (char c : field)
        if (c == ',' || c == '"' || c == '\n' || c == '\r') needs_quote = true;
    if (!needs_quote) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

void CsvTable::header(std::vector<std::string> names) { rows_.insert(rows_.begin(), std::move(names)); }

void CsvTable::row(std::span<const std::string> fields) {
    rows_.emplace_back(fields.begin(), fields.end());
}

void CsvTable::row(std::span<const double> values) {
    std::vector<std::string> fields;
    fields.reserve(values.size());
    for (double v : values) fields.push_back(format_double(v));
    rows_.push_back(std::move(fields));
}

std::string CsvTable::str() const {
    std::string out;
    for (const auto& r : rows_) {
        for (size_t i = 0; i < r.size(); ++i) {
            if (i) out += ',';
            out += csv_escape(r[i]);
        }
        out += '\n';
    }
    return out;
}

void CsvTable::write_file(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    const std::string s = str();
    f.write(s.data(), static_cast<std::streamsize>(s.size()));
}

}  // namespace probe
