#pragma once

#include <span>
#include <string>
#include <vector>

namespace probe {

/// Locale-independent formatting with 17 significant digits; round-trips
/// doubles exactly.
std::string format_double(double v);

/// RFC-4180 field quoting (only when needed).
std::string csv_escape(const std::string& field);

class CsvTable {
  public:
    void header(std::vector<std::string> names);
    void row(std::span<const std::string> fields);
    void row(std::span<const double> values);

    /// Serialized table; identical inputs produce identical bytes.
    std::string str() const;
    void write_file(const std::string& path) const;

  private:
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace probe
