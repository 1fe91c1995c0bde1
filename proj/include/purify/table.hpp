#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace purify {

using Cell = std::variant<double, long long, std::string>;

struct Column {
    std::string name;
    std::string unit = {}; // empty for dimensionless
};

/// A named table of rows with a provenance block. Rows are plain data and
/// reproduce bit-for-bit for a fixed configuration; only the wall-clock line
/// in the provenance changes between runs.
class ResultTable {
  public:
    ResultTable(std::string name, std::vector<Column> columns);

    const std::string &name() const { return name_; }
    const std::vector<Column> &columns() const { return columns_; }
    const std::vector<std::vector<Cell>> &rows() const { return rows_; }

    // Throws DomainError if the row width does not match the schema.
    void add_row(std::vector<Cell> row);

    std::size_t column_index(const std::string &name) const;
    double number(std::size_t row, const std::string &column) const;

    // SHA-1 over the header and the rows as they are written to CSV.
    std::string content_hash() const;

  private:
    std::string name_;
    std::vector<Column> columns_;
    std::vector<std::vector<Cell>> rows_;
};

struct Provenance {
    std::vector<std::pair<std::string, std::string>> config; // echoed key = value pairs
    double wall_seconds = 0.0;
    std::string version;
};

// 17 significant digits, '.' separator, "nan"/"inf"/"-inf" for non-finite values.
std::string format_double(double v);

void write_csv(std::ostream &os, const std::vector<ResultTable> &tables, const Provenance &prov);
void write_json(std::ostream &os, const std::vector<ResultTable> &tables, const Provenance &prov);

std::string library_version();

} // namespace purify
