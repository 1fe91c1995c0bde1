#include "purify/table.hpp"
#include "purify/errors.hpp"

#include <boost/uuid/detail/sha1.hpp>
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

#ifndef PURIFY_VERSION
#define PURIFY_VERSION "dev"
#endif

namespace purify {

std::string library_version() { return PURIFY_VERSION; }

std::string format_double(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string cell_text(const Cell &c) {
    if (const auto *d = std::get_if<double>(&c))
        return format_double(*d);
    if (const auto *i = std::get_if<long long>(&c))
        return std::to_string(*i);
    return csv_field(std::get<std::string>(c));
}

std::string csv_body(const ResultTable &t) {
    std::string out;
    for (std::size_t j = 0; j < t.columns().size(); ++j)
        out += (j ? "," : "") + csv_field(t.columns()[j].name);
    out += '\n';
    for (const auto &row : t.rows()) {
        for (std::size_t j = 0; j < row.size(); ++j)
            out += (j ? "," : "") + cell_text(row[j]);
        out += '\n';
    }
    return out;
}

} // namespace

ResultTable::ResultTable(std::string name, std::vector<Column> columns)
    : name_(std::move(name)), columns_(std::move(columns)) {}

void ResultTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size())
        throw DomainError("table '" + name_ + "': row has " + std::to_string(row.size()) + " cells, schema has " +
                          std::to_string(columns_.size()));
    rows_.push_back(std::move(row));
}

std::size_t ResultTable::column_index(const std::string &name) const {
    for (std::size_t j = 0; j < columns_.size(); ++j)
        if (columns_[j].name == name)
            return j;
    throw DomainError("table '" + name_ + "' has no column '" + name + "'");
}

double ResultTable::number(std::size_t row, const std::string &column) const {
    const Cell &c = rows_.at(row).at(column_index(column));
    if (const auto *d = std::get_if<double>(&c))
        return *d;
    if (const auto *i = std::get_if<long long>(&c))
        return static_cast<double>(*i);
    throw DomainError("column '" + column + "' is not numeric");
}

std::string ResultTable::content_hash() const {
    const std::string body = csv_body(*this);
    boost::uuids::detail::sha1 h;
    h.process_bytes(body.data(), body.size());
    boost::uuids::detail::sha1::digest_type d;
    h.get_digest(d);
    std::ostringstream os;
    for (unsigned w : d)
        os << std::hex << std::setw(8) << std::setfill('0') << w;
    return os.str();
}

void write_csv(std::ostream &os, const std::vector<ResultTable> &tables, const Provenance &prov) {
    os << "# purify " << prov.version << '\n';
    for (const auto &[k, v] : prov.config)
        os << "# config " << k << " = " << v << '\n';
    os << "# wall_seconds " << format_double(prov.wall_seconds) << '\n';
    for (std::size_t i = 0; i < tables.size(); ++i) {
        const auto &t = tables[i];
        if (i)
            os << '\n';
        os << "# table " << t.name() << '\n';
        os << "# sha1 " << t.content_hash() << '\n';
        bool any_unit = false;
        for (const auto &c : t.columns())
            any_unit = any_unit || !c.unit.empty();
        if (any_unit) {
            os << "# units";
            for (const auto &c : t.columns())
                os << ' ' << c.name << '=' << (c.unit.empty() ? "1" : c.unit);
            os << '\n';
        }
        os << csv_body(t);
    }
}

void write_json(std::ostream &os, const std::vector<ResultTable> &tables, const Provenance &prov) {
    using nlohmann::ordered_json;
    ordered_json doc;
    ordered_json p;
    p["version"] = prov.version;
    ordered_json cfg = ordered_json::object();
    for (const auto &[k, v] : prov.config)
        cfg[k] = v;
    p["config"] = cfg;
    p["wall_seconds"] = prov.wall_seconds;
    doc["provenance"] = p;
    doc["tables"] = ordered_json::array();
    for (const auto &t : tables) {
        ordered_json jt;
        jt["name"] = t.name();
        jt["sha1"] = t.content_hash();
        jt["columns"] = ordered_json::array();
        for (const auto &c : t.columns())
            jt["columns"].push_back({{"name", c.name}, {"unit", c.unit}});
        jt["rows"] = ordered_json::array();
        for (const auto &row : t.rows()) {
            ordered_json jr = ordered_json::array();
            for (const auto &c : row) {
                if (const auto *d = std::get_if<double>(&c)) {
                    // JSON has no non-finite numbers; those go out as strings.
                    if (std::isfinite(*d))
                        jr.push_back(*d);
                    else
                        jr.push_back(format_double(*d));
                } else if (const auto *i = std::get_if<long long>(&c)) {
                    jr.push_back(*i);
                } else {
                    jr.push_back(std::get<std::string>(c));
                }
            }
            jt["rows"].push_back(std::move(jr));
        }
        doc["tables"].push_back(std::move(jt));
    }
    os << doc.dump(2) << '\n';
}

} // namespace purify
