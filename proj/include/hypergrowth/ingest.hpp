/*
 * Copyright (c) 2026, hypergrowth contributors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @file ingest.hpp
 * @brief Historical GDP tables: long and wide CSV parsing and region
 *        aggregation.
 *
 * Long format (canonical):  entity,year,value
 * Wide format (adapter):    entity,<year>,<year>,...   one row per entity,
 *                           comma or tab separated, blank cell = missing.
 */
#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "model.hpp"

namespace hypergrowth {

/**
 * Sparse entity x year table of positive values in billions of 1990
 * Geary-Khamis dollars. unit_scale records the factor already applied to the
 * source numbers.
 */
class DatasetTable {
public:
    explicit DatasetTable(double unit_scale = 1.0) : unit_scale_(unit_scale) {}

    /// Adds a cell already in canonical units. Rejects duplicates and
    /// non-positive values.
    void add(const std::string& entity, double year, double value) {
        if (!std::isfinite(year)) throw InvalidArgument("non-finite year for '" + entity + "'");
        if (!std::isfinite(value) || !(value > 0.0)) {
            throw InvalidArgument("value for (" + entity + ", " + format_year(year) + ") must be positive");
        }
        if (!cells_.emplace(std::make_pair(entity, year), value).second) {
            throw InvalidArgument("duplicate cell (" + entity + ", " + format_year(year) + ")");
        }
        if (std::find(entities_.begin(), entities_.end(), entity) == entities_.end()) entities_.push_back(entity);
        years_.insert(year);
    }

    std::optional<double> cell(const std::string& entity, double year) const {
        const auto it = cells_.find({entity, year});
        if (it == cells_.end()) return std::nullopt;
        return it->second;
    }

    bool has_entity(const std::string& entity) const {
        return std::find(entities_.begin(), entities_.end(), entity) != entities_.end();
    }

    /// Entities in order of first appearance.
    const std::vector<std::string>& entities() const noexcept { return entities_; }
    std::vector<double> years() const { return {years_.begin(), years_.end()}; }
    std::size_t cell_count() const noexcept { return cells_.size(); }
    double unit_scale() const noexcept { return unit_scale_; }

    const std::map<std::pair<std::string, double>, double>& cells() const noexcept { return cells_; }

    /// Multiplies every value by factor; year structure is untouched.
    DatasetTable rescaled(double factor) const {
        if (!std::isfinite(factor) || !(factor > 0.0)) throw InvalidArgument("unit scale must be positive");
        DatasetTable out(unit_scale_ * factor);
        out.entities_ = entities_;
        out.years_ = years_;
        for (const auto& [key, v] : cells_) out.cells_.emplace(key, v * factor);
        return out;
    }

    /// Same entities, years and values (unit_scale is bookkeeping only).
    friend bool operator==(const DatasetTable& l, const DatasetTable& r) {
        return l.cells_ == r.cells_ && l.years_ == r.years_ &&
               std::set<std::string>(l.entities_.begin(), l.entities_.end()) ==
                   std::set<std::string>(r.entities_.begin(), r.entities_.end());
    }

    static std::string format_year(double year) {
        char buf[64];
        if (year == std::floor(year) && std::abs(year) < 1e15) {
            std::snprintf(buf, sizeof buf, "%.0f", year);
        } else {
            std::snprintf(buf, sizeof buf, "%.17g", year);
        }
        return buf;
    }

private:
    double unit_scale_;
    std::vector<std::string> entities_;
    std::set<double> years_;
    std::map<std::pair<std::string, double>, double> cells_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && ws(s.back())) s.remove_suffix(1);
    return s;
}

inline std::optional<double> parse_number(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

/// Splits one line on the delimiter, honouring double-quoted fields.
inline std::vector<std::string> split_fields(std::string_view line, char delim) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delim) {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

/// Lines without their terminators (LF or CRLF), paired with 1-based numbers.
inline std::vector<std::pair<std::size_t, std::string_view>> lines_of(std::string_view text) {
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    std::vector<std::pair<std::size_t, std::string_view>> out;
    std::size_t number = 0;
    while (!text.empty()) {
        ++number;
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        out.emplace_back(number, line);
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
    return out;
}

inline std::string quote_field(const std::string& s, char delim) {
    if (s.find_first_of(std::string{'"', delim, '\n', '\r'}) == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

inline std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/**
 * Parses `entity,year,value` rows. Rows with an empty value are skipped, as
 * are blank lines. Values are multiplied by unit_scale. Errors name the line.
 */
inline DatasetTable parse_long_csv(std::string_view text, double unit_scale = 1.0) {
    if (!std::isfinite(unit_scale) || !(unit_scale > 0.0)) throw InvalidArgument("unit scale must be positive");
    const auto lines = detail::lines_of(text);
    if (lines.empty()) throw ParseError(1, "missing header 'entity,year,value'");
    const auto header = detail::split_fields(lines.front().second, ',');
    if (header.size() != 3 || detail::trim(header[0]) != "entity" || detail::trim(header[1]) != "year" ||
        detail::trim(header[2]) != "value") {
        throw ParseError(lines.front().first, "expected header 'entity,year,value'");
    }
    DatasetTable table(unit_scale);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto [number, line] = lines[i];
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_fields(line, ',');
        if (fields.size() != 3) throw ParseError(number, "expected 3 fields, found " + std::to_string(fields.size()));
        const std::string entity(detail::trim(fields[0]));
        if (entity.empty()) throw ParseError(number, "empty entity name");
        const auto year = detail::parse_number(fields[1]);
        if (!year) throw ParseError(number, "bad year '" + fields[1] + "'");
        if (detail::trim(fields[2]).empty()) continue;
        const auto value = detail::parse_number(fields[2]);
        if (!value) throw ParseError(number, "bad value '" + fields[2] + "'");
        if (!(*value > 0.0)) throw ParseError(number, "value must be positive, got '" + fields[2] + "'");
        if (table.cell(entity, *year)) {
            throw ParseError(number, "duplicate cell (" + entity + ", " + DatasetTable::format_year(*year) + ")");
        }
        table.add(entity, *year, *value * unit_scale);
    }
    return table;
}

/**
 * Parses a wide table: first row is `entity` followed by year headers, each
 * later row is an entity name followed by one cell per year. The delimiter is
 * a tab if the header row contains one, otherwise a comma.
 */
inline DatasetTable parse_wide_table(std::string_view text, double unit_scale = 1.0) {
    if (!std::isfinite(unit_scale) || !(unit_scale > 0.0)) throw InvalidArgument("unit scale must be positive");
    const auto lines = detail::lines_of(text);
    if (lines.empty()) throw ParseError(1, "missing header row");
    const char delim = lines.front().second.find('\t') != std::string_view::npos ? '\t' : ',';
    const auto header = detail::split_fields(lines.front().second, delim);
    std::vector<double> years;
    for (std::size_t c = 1; c < header.size(); ++c) {
        const auto y = detail::parse_number(header[c]);
        if (!y) throw ParseError(lines.front().first, "non-numeric year header '" + header[c] + "'");
        years.push_back(*y);
    }
    DatasetTable table(unit_scale);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto [number, line] = lines[i];
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_fields(line, delim);
        if (fields.size() > header.size()) throw ParseError(number, "more cells than year headers");
        const std::string entity(detail::trim(fields[0]));
        if (entity.empty()) throw ParseError(number, "empty entity name");
        if (table.has_entity(entity)) throw ParseError(number, "duplicate entity '" + entity + "'");
        for (std::size_t c = 1; c < fields.size(); ++c) {
            if (detail::trim(fields[c]).empty()) continue;
            const auto value = detail::parse_number(fields[c]);
            if (!value) throw ParseError(number, "non-numeric cell '" + fields[c] + "'");
            if (!(*value > 0.0)) throw ParseError(number, "value must be positive, got '" + fields[c] + "'");
            table.add(entity, years[c - 1], *value * unit_scale);
        }
    }
    return table;
}

/// Lossless long CSV (full precision). Rows ordered by entity, then year.
inline std::string write_long_csv(const DatasetTable& table) {
    std::string out = "entity,year,value\n";
    for (const auto& [key, value] : table.cells()) {
        out += detail::quote_field(key.first, ',');
        out += ',';
        out += DatasetTable::format_year(key.second);
        out += ',';
        out += detail::format_full(value);
        out += '\n';
    }
    return out;
}

/// Lossless wide CSV. Entities in first-appearance order, years ascending.
inline std::string write_wide_csv(const DatasetTable& table) {
    const auto years = table.years();
    std::string out = "entity";
    for (double y : years) out += "," + DatasetTable::format_year(y);
    out += '\n';
    for (const auto& e : table.entities()) {
        out += detail::quote_field(e, ',');
        for (double y : years) {
            out += ',';
            if (const auto v = table.cell(e, y)) out += detail::format_full(*v);
        }
        out += '\n';
    }
    return out;
}

enum class Aggregation { sum };

struct RegionDefinition {
    std::string name;
    std::vector<std::string> members;
    Aggregation aggregation = Aggregation::sum;
    bool require_complete = true;
    double unit_scale = 1.0;
};

/**
 * Sums member cells per year. With require_complete, years missing any
 * member are dropped; otherwise present members are summed. The region's
 * unit_scale multiplies the result.
 */
inline YearValueSeries build_region_series(const DatasetTable& table, const RegionDefinition& region) {
    if (region.members.empty()) throw ConfigError("region '" + region.name + "' has no members");
    for (const auto& m : region.members) {
        if (!table.has_entity(m)) throw ConfigError("region '" + region.name + "': unknown member '" + m + "'");
    }
    if (!std::isfinite(region.unit_scale) || !(region.unit_scale > 0.0)) {
        throw ConfigError("region '" + region.name + "': unit_scale must be positive");
    }
    // Canonical summation order keeps the result independent of member order.
    auto members = region.members;
    std::sort(members.begin(), members.end());
    std::vector<Observation> points;
    for (double year : table.years()) {
        double total = 0.0;
        std::size_t present = 0;
        for (const auto& m : members) {
            if (const auto v = table.cell(m, year)) {
                total += *v;
                ++present;
            }
        }
        if (present == 0) continue;
        if (region.require_complete && present != region.members.size()) continue;
        points.push_back({year, total * region.unit_scale});
    }
    if (points.empty()) throw ConfigError("region '" + region.name + "' has no usable years");
    return YearValueSeries(std::move(points), region.name);
}

}  // namespace hypergrowth
