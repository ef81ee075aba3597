// Copyright 2026 The bethe-transport Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file csv.hpp
 * @brief Minimal schema-checked CSV writer used by every exporter.
 *
 * The header is fixed at construction; each row must supply exactly one
 * value per column and every floating-point value must be finite (an
 * optional column may be written as an empty cell via std::nullopt).
 * Doubles are printed with "%.15g" so equal inputs give byte-identical files.
 */

#pragma once

#include "bethe/types.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace bethe {

class CsvWriter {
  public:
    using Cell = std::variant<double, std::int64_t, std::string, std::optional<double>>;

    CsvWriter(std::ostream &os, std::vector<std::string> columns) : os_(os), columns_(std::move(columns)) {
        for (std::size_t i = 0; i < columns_.size(); ++i) os_ << (i ? "," : "") << columns_[i];
        os_ << '\n';
    }

    template <typename... Ts> void row(const Ts &...values) {
        std::vector<Cell> cells;
        cells.reserve(sizeof...(Ts));
        (cells.push_back(to_cell(values)), ...);
        write(cells);
    }

    void write(const std::vector<Cell> &cells) {
        if (cells.size() != columns_.size()) {
            throw Error("csv: row has " + std::to_string(cells.size()) + " cells, schema has " +
                        std::to_string(columns_.size()));
        }
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ',';
            os_ << format(cells[i], columns_[i]);
        }
        os_ << '\n';
        ++rows_;
    }

    std::size_t rows() const { return rows_; }
    const std::vector<std::string> &columns() const { return columns_; }

  private:
    template <typename T> static Cell to_cell(const T &v) {
        if constexpr (std::is_same_v<T, bool>) {
            return std::int64_t{v ? 1 : 0};
        } else if constexpr (std::is_integral_v<T>) {
            return static_cast<std::int64_t>(v);
        } else if constexpr (std::is_floating_point_v<T>) {
            return static_cast<double>(v);
        } else if constexpr (std::is_same_v<T, std::optional<double>>) {
            return v;
        } else {
            return std::string(v);
        }
    }

    static std::string format_double(double d, const std::string &column) {
        if (!std::isfinite(d)) throw Error("csv: non-finite value in column '" + column + "'");
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.15g", d == 0.0 ? 0.0 : d); // no "-0"
        return buf;
    }

    static std::string format(const Cell &c, const std::string &column) {
        if (const auto *d = std::get_if<double>(&c)) return format_double(*d, column);
        if (const auto *i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
        if (const auto *o = std::get_if<std::optional<double>>(&c)) return *o ? format_double(**o, column) : "";
        const auto &s = std::get<std::string>(c);
        if (s.find_first_of(",\n\"") != std::string::npos) throw Error("csv: unquotable text in column '" + column + "'");
        return s;
    }

    std::ostream &os_;
    std::vector<std::string> columns_;
    std::size_t rows_ = 0;
};

} // namespace bethe
