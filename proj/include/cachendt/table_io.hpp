// SPDX-License-Identifier: Apache-2.0
//
// cachendt: delivery-time bounds and precoding schemes for cache-aided relay networks
// ------------------------------------------------------------------------

#ifndef CACHENDT_TABLE_IO_HPP
#define CACHENDT_TABLE_IO_HPP

#include "cachendt/rational.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cachendt
{
    inline constexpr const char *version = "0.1.0";

    enum class ColumnType
    {
        integer,
        real,
        rational,
        text
    };

    struct Column
    {
        std::string name;
        ColumnType type;

        bool operator==(const Column &) const = default;
    };

    // monostate renders as an empty CSV field / JSON null.
    using Cell = std::variant<std::monostate, std::int64_t, double, Rational, std::string>;

    struct TableMeta
    {
        std::string command;
        std::optional<int> relays;
        std::optional<int> users;
        std::optional<std::uint64_t> seed;
        std::optional<double> tol;
        nlohmann::json summary = nlohmann::json::object();

        bool operator==(const TableMeta &) const = default;
    };

    // Typed table: every emitted artifact (curves, reports, rate tables) is one of these.
    struct Table
    {
        TableMeta meta;
        std::vector<Column> columns;
        std::vector<std::vector<Cell>> rows;

        // Throws std::invalid_argument when the cell does not fit the column type.
        void add_row(std::vector<Cell> row);

        bool operator==(const Table &) const = default;
    };

    enum class OutputFormat
    {
        csv,
        json
    };

    // CSV: one header row then one row per table row. Rational columns expand into the
    // exact "p/q" string plus a "<name>_dec" column with 15 significant digits.
    std::string render_csv(const Table &table);

    // {"meta": {command, M, K, seed, tol, version, columns, summary}, "data": [...]}.
    // Rationals appear as "p/q" strings with a "<name>_dec" number alongside.
    std::string render_json(const Table &table);

    std::string render(const Table &table, OutputFormat format);

    // Inverse of render_json.
    Table parse_json_table(const std::string &text);

    // Writes the rendered table to path, returning the byte count. Throws
    // std::runtime_error when the path cannot be written.
    std::size_t emit(const Table &table, OutputFormat format, const std::filesystem::path &path);
}

#endif
