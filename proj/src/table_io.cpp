// SPDX-License-Identifier: Apache-2.0
//
// cachendt: delivery-time bounds and precoding schemes for cache-aided relay networks
// ------------------------------------------------------------------------

#include "cachendt/table_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cachendt
{
    namespace
    {
        const char *type_name(ColumnType t)
        {
            switch (t)
            {
            case ColumnType::integer:
                return "integer";
            case ColumnType::real:
                return "real";
            case ColumnType::rational:
                return "rational";
            case ColumnType::text:
                return "text";
            }
            return "text";
        }

        ColumnType type_from_name(const std::string &s)
        {
            if (s == "integer")
                return ColumnType::integer;
            if (s == "real")
                return ColumnType::real;
            if (s == "rational")
                return ColumnType::rational;
            if (s == "text")
                return ColumnType::text;
            throw std::invalid_argument("unknown column type '" + s + "'");
        }

        bool fits(const Cell &cell, ColumnType t)
        {
            switch (cell.index())
            {
            case 0:
                return true;
            case 1:
                return t == ColumnType::integer;
            case 2:
                return t == ColumnType::real;
            case 3:
                return t == ColumnType::rational;
            default:
                return t == ColumnType::text;
            }
        }

        std::string csv_escape(const std::string &s)
        {
            if (s.find_first_of(",\"\n\r") == std::string::npos)
                return s;
            std::string out = "\"";
            for (char c : s)
            {
                if (c == '"')
                    out += '"';
                out += c;
            }
            return out + "\"";
        }

        nlohmann::json real_to_json(double v)
        {
            if (std::isfinite(v))
                return v;
            return to_decimal_string(v);
        }

        double real_from_json(const nlohmann::json &j)
        {
            if (j.is_number())
                return j.get<double>();
            const auto s = j.get<std::string>();
            if (s == "inf")
                return std::numeric_limits<double>::infinity();
            if (s == "-inf")
                return -std::numeric_limits<double>::infinity();
            if (s == "nan")
                return std::numeric_limits<double>::quiet_NaN();
            throw std::invalid_argument("invalid real value '" + s + "'");
        }
    }

    void Table::add_row(std::vector<Cell> row)
    {
        if (row.size() != columns.size())
            throw std::invalid_argument("row width does not match table columns");
        for (std::size_t i = 0; i < row.size(); ++i)
            if (!fits(row[i], columns[i].type))
                throw std::invalid_argument("cell type does not match column '" + columns[i].name + "'");
        rows.push_back(std::move(row));
    }

    std::string render_csv(const Table &table)
    {
        std::ostringstream out;
        for (std::size_t i = 0; i < table.columns.size(); ++i)
        {
            if (i)
                out << ',';
            out << csv_escape(table.columns[i].name);
            if (table.columns[i].type == ColumnType::rational)
                out << ',' << csv_escape(table.columns[i].name + "_dec");
        }
        out << '\n';

        for (const auto &row : table.rows)
        {
            for (std::size_t i = 0; i < row.size(); ++i)
            {
                if (i)
                    out << ',';
                const auto &cell = row[i];
                const bool rational_col = table.columns[i].type == ColumnType::rational;
                if (std::holds_alternative<std::monostate>(cell))
                {
                    if (rational_col)
                        out << ',';
                }
                else if (const auto *v = std::get_if<std::int64_t>(&cell))
                    out << *v;
                else if (const auto *d = std::get_if<double>(&cell))
                    out << to_decimal_string(*d);
                else if (const auto *r = std::get_if<Rational>(&cell))
                    out << to_string(*r) << ',' << to_decimal_string(*r);
                else
                    out << csv_escape(std::get<std::string>(cell));
            }
            out << '\n';
        }
        return out.str();
    }

    std::string render_json(const Table &table)
    {
        nlohmann::ordered_json meta;
        meta["command"] = table.meta.command;
        meta["M"] = table.meta.relays ? nlohmann::ordered_json(*table.meta.relays) : nlohmann::ordered_json();
        meta["K"] = table.meta.users ? nlohmann::ordered_json(*table.meta.users) : nlohmann::ordered_json();
        meta["seed"] = table.meta.seed ? nlohmann::ordered_json(*table.meta.seed) : nlohmann::ordered_json();
        meta["tol"] = table.meta.tol ? nlohmann::ordered_json(*table.meta.tol) : nlohmann::ordered_json();
        meta["version"] = version;
        meta["columns"] = nlohmann::ordered_json::array();
        for (const auto &c : table.columns)
            meta["columns"].push_back({{"name", c.name}, {"type", type_name(c.type)}});
        meta["summary"] = nlohmann::ordered_json::parse(table.meta.summary.dump());

        nlohmann::ordered_json data = nlohmann::ordered_json::array();
        for (const auto &row : table.rows)
        {
            nlohmann::ordered_json obj = nlohmann::ordered_json::object();
            for (std::size_t i = 0; i < row.size(); ++i)
            {
                const auto &name = table.columns[i].name;
                const auto &cell = row[i];
                if (std::holds_alternative<std::monostate>(cell))
                {
                    obj[name] = nullptr;
                    if (table.columns[i].type == ColumnType::rational)
                        obj[name + "_dec"] = nullptr;
                }
                else if (const auto *v = std::get_if<std::int64_t>(&cell))
                    obj[name] = *v;
                else if (const auto *d = std::get_if<double>(&cell))
                    obj[name] = real_to_json(*d);
                else if (const auto *r = std::get_if<Rational>(&cell))
                {
                    obj[name] = to_string(*r);
                    obj[name + "_dec"] = to_double(*r);
                }
                else
                    obj[name] = std::get<std::string>(cell);
            }
            data.push_back(std::move(obj));
        }

        nlohmann::ordered_json doc;
        doc["meta"] = std::move(meta);
        doc["data"] = std::move(data);
        return doc.dump(2) + "\n";
    }

    std::string render(const Table &table, OutputFormat format)
    {
        return format == OutputFormat::csv ? render_csv(table) : render_json(table);
    }

    Table parse_json_table(const std::string &text)
    {
        const auto doc = nlohmann::json::parse(text);
        const auto &meta = doc.at("meta");

        Table table;
        table.meta.command = meta.at("command").get<std::string>();
        if (!meta.at("M").is_null())
            table.meta.relays = meta.at("M").get<int>();
        if (!meta.at("K").is_null())
            table.meta.users = meta.at("K").get<int>();
        if (!meta.at("seed").is_null())
            table.meta.seed = meta.at("seed").get<std::uint64_t>();
        if (!meta.at("tol").is_null())
            table.meta.tol = meta.at("tol").get<double>();
        table.meta.summary = meta.at("summary");
        for (const auto &c : meta.at("columns"))
            table.columns.push_back({c.at("name").get<std::string>(), type_from_name(c.at("type").get<std::string>())});

        for (const auto &obj : doc.at("data"))
        {
            std::vector<Cell> row;
            for (const auto &col : table.columns)
            {
                const auto &v = obj.at(col.name);
                if (v.is_null())
                {
                    row.emplace_back(std::monostate{});
                    continue;
                }
                switch (col.type)
                {
                case ColumnType::integer:
                    row.emplace_back(v.get<std::int64_t>());
                    break;
                case ColumnType::real:
                    row.emplace_back(real_from_json(v));
                    break;
                case ColumnType::rational:
                    row.emplace_back(parse_rational(v.get<std::string>()));
                    break;
                case ColumnType::text:
                    row.emplace_back(v.get<std::string>());
                    break;
                }
            }
            table.add_row(std::move(row));
        }
        return table;
    }

    std::size_t emit(const Table &table, OutputFormat format, const std::filesystem::path &path)
    {
        const std::string bytes = render(table, format);
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open '" + path.string() + "' for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.close();
        if (!out)
            throw std::runtime_error("failed writing '" + path.string() + "'");
        return bytes.size();
    }
}
