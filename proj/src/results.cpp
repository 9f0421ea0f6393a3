// SPDX-License-Identifier: Apache-2.0
//
// risnf: near-field RIS channel modelling and estimation library
// Copyright (C) 2026 The risnf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "risnf/results.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "risnf/errors.hpp"

namespace risnf
{
    ResultTable::ResultTable(std::vector<std::string> columns) : columns_(std::move(columns))
    {
        for (const auto &c : columns_)
            require(!c.empty() && c.find_first_of(",\n\"") == std::string::npos, "bad column name '" + c + "'");
    }

    void ResultTable::add_row(std::vector<Cell> row)
    {
        require(row.size() == columns_.size(), "row width " + std::to_string(row.size()) + " does not match " +
                                                   std::to_string(columns_.size()) + " columns");
        for (const Cell &cell : row)
            if (const auto *text = std::get_if<std::string>(&cell))
                require(text->find_first_of(",\n\"") == std::string::npos, "text cell '" + *text + "' needs quoting");
        rows_.push_back(std::move(row));
    }

    void ResultTable::set_metadata(const std::string &key, const std::string &value)
    {
        require(!key.empty() && key.find_first_of("=\n") == std::string::npos, "bad metadata key");
        require(value.find('\n') == std::string::npos, "metadata value must be a single line");
        for (auto &kv : metadata_)
            if (kv.first == key)
            {
                kv.second = value;
                return;
            }
        metadata_.emplace_back(key, value);
    }

    std::string ResultTable::metadata_value(const std::string &key) const
    {
        for (const auto &kv : metadata_)
            if (kv.first == key)
                return kv.second;
        return {};
    }

    void ResultTable::validate() const
    {
        for (const auto &key : required_metadata())
            require(!metadata_value(key).empty(), "result table lacks metadata '" + key + "'");
    }

    std::string format_cell(const Cell &cell)
    {
        if (const auto *d = std::get_if<double>(&cell))
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.12g", *d);
            return buf;
        }
        if (const auto *i = std::get_if<long long>(&cell))
            return std::to_string(*i);
        return std::get<std::string>(cell);
    }

    std::string to_csv(const ResultTable &table)
    {
        table.validate();
        std::ostringstream out;
        for (const auto &[k, v] : table.metadata())
            out << "# " << k << '=' << v << '\n';
        for (std::size_t c = 0; c < table.columns().size(); ++c)
            out << (c ? "," : "") << table.columns()[c];
        out << '\n';
        for (const auto &row : table.rows())
        {
            for (std::size_t c = 0; c < row.size(); ++c)
                out << (c ? "," : "") << format_cell(row[c]);
            out << '\n';
        }
        return out.str();
    }

    void write_csv(const ResultTable &table, const std::filesystem::path &path)
    {
        const std::string text = to_csv(table);
        const auto tmp = std::filesystem::path(path.string() + ".tmp");
        {
            std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
            if (!f)
                fail(ErrorKind::Io, "cannot open " + tmp.string() + " for writing");
            f << text;
            if (!f.flush())
                fail(ErrorKind::Io, "write failed for " + tmp.string());
        }
        std::error_code ec;
        std::filesystem::rename(tmp, path, ec);
        if (ec)
            fail(ErrorKind::Io, "cannot rename " + tmp.string() + ": " + ec.message());
    }

    std::size_t CsvDocument::column(const std::string &name) const
    {
        for (std::size_t c = 0; c < columns.size(); ++c)
            if (columns[c] == name)
                return c;
        fail(ErrorKind::Io, "CSV has no column '" + name + "'");
    }

    std::string CsvDocument::metadata_value(const std::string &key) const
    {
        for (const auto &kv : metadata)
            if (kv.first == key)
                return kv.second;
        return {};
    }

    namespace
    {
        std::vector<std::string> split(const std::string &line)
        {
            std::vector<std::string> out;
            std::string field;
            std::istringstream in(line);
            while (std::getline(in, field, ','))
                out.push_back(field);
            if (!line.empty() && line.back() == ',')
                out.emplace_back();
            return out;
        }
    }

    CsvDocument parse_csv(const std::string &text)
    {
        CsvDocument doc;
        std::istringstream in(text);
        std::string line;
        std::size_t line_no = 0;
        bool header = false;
        while (std::getline(in, line))
        {
            ++line_no;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (line.empty())
                continue;
            if (!header && line.rfind("# ", 0) == 0)
            {
                const auto eq = line.find('=');
                if (eq == std::string::npos)
                    fail(ErrorKind::Io, "CSV line " + std::to_string(line_no) + ": malformed metadata");
                doc.metadata.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
                continue;
            }
            auto fields = split(line);
            if (!header)
            {
                doc.columns = std::move(fields);
                header = true;
                continue;
            }
            if (fields.size() != doc.columns.size())
                fail(ErrorKind::Io, "CSV line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(doc.columns.size()) + " fields, found " +
                                        std::to_string(fields.size()));
            doc.rows.push_back(std::move(fields));
        }
        if (!header)
            fail(ErrorKind::Io, "CSV has no header row");
        return doc;
    }

    CsvDocument read_csv(const std::filesystem::path &path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            fail(ErrorKind::Io, "cannot open " + path.string());
        std::ostringstream buf;
        buf << f.rdbuf();
        return parse_csv(buf.str());
    }

    std::string utc_timestamp()
    {
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&now, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }
}
