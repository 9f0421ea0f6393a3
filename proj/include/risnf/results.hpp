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

#ifndef RISNF_RESULTS_HPP
#define RISNF_RESULTS_HPP

#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace risnf
{
    using Cell = std::variant<double, long long, std::string>;

    // Rectangular table of results plus the metadata needed to reproduce it
    class ResultTable
    {
    public:
        explicit ResultTable(std::vector<std::string> columns = {});

        const std::vector<std::string> &columns() const { return columns_; }
        const std::vector<std::vector<Cell>> &rows() const { return rows_; }
        const std::vector<std::pair<std::string, std::string>> &metadata() const { return metadata_; }

        void add_row(std::vector<Cell> row);
        void set_metadata(const std::string &key, const std::string &value);
        std::string metadata_value(const std::string &key) const; // empty when absent

        // Refuses tables missing any of config_hash, seed, version, timestamp
        void validate() const;

    private:
        std::vector<std::string> columns_;
        std::vector<std::vector<Cell>> rows_;
        std::vector<std::pair<std::string, std::string>> metadata_;
    };

    inline const std::vector<std::string> &required_metadata()
    {
        static const std::vector<std::string> keys{"config_hash", "seed", "version", "timestamp"};
        return keys;
    }

    std::string format_cell(const Cell &cell);

    // "# key=value" lines, a header row, then one line per row
    std::string to_csv(const ResultTable &table);
    void write_csv(const ResultTable &table, const std::filesystem::path &path);

    struct CsvDocument
    {
        std::vector<std::pair<std::string, std::string>> metadata;
        std::vector<std::string> columns;
        std::vector<std::vector<std::string>> rows;

        std::size_t column(const std::string &name) const; // Io error when missing
        std::string metadata_value(const std::string &key) const;
    };

    CsvDocument parse_csv(const std::string &text);
    CsvDocument read_csv(const std::filesystem::path &path);

    std::string utc_timestamp();
}

#endif
