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

#ifndef RISNF_PLOT_HPP
#define RISNF_PLOT_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "risnf/results.hpp"

namespace risnf
{
    struct PlotLine
    {
        std::string column;
        bool dashed = false;
        std::string suffix; // appended to the series label
    };

    // Line chart over CSV columns. Rows are grouped into series by the
    // values of `series` columns and into stacked panels by `facet`.
    struct PlotSpec
    {
        std::string title;
        std::string x;
        std::vector<PlotLine> y;
        std::vector<std::string> series;
        std::string facet; // empty: single panel
        std::string x_label;
        std::string y_label;
        std::optional<double> y_floor; // values below are clipped
    };

    std::string render_svg(const CsvDocument &csv, const PlotSpec &spec);

    // Reads the CSV back from disk so the figure carries nothing the table does not
    void plot_csv(const std::filesystem::path &csv_path, const std::filesystem::path &svg_path, const PlotSpec &spec);
}

#endif
