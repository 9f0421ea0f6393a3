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

#include "risnf/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "risnf/errors.hpp"

namespace risnf
{
    namespace
    {
        constexpr double panel_width = 720.0;
        constexpr double panel_height = 400.0;
        constexpr double margin_left = 70.0;
        constexpr double margin_right = 230.0;
        constexpr double margin_top = 40.0;
        constexpr double margin_bottom = 50.0;

        const char *const palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                       "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

        struct Series
        {
            std::string label;
            bool dashed = false;
            std::vector<std::pair<double, double>> points;
        };

        struct Panel
        {
            std::string label;
            std::vector<Series> series;
        };

        std::string escape(const std::string &s)
        {
            std::string out;
            for (char c : s)
            {
                switch (c)
                {
                case '&': out += "&amp;"; break;
                case '<': out += "&lt;"; break;
                case '>': out += "&gt;"; break;
                case '"': out += "&quot;"; break;
                default: out += c;
                }
            }
            return out;
        }

        std::string num(double v)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.2f", v);
            return buf;
        }

        std::string tick_label(double v)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
            return buf;
        }

        double parse_number(const std::string &s, const std::string &column)
        {
            char *end = nullptr;
            const double v = std::strtod(s.c_str(), &end);
            if (s.empty() || end != s.c_str() + s.size())
                fail(ErrorKind::Io, "column '" + column + "' holds non-numeric value '" + s + "'");
            return v;
        }

        // Roughly five round-numbered ticks covering [lo, hi]
        std::vector<double> ticks(double lo, double hi)
        {
            const double span = hi - lo;
            const double raw = span / 5.0;
            const double mag = std::pow(10.0, std::floor(std::log10(raw)));
            double step = mag;
            for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
                if (m * mag >= raw)
                {
                    step = m * mag;
                    break;
                }
            std::vector<double> out;
            for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step)
                out.push_back(t);
            return out;
        }

        std::vector<Panel> collect(const CsvDocument &csv, const PlotSpec &spec)
        {
            const std::size_t xc = csv.column(spec.x);
            std::vector<std::size_t> sc;
            for (const auto &s : spec.series)
                sc.push_back(csv.column(s));
            const std::optional<std::size_t> fc =
                spec.facet.empty() ? std::nullopt : std::optional<std::size_t>(csv.column(spec.facet));

            std::vector<Panel> panels;
            std::map<std::string, std::size_t> panel_index;
            std::vector<std::map<std::string, std::size_t>> series_index;
            for (const auto &row : csv.rows)
            {
                const std::string facet = fc ? spec.facet + " = " + row[*fc] : std::string();
                auto [pit, new_panel] = panel_index.emplace(facet, panels.size());
                if (new_panel)
                {
                    panels.push_back({facet, {}});
                    series_index.emplace_back();
                }
                Panel &panel = panels[pit->second];
                std::string key;
                for (std::size_t i = 0; i < sc.size(); ++i)
                    key += (i ? " " : "") + row[sc[i]];
                const double x = parse_number(row[xc], spec.x);
                for (const auto &line : spec.y)
                {
                    const std::string label = key + line.suffix;
                    auto [sit, new_series] = series_index[pit->second].emplace(label, panel.series.size());
                    if (new_series)
                        panel.series.push_back({label.empty() ? line.column : label, line.dashed, {}});
                    const std::string &cell = row[csv.column(line.column)];
                    if (cell.empty())
                        continue;
                    double y = parse_number(cell, line.column);
                    if (!std::isfinite(y))
                        continue;
                    if (spec.y_floor)
                        y = std::max(y, *spec.y_floor);
                    panel.series[sit->second].points.emplace_back(x, y);
                }
            }
            return panels;
        }
    }

    std::string render_svg(const CsvDocument &csv, const PlotSpec &spec)
    {
        require(!spec.y.empty(), "plot needs at least one y column");
        const auto panels = collect(csv, spec);

        double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
        double ymin = xmin, ymax = -xmin;
        for (const auto &p : panels)
            for (const auto &s : p.series)
                for (const auto &[x, y] : s.points)
                {
                    xmin = std::min(xmin, x);
                    xmax = std::max(xmax, x);
                    ymin = std::min(ymin, y);
                    ymax = std::max(ymax, y);
                }
        if (!std::isfinite(xmin))
        {
            xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
        }
        if (xmax - xmin < 1e-12)
            xmin -= 0.5, xmax += 0.5;
        if (ymax - ymin < 1e-12)
            ymin -= 0.5, ymax += 0.5;
        const double pad = 0.05 * (ymax - ymin);
        ymin -= pad;
        ymax += pad;

        const std::size_t count = std::max<std::size_t>(panels.size(), 1);
        const double width = panel_width;
        const double height = 30.0 + count * panel_height;
        const double plot_w = width - margin_left - margin_right;
        const double plot_h = panel_height - margin_top - margin_bottom;

        std::ostringstream svg;
        svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
            << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
        svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        svg << "<text x=\"" << num(width / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">"
            << escape(spec.title) << "</text>\n";

        const auto xt = ticks(xmin, xmax);
        const auto yt = ticks(ymin, ymax);
        for (std::size_t pi = 0; pi < panels.size(); ++pi)
        {
            const Panel &panel = panels[pi];
            const double top = 30.0 + pi * panel_height + margin_top;
            auto sx = [&](double x) { return margin_left + (x - xmin) / (xmax - xmin) * plot_w; };
            auto sy = [&](double y) { return top + (ymax - y) / (ymax - ymin) * plot_h; };

            svg << "<g>\n";
            if (!panel.label.empty())
                svg << "<text x=\"" << num(margin_left + plot_w / 2) << "\" y=\"" << num(top - 8)
                    << "\" text-anchor=\"middle\">" << escape(panel.label) << "</text>\n";
            for (double t : xt)
            {
                svg << "<line x1=\"" << num(sx(t)) << "\" y1=\"" << num(top) << "\" x2=\"" << num(sx(t)) << "\" y2=\""
                    << num(top + plot_h) << "\" stroke=\"#e0e0e0\"/>\n";
                svg << "<text x=\"" << num(sx(t)) << "\" y=\"" << num(top + plot_h + 16)
                    << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
            }
            for (double t : yt)
            {
                svg << "<line x1=\"" << num(margin_left) << "\" y1=\"" << num(sy(t)) << "\" x2=\""
                    << num(margin_left + plot_w) << "\" y2=\"" << num(sy(t)) << "\" stroke=\"#e0e0e0\"/>\n";
                svg << "<text x=\"" << num(margin_left - 6) << "\" y=\"" << num(sy(t) + 4)
                    << "\" text-anchor=\"end\">" << tick_label(t) << "</text>\n";
            }
            svg << "<rect x=\"" << num(margin_left) << "\" y=\"" << num(top) << "\" width=\"" << num(plot_w)
                << "\" height=\"" << num(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
            svg << "<text x=\"" << num(margin_left + plot_w / 2) << "\" y=\"" << num(top + plot_h + 36)
                << "\" text-anchor=\"middle\">" << escape(spec.x_label.empty() ? spec.x : spec.x_label) << "</text>\n";
            svg << "<text transform=\"translate(18," << num(top + plot_h / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
                << escape(spec.y_label.empty() ? spec.y.front().column : spec.y_label) << "</text>\n";

            for (std::size_t si = 0; si < panel.series.size(); ++si)
            {
                const Series &s = panel.series[si];
                const char *color = palette[si % std::size(palette)];
                const char *dash = s.dashed ? " stroke-dasharray=\"6,4\"" : "";
                if (s.points.size() > 1)
                {
                    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"" << dash
                        << " points=\"";
                    for (const auto &[x, y] : s.points)
                        svg << num(sx(x)) << ',' << num(sy(y)) << ' ';
                    svg << "\"/>\n";
                }
                if (s.points.size() <= 40)
                    for (const auto &[x, y] : s.points)
                        svg << "<circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(y)) << "\" r=\"2.5\" fill=\""
                            << color << "\"/>\n";
                const double ly = top + 10 + 16 * si;
                const double lx = margin_left + plot_w + 12;
                svg << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 22) << "\" y2=\""
                    << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"" << dash << "/>\n";
                svg << "<text x=\"" << num(lx + 28) << "\" y=\"" << num(ly + 4) << "\">" << escape(s.label)
                    << "</text>\n";
            }
            svg << "</g>\n";
        }
        svg << "</svg>\n";
        return svg.str();
    }

    void plot_csv(const std::filesystem::path &csv_path, const std::filesystem::path &svg_path, const PlotSpec &spec)
    {
        const std::string svg = render_svg(read_csv(csv_path), spec);
        std::ofstream f(svg_path, std::ios::binary | std::ios::trunc);
        if (!f)
            fail(ErrorKind::Io, "cannot open " + svg_path.string() + " for writing");
        f << svg;
        if (!f.flush())
            fail(ErrorKind::Io, "write failed for " + svg_path.string());
    }
}
