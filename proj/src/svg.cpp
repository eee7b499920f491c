// Copyright 2026 qdyne authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qdyne/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace qdyne {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 55;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Range {
    double lo = 0.0, hi = 1.0;
    void expand(double v) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
};

std::string rgb(double r, double g, double b) {
    char buf[16];
    auto clamp255 = [](double x) { return static_cast<int>(std::clamp(x, 0.0, 1.0) * 255.0); };
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", clamp255(r), clamp255(g), clamp255(b));
    return buf;
}

}  // namespace

void write_line_svg(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<LineSeries>& series) {
    Range xr, yr;
    bool any = false;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!any) {
                xr.lo = xr.hi = s.x[i];
                yr.lo = yr.hi = s.y[i];
                any = true;
            }
            xr.expand(s.x[i]);
            yr.expand(s.y[i]);
        }
    }
    if (!any) {
        xr = {0, 1};
        yr = {0, 1};
    }
    if (yr.hi - yr.lo < 1e-12) {
        yr.lo -= 0.5;
        yr.hi += 0.5;
    }
    const double pw = kWidth - kMarginLeft - kMarginRight;
    const double ph = kHeight - kMarginTop - kMarginBottom;
    auto sx = [&](double x) { return kMarginLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto sy = [&](double y) { return kMarginTop + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_line_svg: cannot write " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight
        << "' viewBox='0 0 " << kWidth << " " << kHeight << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << kWidth / 2 << "' y='24' text-anchor='middle' font-size='16' "
        << "font-family='sans-serif'>" << title << "</text>\n";

    // Axes with a handful of ticks.
    out << "<rect x='" << kMarginLeft << "' y='" << kMarginTop << "' width='" << pw << "' height='"
        << ph << "' fill='none' stroke='#333'/>\n";
    for (int k = 0; k <= 5; ++k) {
        const double fx = xr.lo + (xr.hi - xr.lo) * k / 5.0;
        const double fy = yr.lo + (yr.hi - yr.lo) * k / 5.0;
        out << "<line x1='" << sx(fx) << "' y1='" << kMarginTop + ph << "' x2='" << sx(fx)
            << "' y2='" << kMarginTop + ph + 5 << "' stroke='#333'/>\n";
        out << "<text x='" << sx(fx) << "' y='" << kMarginTop + ph + 20
            << "' text-anchor='middle' font-size='11' font-family='sans-serif'>" << num(fx)
            << "</text>\n";
        out << "<line x1='" << kMarginLeft - 5 << "' y1='" << sy(fy) << "' x2='" << kMarginLeft
            << "' y2='" << sy(fy) << "' stroke='#333'/>\n";
        out << "<text x='" << kMarginLeft - 8 << "' y='" << sy(fy) + 4
            << "' text-anchor='end' font-size='11' font-family='sans-serif'>" << num(fy)
            << "</text>\n";
    }
    out << "<text x='" << kMarginLeft + pw / 2 << "' y='" << kHeight - 12
        << "' text-anchor='middle' font-size='13' font-family='sans-serif'>" << x_label
        << "</text>\n";
    out << "<text x='18' y='" << kMarginTop + ph / 2
        << "' text-anchor='middle' font-size='13' font-family='sans-serif' transform='rotate(-90 18 "
        << kMarginTop + ph / 2 << ")'>" << y_label << "</text>\n";

    int legend_y = kMarginTop + 14;
    for (const auto& s : series) {
        if (s.x.empty()) continue;
        out << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.6'";
        if (s.dashed) out << " stroke-dasharray='6 4'";
        out << " points='";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << num(sx(s.x[i])) << "," << num(sy(s.y[i])) << " ";
        out << "'/>\n";
        if (!s.label.empty()) {
            out << "<line x1='" << kMarginLeft + pw - 150 << "' y1='" << legend_y << "' x2='"
                << kMarginLeft + pw - 125 << "' y2='" << legend_y << "' stroke='" << s.color
                << "' stroke-width='2'" << (s.dashed ? " stroke-dasharray='6 4'" : "") << "/>\n";
            out << "<text x='" << kMarginLeft + pw - 118 << "' y='" << legend_y + 4
                << "' font-size='12' font-family='sans-serif'>" << s.label << "</text>\n";
            legend_y += 18;
        }
    }
    out << "</svg>\n";
}

void write_heatmap_svg(const std::string& path, const std::string& title,
                       const PhaseFunction& f) {
    const auto& v = f.values;
    const double vmax = v.maxCoeff();
    const double vmin = v.minCoeff();
    const bool diverging = vmin < -1e-12;
    const double scale = std::max(std::abs(vmax), std::abs(vmin));

    const int stride_q = std::max(1, f.grid.n_q / 160);
    const int stride_p = std::max(1, f.grid.n_p / 160);
    const int nq = (f.grid.n_q + stride_q - 1) / stride_q;
    const int np = (f.grid.n_p + stride_p - 1) / stride_p;

    const double pw = kWidth - kMarginLeft - kMarginRight;
    const double ph = kHeight - kMarginTop - kMarginBottom;
    const double cw = pw / nq;
    const double ch = ph / np;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_heatmap_svg: cannot write " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight
        << "' viewBox='0 0 " << kWidth << " " << kHeight << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << kWidth / 2 << "' y='24' text-anchor='middle' font-size='16' "
        << "font-family='sans-serif'>" << title << "</text>\n";

    for (int bi = 0; bi < nq; ++bi) {
        for (int bj = 0; bj < np; ++bj) {
            const int i = std::min(bi * stride_q, f.grid.n_q - 1);
            const int j = std::min(bj * stride_p, f.grid.n_p - 1);
            const double val = scale > 0 ? v(i, j) / scale : 0.0;
            std::string color;
            if (diverging) {
                // blue (negative) - white - red (positive)
                color = val >= 0 ? rgb(1.0, 1.0 - val, 1.0 - val) : rgb(1.0 + val, 1.0 + val, 1.0);
            } else {
                color = rgb(1.0 - 0.85 * val, 1.0 - 0.55 * val, 1.0 - 0.2 * val);
            }
            const double x = kMarginLeft + bi * cw;
            const double y = kMarginTop + ph - (bj + 1) * ch;
            out << "<rect x='" << num(x) << "' y='" << num(y) << "' width='" << num(cw + 0.5)
                << "' height='" << num(ch + 0.5) << "' fill='" << color << "'/>\n";
        }
    }
    out << "<rect x='" << kMarginLeft << "' y='" << kMarginTop << "' width='" << pw << "' height='"
        << ph << "' fill='none' stroke='#333'/>\n";
    out << "<text x='" << kMarginLeft + pw / 2 << "' y='" << kHeight - 12
        << "' text-anchor='middle' font-size='13' font-family='sans-serif'>q</text>\n";
    out << "<text x='18' y='" << kMarginTop + ph / 2
        << "' text-anchor='middle' font-size='13' font-family='sans-serif' transform='rotate(-90 18 "
        << kMarginTop + ph / 2 << ")'>p</text>\n";
    out << "<text x='" << kMarginLeft << "' y='" << kMarginTop - 8
        << "' font-size='11' font-family='sans-serif'>min " << num(vmin) << ", max " << num(vmax)
        << "</text>\n";
    out << "</svg>\n";
}

}  // namespace qdyne
