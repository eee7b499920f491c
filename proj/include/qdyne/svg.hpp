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

#pragma once

#include <string>
#include <vector>

#include "qdyne/phasespace.hpp"

// Native SVG emission (no plotting dependency): simple line plots and
// phase-space heatmaps.

namespace qdyne {

struct LineSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::string label;
    std::string color = "#1f6fb2";
    bool dashed = false;
};

void write_line_svg(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<LineSeries>& series);

/// Heatmap of a phase-space function; diverging palette when the data has
/// both signs, sequential otherwise.
void write_heatmap_svg(const std::string& path, const std::string& title,
                       const PhaseFunction& f);

}  // namespace qdyne
