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

#include "qdyne/compat.hpp"

#include <cmath>

namespace qdyne {

namespace {

double clamped_square(double value, double cone_tol, const char* what) {
    if (value < -cone_tol)
        throw NumericError(std::string(what) + ": Minkowski square " + std::to_string(value) +
                           " below -" + std::to_string(cone_tol) + " (invalid effect)");
    return value < 0.0 ? 0.0 : value;
}

}  // namespace

double minkowski(const QubitFourVector& v, const QubitFourVector& w) {
    return v.mu * w.mu - v.bloch.dot(w.bloch);
}

double sharpness(const QubitFourVector& v, double cone_tol) {
    const QubitFourVector vp = v.perp();
    const double nv = clamped_square(minkowski(v, v), cone_tol, "sharpness");
    const double np = clamped_square(minkowski(vp, vp), cone_tol, "sharpness");
    return 0.5 * (minkowski(v, vp) - std::sqrt(nv * np));
}

double compatibility(const QubitFourVector& v, const QubitFourVector& w, double cone_tol) {
    const QubitFourVector vp = v.perp();
    const QubitFourVector wp = w.perp();
    const double nv = clamped_square(minkowski(v, v), cone_tol, "compatibility");
    const double nvp = clamped_square(minkowski(vp, vp), cone_tol, "compatibility");
    const double nw = clamped_square(minkowski(w, w), cone_tol, "compatibility");
    const double nwp = clamped_square(minkowski(wp, wp), cone_tol, "compatibility");
    return std::sqrt(nv * nvp * nw * nwp) - minkowski(v, vp) * minkowski(w, wp) +
           minkowski(v, wp) * minkowski(vp, w) + minkowski(v, w) * minkowski(vp, wp);
}

BiasBounds bias_bounds(const QubitFourVector& v, double tol) {
    BiasBounds b;
    b.lower = v.bloch_norm();
    b.upper = 2.0 - b.lower;
    b.in_window = (v.mu >= b.lower - tol) && (v.mu <= b.upper + tol);
    return b;
}

QubitFourVector trace_rescaled(const QubitFourVector& v) {
    if (!(v.mu > 0.0)) throw std::invalid_argument("trace_rescaled: mu must be positive");
    return {1.0, v.bloch / v.mu};
}

}  // namespace qdyne
