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

#include <Eigen/Dense>

#include "qdyne/common.hpp"

// Exact algebra on qubit effects F = (mu*I + a.sigma)/2 written as
// four-vectors v = (mu, a). The Minkowski product <v,v'> = mu mu' - a.a'
// underlies the positivity cone (|a| <= mu <= 2 - |a|), the sharpness
// quantifier S in [0,1] and the pair-compatibility quantifier C, whose sign
// decides joint measurability.

namespace qdyne {

struct QubitFourVector {
    double mu = 1.0;
    Eigen::Vector3d bloch = Eigen::Vector3d::Zero();

    double bloch_norm() const { return bloch.norm(); }

    /// Complement effect I - F: (2 - mu, -a).
    QubitFourVector perp() const { return {2.0 - mu, -bloch}; }
};

double minkowski(const QubitFourVector& v, const QubitFourVector& w);

/// S = ( <v,vp> - sqrt(<v,v><vp,vp>) ) / 2; 1 for projectors, 0 for the
/// trivial coin. Minkowski squares below -cone_tol throw NumericError; tiny
/// negatives are clamped to zero.
double sharpness(const QubitFourVector& v, double cone_tol = 1e-12);

/// C >= 0 iff the two effects are jointly measurable.
double compatibility(const QubitFourVector& v, const QubitFourVector& w, double cone_tol = 1e-12);

struct BiasBounds {
    double lower = 0.0;  // |a|
    double upper = 2.0;  // 2 - |a|
    bool in_window = true;
};

BiasBounds bias_bounds(const QubitFourVector& v, double tol = 1e-6);

/// Trace-rescaled effect (1, a/mu); optional sensitivity knob, off by default
/// everywhere in the pipeline.
QubitFourVector trace_rescaled(const QubitFourVector& v);

}  // namespace qdyne
