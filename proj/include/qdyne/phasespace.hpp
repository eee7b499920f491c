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

#include <vector>

#include "qdyne/common.hpp"

// Phase-space functions of a cavity state on a rectangular (q, p) grid with
// z = (q + ip)/sqrt(2).
//
//   husimi_q : Q(z) = <z|rho|z>/pi, nonnegative; the phase-space measure in
//              (q, p) coordinates is dq dp / 2, which PhaseFunction::measure
//              records, so integral() and marginal_q() are convention-safe.
//   wigner   : W(q, p) normalized to integrate to 1 against dq dp, evaluated
//              through the Fock-basis Laguerre closed form; its p-marginal is
//              the sharp position density.
//   smeared_marginal : convolution with exp(-(q-q')^2)/sqrt(pi); maps the
//              sharp marginal onto the Husimi marginal.

namespace qdyne {

struct PhaseGrid {
    double q_min = -6.0, q_max = 6.0;
    double p_min = -6.0, p_max = 6.0;
    int n_q = 201, n_p = 201;

    void validate() const;
    double dq() const { return (q_max - q_min) / (n_q - 1); }
    double dp() const { return (p_max - p_min) / (n_p - 1); }
    double q(int i) const { return q_min + i * dq(); }
    double p(int j) const { return p_min + j * dp(); }
};

struct PhaseFunction {
    PhaseGrid grid;
    Eigen::MatrixXd values;     // values(i, j) at (q_i, p_j)
    double measure = 1.0;       // Jacobian onto dq dp
    double corner_deficiency = 0.0;
    bool truncation_warning = false;
};

PhaseFunction husimi_q(const Matrix& rho_c, const PhaseGrid& grid);
PhaseFunction wigner(const Matrix& rho_c, const PhaseGrid& grid);

/// Trapezoid integral against dq dp, including the measure factor.
double integral(const PhaseFunction& f);

/// Density in q after integrating out p (Husimi marginals come out in the
/// physical-q normalization).
std::vector<double> marginal_q(const PhaseFunction& f);

/// Gaussian smearing with kernel exp(-(q-q')^2)/sqrt(pi) on the same grid.
/// Throws NumericError when the input carries non-negligible mass near the
/// grid edges.
std::vector<double> smeared_marginal(const std::vector<double>& density,
                                     const std::vector<double>& q_points);

std::vector<double> grid_q_points(const PhaseGrid& grid);

}  // namespace qdyne
