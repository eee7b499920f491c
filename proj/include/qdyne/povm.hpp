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

#include "qdyne/compat.hpp"
#include "qdyne/integrate.hpp"

// Reconstruction of the record-conditioned qubit effect F_t. Four initial
// states (the maximally mixed state and the three Pauli mixtures) are
// propagated on the same noise record; the unnormalized traces q_i(t) give
//   mu_t = q_0,  a_i(t) = q_i - q_0,
// so F_0 is the unit four-vector (1, 0) and the ensemble mean over records
// stays (1, 0) for every unraveling. Pathwise every F_t is positive
// (|a| <= mu); the bias window mu <= 2 - |a| is tracked as a diagnostic.

namespace qdyne {

/// 2x2 effect (mu*I + a.sigma)/2.
Matrix povm_matrix(const QubitFourVector& v);

struct PovmDiagnostics {
    int positivity_violations = 0;   // eigenvalue below -1e-6
    int window_violations = 0;       // mu above 2 - |a| + 1e-6
    double min_eigenvalue = 1.0;     // min over time of (mu - |a|)/2
    double max_window_excess = -2.0; // max over time of mu + |a| - 2

    void absorb(const QubitFourVector& v);
    void merge(const PovmDiagnostics& other);
};

struct PovmTrajectory {
    std::vector<double> times;
    std::vector<QubitFourVector> fourvectors;
    SchemeKind scheme = SchemeKind::LinearQsd;
    std::uint64_t stream_id = 0;
    PovmDiagnostics diag;
};

/// Tomographic reconstruction along one noise record. Composite schemes embed
/// the qubit states as rho (x) |psi_C><psi_C|; adiabatic schemes propagate the
/// bare qubit states; the hierarchy requires a vacuum cavity.
PovmTrajectory reconstruct_povm(const SchemeSpec& spec, const CavityState& cavity,
                                const ComplexNoisePath& noise, const IntegratorConfig& cfg,
                                std::uint64_t stream_id);

struct NormalizationReport {
    std::vector<double> times;
    std::vector<QubitFourVector> mean;  // ensemble-mean four-vector
    std::vector<Eigen::Vector4d> sem;   // sem of (mu, ax, ay, az)
    double max_abs_deviation = 0.0;     // operator norm of mean effect - I/2
    double max_dev_over_sem = 0.0;      // worst component z-score
    int trajectories = 0;
};

/// Monte Carlo check that the mean reconstructed effect is the unit
/// four-vector (1, 0), i.e. the t = 0 effect, at every recorded time.
NormalizationReport mc_normalization_check(const SchemeSpec& spec, const CavityState& cavity,
                                           const EnsembleConfig& ens, const NoiseParams& noise_base,
                                           const IntegratorConfig& cfg);

}  // namespace qdyne
