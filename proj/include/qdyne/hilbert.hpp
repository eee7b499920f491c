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

#include "qdyne/common.hpp"

// Operators and states on the qubit (x) truncated-cavity Hilbert space.
//
// Conventions used throughout:
//   - Qubit basis |0> = excited, |1> = ground, so sigma_z = diag(1, -1),
//     sigma_minus = |1><0| de-excites and generates amplitude damping,
//     sigma_plus = |0><1|.
//   - Composite ordering is qubit (x) cavity; index = q * n_fock + n.
//   - Scaled units hbar = 1; all rates in units of the qubit frequency.

namespace qdyne {

Matrix qubit_identity();
Matrix sigma_x();
Matrix sigma_y();
Matrix sigma_z();
Matrix sigma_plus();
Matrix sigma_minus();

/// Truncated annihilation operator; <n-1|a|n> = sqrt(n). Requires n_fock >= 2.
Matrix build_annihilation(int n_fock);

/// Fock basis vector |n| in an n_fock-dimensional space.
Vector fock_state(int n, int n_fock);

/// Kronecker product, dim = rows(a)*rows(b).
Matrix kron(const Matrix& a, const Matrix& b);

/// Lift a 2x2 qubit operator to the composite space.
Matrix lift_qubit(const Matrix& op, int n_fock);

/// Lift a cavity operator to the composite space.
Matrix lift_cavity(const Matrix& op);

enum class InteractionConvention {
    MainText,  // g (sigma_- a + sigma_+ a^dag)
    Appendix,  // g (sigma_- a^dag + sigma_+ a), the excitation-exchange form
};

/// Qubit-cavity Hamiltonian (omega_a/2) sigma_z + omega_c a^dag a + interaction.
Matrix build_jc_hamiltonian(double omega_a, double omega_c, double g, int n_fock,
                            InteractionConvention convention = InteractionConvention::MainText);

/// exp((s/2)(a^2 - a^dag^2)) |0> at truncation n_fock, renormalized.
/// Throws TruncationError when the top-level tail mass is >= 1e-8 and
/// std::invalid_argument for |s| > 0.5.
Vector build_squeezed_vacuum(double s, int n_fock);

/// Reduced qubit operator of a composite operator (dimension 2*n_fock).
Matrix partial_trace_cavity(const Matrix& rho, int n_fock);

/// Pure cavity preparation used as the initial state of a run.
struct CavityState {
    enum class Kind { Vacuum, Squeezed };

    Kind kind = Kind::Vacuum;
    double s = 0.0;
    int n_fock = 15;

    Vector state_vector() const;
};

/// Density matrix plus bookkeeping for the linear (trace non-preserving) runs.
struct DensityMatrix {
    Matrix mat;
    bool normalized = true;

    double hermiticity_error() const { return qdyne::hermiticity_error(mat); }
    double trace_deviation() const { return std::abs(mat.trace().real() - 1.0); }
    double min_eigenvalue() const;

    /// Hermiticity to 1e-12; when flagged normalized, trace 1 +- 1e-10 and
    /// min eigenvalue >= -1e-10. Throws NumericError otherwise.
    void require_valid() const;
};

}  // namespace qdyne
