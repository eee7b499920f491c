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

// Independent reference computations used by the unit and acceptance suites.
// Everything here deliberately avoids the production code paths it checks.

#include <vector>

#include "qdyne/compat.hpp"
#include "qdyne/common.hpp"

namespace qdyne::oracles {

/// Analytic squeezed-vacuum Fock amplitudes c_{2n} = (-tanh s)^n
/// sqrt((2n)!)/(2^n n!) / sqrt(cosh s); odd entries zero.
std::vector<double> squeezed_amplitudes(double s, int n_fock);

/// |psi_n(q)|^2 for harmonic-oscillator eigenstates with <q^2>_0 = 1/2.
double hermite_density(int n, double q);

/// Closed-form amplitude-damped qubit state: decay rate 2*gamma on the
/// excited population, gamma + i(omega_a - omega) on the coherence.
Matrix damped_qubit(const Matrix& rho0, double omega_a, double gamma, double omega, double t);

/// exp(superoperator) solution of d rho = K rho + rho K^dag (+ kappa A rho
/// A^dag when include_sandwich), via dense vectorization. Small dims only.
Matrix drift_exponential_solution(const Matrix& k, const Matrix& a, double kappa,
                                  bool include_sandwich, const Matrix& rho0, double t);

/// Trace norm (sum of singular values).
double trace_norm(const Matrix& m);

/// Brute-force joint-measurability decision for a pair of valid effects:
/// maximizes the minimal positivity margin over the 4-outcome joint-effect
/// polytope (a concave problem) by multistart pattern search.
/// Returns the best margin; >= 0 means jointly measurable.
double joint_povm_margin(const QubitFourVector& v, const QubitFourVector& w);

/// Exact covariance of the zero-initialized OU discretization.
double ou_covariance(double kappa, double gamma_ou, double t, double s);

/// Wigner function from its integral definition (numerical quadrature over
/// the off-diagonal coordinate), position wavefunctions from Hermite
/// recursion. Slow; test use only.
double wigner_by_quadrature(const Matrix& rho, double q, double p);

}  // namespace qdyne::oracles
