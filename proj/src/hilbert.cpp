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

#include "qdyne/hilbert.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace qdyne {

namespace {
const Complex kI{0.0, 1.0};
}

Matrix qubit_identity() { return Matrix::Identity(2, 2); }

Matrix sigma_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix sigma_y() {
    Matrix m(2, 2);
    m << 0, -kI, kI, 0;
    return m;
}

Matrix sigma_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Matrix sigma_plus() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;
    return m;
}

Matrix sigma_minus() {
    Matrix m = Matrix::Zero(2, 2);
    m(1, 0) = 1.0;
    return m;
}

Matrix build_annihilation(int n_fock) {
    if (n_fock < 2) throw std::invalid_argument("build_annihilation: n_fock must be >= 2");
    Matrix a = Matrix::Zero(n_fock, n_fock);
    for (int n = 1; n < n_fock; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Vector fock_state(int n, int n_fock) {
    if (n < 0 || n >= n_fock) throw std::invalid_argument("fock_state: level out of range");
    Vector v = Vector::Zero(n_fock);
    v(n) = 1.0;
    return v;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix lift_qubit(const Matrix& op, int n_fock) {
    return kron(op, Matrix::Identity(n_fock, n_fock));
}

Matrix lift_cavity(const Matrix& op) { return kron(Matrix::Identity(2, 2), op); }

Matrix build_jc_hamiltonian(double omega_a, double omega_c, double g, int n_fock,
                            InteractionConvention convention) {
    if (n_fock < 2) throw std::invalid_argument("build_jc_hamiltonian: n_fock must be >= 2");
    const Matrix a = build_annihilation(n_fock);
    const Matrix ad = a.adjoint();
    Matrix h = 0.5 * omega_a * lift_qubit(sigma_z(), n_fock) + omega_c * lift_cavity(ad * a);
    if (convention == InteractionConvention::MainText) {
        h += g * (kron(sigma_minus(), a) + kron(sigma_plus(), ad));
    } else {
        h += g * (kron(sigma_minus(), ad) + kron(sigma_plus(), a));
    }
    return h;
}

Vector build_squeezed_vacuum(double s, int n_fock) {
    if (std::abs(s) > 0.5) throw std::invalid_argument("build_squeezed_vacuum: |s| must be <= 0.5");
    if (n_fock < 2) throw std::invalid_argument("build_squeezed_vacuum: n_fock must be >= 2");
    const Matrix a = build_annihilation(n_fock);
    const Matrix a2 = a * a;
    const Matrix gen = 0.5 * s * (a2 - a2.adjoint());
    Vector v = gen.exp().col(0);
    // The truncated generator is anti-Hermitian, so the norm stays 1 even for
    // inadequate truncations; adequacy is judged by the mass sitting on the
    // top two levels instead.
    const double tail = std::norm(v(n_fock - 1)) + std::norm(v(n_fock - 2));
    if (tail >= 1e-8) {
        throw TruncationError("build_squeezed_vacuum: top-level mass " + std::to_string(tail) +
                              " >= 1e-8, increase n_fock");
    }
    v.normalize();
    return v;
}

Matrix partial_trace_cavity(const Matrix& rho, int n_fock) {
    if (rho.rows() != 2 * n_fock || rho.cols() != 2 * n_fock)
        throw std::invalid_argument("partial_trace_cavity: dimension mismatch");
    Matrix out = Matrix::Zero(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int n = 0; n < n_fock; ++n) out(i, j) += rho(i * n_fock + n, j * n_fock + n);
    return out;
}

Vector CavityState::state_vector() const {
    if (kind == Kind::Vacuum) return fock_state(0, n_fock);
    return build_squeezed_vacuum(s, n_fock);
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (mat + mat.adjoint()));
    return es.eigenvalues().minCoeff();
}

void DensityMatrix::require_valid() const {
    if (hermiticity_error() > 1e-12)
        throw NumericError("DensityMatrix: hermiticity error above 1e-12");
    if (normalized) {
        if (trace_deviation() > 1e-10) throw NumericError("DensityMatrix: trace deviates from 1");
        if (min_eigenvalue() < -1e-10) throw NumericError("DensityMatrix: negative eigenvalue");
    }
}

}  // namespace qdyne
