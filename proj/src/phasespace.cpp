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

#include "qdyne/phasespace.hpp"

#include <cmath>

namespace qdyne {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_density_matrix(const Matrix& rho) {
    if (rho.rows() != rho.cols() || rho.rows() < 1)
        throw std::invalid_argument("phasespace: state must be a square matrix");
    if (hermiticity_error(rho) > 1e-10)
        throw std::invalid_argument("phasespace: state must be Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-8)
        throw std::invalid_argument("phasespace: state must have unit trace");
}

// Coherent-state Fock amplitudes <n|z> up to n_max - 1.
Vector coherent_amplitudes(Complex z, int n_max) {
    Vector c(n_max);
    c(0) = std::exp(-0.5 * std::norm(z));
    for (int n = 1; n < n_max; ++n) c(n) = c(n - 1) * z / std::sqrt(static_cast<double>(n));
    return c;
}

// Mass a coherent state at the grid corners fails to place inside the
// truncation; only meaningful when the state itself fills its top levels.
double corner_coherent_deficiency(const PhaseGrid& grid, int n_max) {
    double worst = 0.0;
    for (double q : {grid.q_min, grid.q_max}) {
        for (double p : {grid.p_min, grid.p_max}) {
            const Complex z{q / std::sqrt(2.0), p / std::sqrt(2.0)};
            const Vector c = coherent_amplitudes(Complex(z.real(), z.imag()), n_max);
            worst = std::max(worst, 1.0 - c.squaredNorm());
        }
    }
    return worst;
}

double top_level_mass(const Matrix& rho) {
    const auto n = rho.rows();
    if (n < 3) return std::abs(rho(n - 1, n - 1).real());
    return std::abs(rho(n - 1, n - 1).real()) + std::abs(rho(n - 2, n - 2).real());
}

// Generalized Laguerre values L_k^{(alpha)}(x) for k = 0..n.
void laguerre_column(int n, int alpha, double x, std::vector<double>& out) {
    out.resize(static_cast<std::size_t>(n) + 1);
    out[0] = 1.0;
    if (n == 0) return;
    out[1] = 1.0 + alpha - x;
    for (int k = 1; k < n; ++k)
        out[static_cast<std::size_t>(k) + 1] =
            ((2.0 * k + alpha + 1.0 - x) * out[static_cast<std::size_t>(k)] -
             (k + alpha) * out[static_cast<std::size_t>(k) - 1]) /
            (k + 1.0);
}

}  // namespace

void PhaseGrid::validate() const {
    if (!(q_max > q_min) || !(p_max > p_min))
        throw std::invalid_argument("PhaseGrid: bounds must be increasing");
    if (n_q < 32 || n_p < 32) throw std::invalid_argument("PhaseGrid: need at least 32 points");
}

PhaseFunction husimi_q(const Matrix& rho_c, const PhaseGrid& grid) {
    grid.validate();
    check_density_matrix(rho_c);
    const int n = static_cast<int>(rho_c.rows());

    PhaseFunction f;
    f.grid = grid;
    f.measure = 0.5;  // dq dp = 2 d^2z
    f.values.resize(grid.n_q, grid.n_p);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < grid.n_q; ++i) {
        for (int j = 0; j < grid.n_p; ++j) {
            const Complex z{grid.q(i) * inv_sqrt2, grid.p(j) * inv_sqrt2};
            const Vector c = coherent_amplitudes(z, n);
            f.values(i, j) = (c.adjoint() * rho_c * c).value().real() / kPi;
        }
    }
    f.corner_deficiency = corner_coherent_deficiency(grid, n);
    f.truncation_warning =
        f.corner_deficiency > 1e-6 && f.corner_deficiency * top_level_mass(rho_c) > 1e-9;
    return f;
}

PhaseFunction wigner(const Matrix& rho_c, const PhaseGrid& grid) {
    grid.validate();
    check_density_matrix(rho_c);
    const int dim = static_cast<int>(rho_c.rows());

    PhaseFunction f;
    f.grid = grid;
    f.measure = 1.0;
    f.values.resize(grid.n_q, grid.n_p);

    // sqrt(n!/m!) factors, precomputed as ratio(n, m-n) = sqrt(n!/m!).
    Eigen::MatrixXd ratio = Eigen::MatrixXd::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) {
        double r = 1.0;
        ratio(n, 0) = 1.0;
        for (int k = 1; n + k < dim; ++k) {
            r /= std::sqrt(static_cast<double>(n + k));
            ratio(n, k) = r;
        }
    }

    std::vector<std::vector<double>> lag(static_cast<std::size_t>(dim));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < grid.n_q; ++i) {
        for (int j = 0; j < grid.n_p; ++j) {
            const Complex alpha{grid.q(i) * inv_sqrt2, grid.p(j) * inv_sqrt2};
            const double x = 4.0 * std::norm(alpha);
            const double gauss = std::exp(-0.5 * x);  // e^{-2|alpha|^2}
            for (int k = 0; k < dim; ++k) laguerre_column(dim - 1, k, x, lag[static_cast<std::size_t>(k)]);

            double w = 0.0;
            // Diagonal part.
            for (int n = 0; n < dim; ++n) {
                const double sign = (n % 2 == 0) ? 1.0 : -1.0;
                w += rho_c(n, n).real() * sign * lag[0][static_cast<std::size_t>(n)];
            }
            // Off-diagonal pairs m > n contribute twice the real part.
            Complex pow_alpha = 2.0 * alpha;
            for (int k = 1; k < dim; ++k) {
                Complex acc{0.0, 0.0};
                for (int n = 0; n + k < dim; ++n) {
                    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
                    acc += rho_c(n, n + k) * sign * ratio(n, k) *
                           lag[static_cast<std::size_t>(k)][static_cast<std::size_t>(n)];
                }
                w += 2.0 * (acc * pow_alpha).real();
                pow_alpha *= 2.0 * alpha;
            }
            f.values(i, j) = w * gauss / kPi;
        }
    }
    f.corner_deficiency = corner_coherent_deficiency(grid, dim);
    f.truncation_warning =
        f.corner_deficiency > 1e-6 && f.corner_deficiency * top_level_mass(rho_c) > 1e-9;
    return f;
}

double integral(const PhaseFunction& f) {
    const auto& v = f.values;
    double total = 0.0;
    for (int i = 0; i < f.grid.n_q; ++i) {
        const double wq = (i == 0 || i == f.grid.n_q - 1) ? 0.5 : 1.0;
        for (int j = 0; j < f.grid.n_p; ++j) {
            const double wp = (j == 0 || j == f.grid.n_p - 1) ? 0.5 : 1.0;
            total += wq * wp * v(i, j);
        }
    }
    return total * f.grid.dq() * f.grid.dp() * f.measure;
}

std::vector<double> marginal_q(const PhaseFunction& f) {
    std::vector<double> out(static_cast<std::size_t>(f.grid.n_q), 0.0);
    for (int i = 0; i < f.grid.n_q; ++i) {
        double acc = 0.0;
        for (int j = 0; j < f.grid.n_p; ++j) {
            const double wp = (j == 0 || j == f.grid.n_p - 1) ? 0.5 : 1.0;
            acc += wp * f.values(i, j);
        }
        out[static_cast<std::size_t>(i)] = acc * f.grid.dp() * f.measure;
    }
    return out;
}

std::vector<double> grid_q_points(const PhaseGrid& grid) {
    std::vector<double> q(static_cast<std::size_t>(grid.n_q));
    for (int i = 0; i < grid.n_q; ++i) q[static_cast<std::size_t>(i)] = grid.q(i);
    return q;
}

std::vector<double> smeared_marginal(const std::vector<double>& density,
                                     const std::vector<double>& q_points) {
    if (density.size() != q_points.size() || density.size() < 8)
        throw std::invalid_argument("smeared_marginal: inconsistent input sizes");
    const std::size_t n = density.size();
    const double dq = q_points[1] - q_points[0];

    // Mass the kernel would carry past the grid edges; erfc(d) is the kernel
    // weight beyond distance d.
    double edge_mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dist =
            std::max(0.0, std::min(q_points[i] - q_points.front(), q_points.back() - q_points[i]));
        edge_mass += std::abs(density[i]) * std::erfc(dist) * dq;
    }
    if (edge_mass >= 1e-8)
        throw NumericError("smeared_marginal: boundary mass " + std::to_string(edge_mass) +
                           " >= 1e-8; widen the grid");

    std::vector<double> out(n, 0.0);
    const double norm = 1.0 / std::sqrt(kPi);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double u = q_points[i] - q_points[j];
            const double wj = (j == 0 || j == n - 1) ? 0.5 : 1.0;
            acc += wj * density[j] * std::exp(-u * u);
        }
        out[i] = acc * dq * norm;
    }
    return out;
}

}  // namespace qdyne
