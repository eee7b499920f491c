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

#include <memory>
#include <string>
#include <vector>

#include "qdyne/hilbert.hpp"

// Right-hand sides of every evolution equation the simulator integrates.
//
// Composite (qubit x cavity) families, all linear in the state:
//   GkslReference      drho = -i[H,rho] + kappa (a rho a+ - {a+a, rho}/2)
//   LinearQsd          drho = -i[H,rho] - (kappa/2){a+a,rho} + xi* a rho + xi rho a+
//   HeterodyneMarginalX/Y   the partially averaged records driven by x_t / y_t
//   HomodyneX/Y        single-quadrature records, sqrt(2) noise weight and no
//                      sandwich term
//
// Qubit-only families after eliminating the fast cavity (rates Gamma, Omega):
//   AdiabaticComplex / AdiabaticX / AdiabaticY
// The drift carries a negative sandwich correction (-2 Gamma resp. -Gamma
// sigma- rho sigma+) so that the noise average reproduces plain amplitude
// damping at rate 2 Gamma; with that correction the complex equation is a pure
// congruence and stays completely positive pathwise.
//
// Hierarchy: coupled 2x2 auxiliary blocks rho^{n,m} closed at n+m <= order,
// equivalent to the composite dynamics for a vacuum cavity.

namespace qdyne {

enum class SchemeKind {
    GkslReference,
    LinearQsd,
    HeterodyneMarginalX,
    HeterodyneMarginalY,
    HomodyneX,
    HomodyneY,
    AdiabaticComplex,
    AdiabaticX,
    AdiabaticY,
    Hierarchy,
};

const char* scheme_name(SchemeKind kind);
SchemeKind scheme_from_name(const std::string& name);

bool scheme_is_composite(SchemeKind kind);
bool scheme_is_adiabatic(SchemeKind kind);
bool scheme_uses_noise(SchemeKind kind);

struct PhysicsParams {
    double omega_a = 1.0;
    double omega_c = 1.0;
    double kappa = 1.0;
    double g = 1.0;

    double delta() const { return omega_c - omega_a; }
    void validate() const;
};

struct AdiabaticRates {
    double gamma = 0.0;  // effective decay
    double omega = 0.0;  // effective frequency shift
};

/// Gamma = g^2 (kappa/2) / (delta^2 + kappa^2/4), Omega = g^2 delta / (...).
/// kappa must be positive; the elimination is meaningless otherwise.
AdiabaticRates adiabatic_rates(double g, double kappa, double delta);

struct SchemeSpec {
    SchemeKind kind = SchemeKind::GkslReference;
    PhysicsParams physics;
    InteractionConvention convention = InteractionConvention::MainText;
    int n_fock = 15;
    int hierarchy_order = 4;

    void validate() const;
};

/// State dimensions used by a scheme: composite 2*n_fock square, adiabatic 2x2,
/// hierarchy 2 x 2*(number of retained blocks).
struct StateShape {
    int rows = 0;
    int cols = 0;
};
StateShape state_shape(const SchemeSpec& spec);

class Rhs {
public:
    virtual ~Rhs() = default;

    virtual int rows() const = 0;
    virtual int cols() const = 0;
    virtual bool uses_noise() const = 0;
    virtual bool trace_preserving() const { return false; }

    /// Derivative of a single state; exact linear map, no symmetry assumptions.
    virtual void apply(const Matrix& state, Complex xi, Matrix& out) = 0;

    /// Derivative of k states stacked horizontally. Blocks must be Hermitian
    /// (all production states are); overrides may exploit that.
    virtual void apply_blocks(const Matrix& stacked, Complex xi, Matrix& out);
};

std::unique_ptr<Rhs> make_rhs(const SchemeSpec& spec);

// Hierarchy state packing: blocks rho^{n,m} with n+m <= order stored side by
// side in a 2 x 2B matrix, block (0,0) first.
struct HierarchyLayout {
    int order = 1;
    std::vector<std::pair<int, int>> blocks;  // (n, m) per slot

    explicit HierarchyLayout(int order);
    int block_count() const { return static_cast<int>(blocks.size()); }
    int slot(int n, int m) const;  // -1 when outside the closure
};

Matrix hierarchy_initial_state(const Matrix& rho_qubit, int order);
Matrix hierarchy_block(const Matrix& packed, const HierarchyLayout& layout, int n, int m);

/// Effective rates actually wired into an adiabatic Rhs (single source of
/// truth check).
AdiabaticRates rhs_adiabatic_rates(const Rhs& rhs);

}  // namespace qdyne
