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

#include "qdyne/dynamics.hpp"

#include <cmath>

namespace qdyne {

namespace {
const Complex kI{0.0, 1.0};
const double kSqrt2 = std::sqrt(2.0);
}  // namespace

const char* scheme_name(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::GkslReference: return "gksl";
        case SchemeKind::LinearQsd: return "linear_qsd";
        case SchemeKind::HeterodyneMarginalX: return "heterodyne_x";
        case SchemeKind::HeterodyneMarginalY: return "heterodyne_y";
        case SchemeKind::HomodyneX: return "homodyne_x";
        case SchemeKind::HomodyneY: return "homodyne_y";
        case SchemeKind::AdiabaticComplex: return "adiabatic_complex";
        case SchemeKind::AdiabaticX: return "adiabatic_x";
        case SchemeKind::AdiabaticY: return "adiabatic_y";
        case SchemeKind::Hierarchy: return "hierarchy";
    }
    return "unknown";
}

SchemeKind scheme_from_name(const std::string& name) {
    for (SchemeKind kind :
         {SchemeKind::GkslReference, SchemeKind::LinearQsd, SchemeKind::HeterodyneMarginalX,
          SchemeKind::HeterodyneMarginalY, SchemeKind::HomodyneX, SchemeKind::HomodyneY,
          SchemeKind::AdiabaticComplex, SchemeKind::AdiabaticX, SchemeKind::AdiabaticY,
          SchemeKind::Hierarchy}) {
        if (name == scheme_name(kind)) return kind;
    }
    throw ConfigError("unknown scheme: " + name);
}

bool scheme_is_composite(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::GkslReference:
        case SchemeKind::LinearQsd:
        case SchemeKind::HeterodyneMarginalX:
        case SchemeKind::HeterodyneMarginalY:
        case SchemeKind::HomodyneX:
        case SchemeKind::HomodyneY: return true;
        default: return false;
    }
}

bool scheme_is_adiabatic(SchemeKind kind) {
    return kind == SchemeKind::AdiabaticComplex || kind == SchemeKind::AdiabaticX ||
           kind == SchemeKind::AdiabaticY;
}

bool scheme_uses_noise(SchemeKind kind) { return kind != SchemeKind::GkslReference; }

void PhysicsParams::validate() const {
    if (!(kappa >= 0.0)) throw std::invalid_argument("PhysicsParams: kappa must be >= 0");
    if (!(g >= 0.0)) throw std::invalid_argument("PhysicsParams: g must be >= 0");
}

AdiabaticRates adiabatic_rates(double g, double kappa, double delta) {
    if (!(kappa > 0.0))
        throw std::invalid_argument("adiabatic_rates: kappa must be > 0 for the elimination");
    const double denom = delta * delta + 0.25 * kappa * kappa;
    return {g * g * 0.5 * kappa / denom, g * g * delta / denom};
}

void SchemeSpec::validate() const {
    physics.validate();
    if (scheme_is_composite(kind) && n_fock < 2)
        throw std::invalid_argument("SchemeSpec: n_fock must be >= 2");
    if (scheme_is_adiabatic(kind) && !(physics.kappa > 0.0))
        throw std::invalid_argument("SchemeSpec: adiabatic schemes require kappa > 0");
    if (kind == SchemeKind::Hierarchy) {
        if (hierarchy_order < 1) throw std::invalid_argument("SchemeSpec: hierarchy order >= 1");
        if (!(physics.g > 0.0)) throw std::invalid_argument("SchemeSpec: hierarchy requires g > 0");
    }
}

StateShape state_shape(const SchemeSpec& spec) {
    if (scheme_is_composite(spec.kind)) {
        const int d = 2 * spec.n_fock;
        return {d, d};
    }
    if (scheme_is_adiabatic(spec.kind)) return {2, 2};
    HierarchyLayout layout(spec.hierarchy_order);
    return {2, 2 * layout.block_count()};
}

void Rhs::apply_blocks(const Matrix& stacked, Complex xi, Matrix& out) {
    const int c = cols();
    if (stacked.rows() != rows() || stacked.cols() % c != 0)
        throw std::invalid_argument("Rhs::apply_blocks: shape mismatch");
    out.resize(stacked.rows(), stacked.cols());
    Matrix block, dblock;
    for (int b = 0; b < stacked.cols() / c; ++b) {
        block = stacked.middleCols(b * c, c);
        apply(block, xi, dblock);
        out.middleCols(b * c, c) = dblock;
    }
}

// ---------------------------------------------------------------------------
// Composite schemes

namespace {

class CompositeRhs final : public Rhs {
public:
    explicit CompositeRhs(const SchemeSpec& spec) : kind_(spec.kind), kappa_(spec.physics.kappa) {
        const int nf = spec.n_fock;
        dim_ = 2 * nf;
        const Matrix h = build_jc_hamiltonian(spec.physics.omega_a, spec.physics.omega_c,
                                              spec.physics.g, nf, spec.convention);
        a_ = lift_cavity(build_annihilation(nf));
        const Matrix number = a_.adjoint() * a_;
        k_ = -kI * h - 0.5 * kappa_ * number;
        kd_ = k_.adjoint();
        ad_ = a_.adjoint();
        a2_ = a_ * a_;
        a2d_ = a2_.adjoint();
    }

    int rows() const override { return dim_; }
    int cols() const override { return dim_; }
    bool uses_noise() const override { return scheme_uses_noise(kind_); }
    bool trace_preserving() const override { return kind_ == SchemeKind::GkslReference; }

    void apply(const Matrix& s, Complex xi, Matrix& out) override {
        const double x = xi.real();
        const double y = xi.imag();
        out.noalias() = k_ * s;
        out.noalias() += s * kd_;
        switch (kind_) {
            case SchemeKind::GkslReference:
                t1_.noalias() = a_ * s;
                out.noalias() += kappa_ * (t1_ * ad_);
                break;
            case SchemeKind::LinearQsd:
                out.noalias() += std::conj(xi) * (a_ * s);
                out.noalias() += xi * (s * ad_);
                break;
            case SchemeKind::HeterodyneMarginalX:
                t1_.noalias() = a_ * s;
                t2_.noalias() = s * ad_;
                out.noalias() += 0.5 * kappa_ * (t1_ * ad_);
                out.noalias() -= 0.25 * kappa_ * (a2_ * s);
                out.noalias() -= 0.25 * kappa_ * (s * a2d_);
                out += x * (t1_ + t2_);
                break;
            case SchemeKind::HeterodyneMarginalY:
                t1_.noalias() = a_ * s;
                t2_.noalias() = s * ad_;
                out.noalias() += 0.5 * kappa_ * (t1_ * ad_);
                out.noalias() += 0.25 * kappa_ * (a2_ * s);
                out.noalias() += 0.25 * kappa_ * (s * a2d_);
                out += (-kI * y) * (t1_ - t2_);
                break;
            case SchemeKind::HomodyneX:
                t1_.noalias() = a_ * s;
                t2_.noalias() = s * ad_;
                out.noalias() -= 0.5 * kappa_ * (a2_ * s);
                out.noalias() -= 0.5 * kappa_ * (s * a2d_);
                out += kSqrt2 * x * (t1_ + t2_);
                break;
            case SchemeKind::HomodyneY:
                t1_.noalias() = a_ * s;
                t2_.noalias() = s * ad_;
                out.noalias() += 0.5 * kappa_ * (a2_ * s);
                out.noalias() += 0.5 * kappa_ * (s * a2d_);
                out += (-kI * kSqrt2 * y) * (t1_ - t2_);
                break;
            default: throw std::logic_error("CompositeRhs: unsupported scheme");
        }
    }

    // Fast path for Hermitian blocks: every right multiplication is the
    // blockwise adjoint of a left one, so each stage costs <= 4 GEMMs total
    // instead of ~7 per block.
    void apply_blocks(const Matrix& s, Complex xi, Matrix& out) override {
        const double x = xi.real();
        const double y = xi.imag();
        const int d = dim_;
        if (s.rows() != d || s.cols() % d != 0)
            throw std::invalid_argument("CompositeRhs::apply_blocks: shape mismatch");

        ks_.noalias() = k_ * s;
        adjoint_blocks(ks_, d, w1_);  // rho K+
        out = ks_ + w1_;
        as_.noalias() = a_ * s;
        adjoint_blocks(as_, d, sad_);  // rho a+

        switch (kind_) {
            case SchemeKind::GkslReference:
                w1_.noalias() = a_ * sad_;  // a rho a+
                out += kappa_ * w1_;
                break;
            case SchemeKind::LinearQsd:
                out += std::conj(xi) * as_ + xi * sad_;
                break;
            case SchemeKind::HeterodyneMarginalX:
                w1_.noalias() = a_ * sad_;
                w2_.noalias() = a_ * as_;  // a^2 rho
                adjoint_blocks(w2_, d, w3_);
                out += 0.5 * kappa_ * w1_ - 0.25 * kappa_ * (w2_ + w3_) + x * (as_ + sad_);
                break;
            case SchemeKind::HeterodyneMarginalY:
                w1_.noalias() = a_ * sad_;
                w2_.noalias() = a_ * as_;
                adjoint_blocks(w2_, d, w3_);
                out += 0.5 * kappa_ * w1_ + 0.25 * kappa_ * (w2_ + w3_);
                out += (-kI * y) * (as_ - sad_);
                break;
            case SchemeKind::HomodyneX:
                w2_.noalias() = a_ * as_;
                adjoint_blocks(w2_, d, w3_);
                out += -0.5 * kappa_ * (w2_ + w3_) + kSqrt2 * x * (as_ + sad_);
                break;
            case SchemeKind::HomodyneY:
                w2_.noalias() = a_ * as_;
                adjoint_blocks(w2_, d, w3_);
                out += 0.5 * kappa_ * (w2_ + w3_);
                out += (-kI * kSqrt2 * y) * (as_ - sad_);
                break;
            default: throw std::logic_error("CompositeRhs: unsupported scheme");
        }
    }

private:
    static void adjoint_blocks(const Matrix& in, int d, Matrix& out) {
        out.resize(in.rows(), in.cols());
        for (int b = 0; b < in.cols() / d; ++b)
            out.middleCols(b * d, d) = in.middleCols(b * d, d).adjoint();
    }

    SchemeKind kind_;
    double kappa_;
    int dim_ = 0;
    Matrix k_, kd_, a_, ad_, a2_, a2d_;
    Matrix t1_, t2_;                    // single-state workspaces
    Matrix ks_, as_, sad_, w1_, w2_, w3_;  // stacked workspaces
};

// ---------------------------------------------------------------------------
// Adiabatic qubit-only schemes

class AdiabaticRhs final : public Rhs {
public:
    explicit AdiabaticRhs(const SchemeSpec& spec) : kind_(spec.kind), g_(spec.physics.g) {
        rates_ = adiabatic_rates(spec.physics.g, spec.physics.kappa, spec.physics.delta());
        const double gamma = rates_.gamma;
        const double omega = rates_.omega;
        heff_ = 0.5 * spec.physics.omega_a * sigma_z() - omega * excited_projector();
        sm_ = sigma_minus();
        sp_ = sigma_plus();
        proj_ = excited_projector();
        c_ = Complex{gamma, omega};
        // Stratonovich drift: the sandwich correction is -2*Gamma when both
        // noise quadratures are still present and -Gamma after one of them has
        // been averaged out; the noise mean then restores plain amplitude
        // damping at rate 2*Gamma.
        const double sub = (kind_ == SchemeKind::AdiabaticComplex) ? 2.0 * gamma : gamma;
        sandwich_coeff_ = 2.0 * gamma - sub;
        anticomm_coeff_ = gamma;
    }

    int rows() const override { return 2; }
    int cols() const override { return 2; }
    bool uses_noise() const override { return true; }

    void apply(const Matrix& s, Complex xi, Matrix& out) override {
        out.noalias() = -kI * (heff_ * s - s * heff_);
        out.noalias() += sandwich_coeff_ * (sm_ * s * sp_);
        out.noalias() -= anticomm_coeff_ * (proj_ * s + s * proj_);
        const Matrix sms = sm_ * s;
        const Matrix ssp = s * sp_;
        switch (kind_) {
            case SchemeKind::AdiabaticComplex:
                out += (-kI / g_) * (std::conj(xi) * c_ * sms - xi * std::conj(c_) * ssp);
                break;
            case SchemeKind::AdiabaticX:
                out += (xi.real() * -kI / g_) * (c_ * sms - std::conj(c_) * ssp);
                break;
            case SchemeKind::AdiabaticY:
                out += (xi.imag() * -1.0 / g_) * (c_ * sms + std::conj(c_) * ssp);
                break;
            default: throw std::logic_error("AdiabaticRhs: unsupported scheme");
        }
    }

    AdiabaticRates rates() const { return rates_; }

private:
    static Matrix excited_projector() {
        Matrix p = Matrix::Zero(2, 2);
        p(0, 0) = 1.0;
        return p;
    }

    SchemeKind kind_;
    double g_;
    AdiabaticRates rates_;
    Matrix heff_, sm_, sp_, proj_;
    Complex c_;
    double sandwich_coeff_ = 0.0;
    double anticomm_coeff_ = 0.0;
};

// ---------------------------------------------------------------------------
// Hierarchy of auxiliary 2x2 blocks

class HierarchyRhs final : public Rhs {
public:
    explicit HierarchyRhs(const SchemeSpec& spec)
        : layout_(spec.hierarchy_order),
          omega_c_(spec.physics.omega_c),
          kappa_(spec.physics.kappa),
          g_(spec.physics.g) {
        if (!(g_ > 0.0)) throw std::invalid_argument("HierarchyRhs: g must be > 0");
        l0_ = -kI * (0.5 * spec.physics.omega_a * sigma_z());
        l0d_ = l0_.adjoint();
        sm_ = sigma_minus();
        sp_ = sigma_plus();
    }

    int rows() const override { return 2; }
    int cols() const override { return 2 * layout_.block_count(); }
    bool uses_noise() const override { return true; }

    void apply(const Matrix& s, Complex xi, Matrix& out) override {
        if (s.rows() != 2 || s.cols() != cols())
            throw std::invalid_argument("HierarchyRhs: shape mismatch");
        out.resize(2, s.cols());
        const Complex xic = std::conj(xi);
        for (int slot = 0; slot < layout_.block_count(); ++slot) {
            const auto [n, m] = layout_.blocks[slot];
            const Eigen::Matrix2cd b = block(s, n, m);
            Eigen::Matrix2cd d = l0_ * b + b * l0d_;
            d -= kI *
                 (static_cast<double>(n - m) * omega_c_ -
                  kI * (0.5 * static_cast<double>(n + m) * kappa_)) *
                 b;
            const Eigen::Matrix2cd up_m = block(s, n, m + 1);   // rho^{n,m+1}
            const Eigen::Matrix2cd up_n = block(s, n + 1, m);   // rho^{n+1,m}
            d += sm_ * up_m - up_m * sm_;
            d -= sp_ * up_n - up_n * sp_;
            if (n > 0) d += g_ * g_ * static_cast<double>(n) * (sm_ * block(s, n - 1, m));
            if (m > 0) d += g_ * g_ * static_cast<double>(m) * (block(s, n, m - 1) * sp_);
            d += (-kI / g_) * (xic * up_n - xi * up_m);
            d -= (kappa_ / (g_ * g_)) * block(s, n + 1, m + 1);
            out.block<2, 2>(0, 2 * slot) = d;
        }
    }

private:
    Eigen::Matrix2cd block(const Matrix& s, int n, int m) const {
        const int slot = layout_.slot(n, m);
        if (slot < 0) return Eigen::Matrix2cd::Zero();
        return s.block<2, 2>(0, 2 * slot);
    }

    HierarchyLayout layout_;
    double omega_c_, kappa_, g_;
    Matrix l0_, l0d_, sm_, sp_;
};

}  // namespace

HierarchyLayout::HierarchyLayout(int order_in) : order(order_in) {
    if (order < 1) throw std::invalid_argument("HierarchyLayout: order must be >= 1");
    for (int total = 0; total <= order; ++total)
        for (int n = 0; n <= total; ++n) blocks.emplace_back(n, total - n);
}

int HierarchyLayout::slot(int n, int m) const {
    if (n < 0 || m < 0 || n + m > order) return -1;
    const int total = n + m;
    return total * (total + 1) / 2 + n;
}

Matrix hierarchy_initial_state(const Matrix& rho_qubit, int order) {
    if (rho_qubit.rows() != 2 || rho_qubit.cols() != 2)
        throw std::invalid_argument("hierarchy_initial_state: qubit state must be 2x2");
    HierarchyLayout layout(order);
    Matrix packed = Matrix::Zero(2, 2 * layout.block_count());
    packed.block<2, 2>(0, 0) = rho_qubit;  // slot(0,0) == 0
    return packed;
}

Matrix hierarchy_block(const Matrix& packed, const HierarchyLayout& layout, int n, int m) {
    const int slot = layout.slot(n, m);
    if (slot < 0) return Matrix::Zero(2, 2);
    return packed.block(0, 2 * slot, 2, 2);
}

std::unique_ptr<Rhs> make_rhs(const SchemeSpec& spec) {
    spec.validate();
    if (scheme_is_composite(spec.kind)) return std::make_unique<CompositeRhs>(spec);
    if (scheme_is_adiabatic(spec.kind)) return std::make_unique<AdiabaticRhs>(spec);
    return std::make_unique<HierarchyRhs>(spec);
}

AdiabaticRates rhs_adiabatic_rates(const Rhs& rhs) {
    const auto* ad = dynamic_cast<const AdiabaticRhs*>(&rhs);
    if (ad == nullptr) throw std::invalid_argument("rhs_adiabatic_rates: not an adiabatic rhs");
    return ad->rates();
}

}  // namespace qdyne
