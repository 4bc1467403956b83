#pragma once

// SU(2) matrix-model operators: oscillator and finite-difference bases, the
// supersymmetric 3d Hamiltonians, Gauss-law generators, physical states and
// the time-dependent cosmological deformation.
//
// Tensor layout: boson_1 (x) boson_2 (x) boson_3 (x) fermion_1 (x) fermion_2 (x) fermion_3.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "mmsim/operator.hpp"
#include "mmsim/pauli.hpp"
#include "mmsim/statevector.hpp"

namespace mmsim {

enum class Basis { Oscillator, FiniteDifference };

/// How the three fermion modes are represented on the 8-dim fermion factor.
/// Literal: c_i = I (x) .. (x) sigma (x) .. (x) I, modes commute with each other.
/// JordanWigner: Z strings on preceding slots, so distinct modes anticommute.
enum class FermionConvention { Literal, JordanWigner };

using Triple = std::array<Operator, 3>;

struct ModelParams {
    double g = 0.1;
    std::size_t levels = 4;
    bool include_fermions = true;
    FermionConvention fermions = FermionConvention::Literal;
};

namespace detail {

inline void require_levels(std::size_t n)
{
    if (n < 2)
        throw UsageError("basis needs at least 2 levels");
}

/// Levi-Civita symbol on {0,1,2}.
inline int epsilon(std::size_t a, std::size_t b, std::size_t c)
{
    if (a == b || b == c || a == c)
        return 0;
    return ((a + 1) % 3 == b) ? 1 : -1;
}

inline const std::array<std::array<std::size_t, 3>, 3> kCyclic = {{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}};

} // namespace detail

/// Truncated annihilation operator: superdiagonal sqrt(1) .. sqrt(N-1).
inline Operator annihilation(std::size_t n)
{
    detail::require_levels(n);
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 1; k < n; ++k)
        m(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(k)) = std::sqrt(static_cast<double>(k));
    return Operator(std::move(m));
}

inline Operator q_osc(std::size_t n)
{
    const Operator a = annihilation(n);
    return (a + a.adjoint()) * (1.0 / std::sqrt(2.0));
}

inline Operator p_osc(std::size_t n)
{
    const Operator a = annihilation(n);
    return (a.adjoint() - a) * (kI / std::sqrt(2.0));
}

/// Position grid sqrt(1/(2N)) (2j - (N+1)), j = 1..N.
inline Operator q_fd(std::size_t n)
{
    detail::require_levels(n);
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const double scale = std::sqrt(1.0 / (2.0 * static_cast<double>(n)));
    for (std::size_t j = 1; j <= n; ++j)
        m(static_cast<Eigen::Index>(j - 1), static_cast<Eigen::Index>(j - 1)) =
            scale * (2.0 * static_cast<double>(j) - (static_cast<double>(n) + 1.0));
    return Operator(std::move(m));
}

/// (N/2) tridiag(-1, 2, -1)
inline Operator p2_fd(std::size_t n)
{
    detail::require_levels(n);
    const auto nn = static_cast<Eigen::Index>(n);
    Matrix m = Matrix::Zero(nn, nn);
    const double s = static_cast<double>(n) / 2.0;
    for (Eigen::Index j = 0; j < nn; ++j) {
        m(j, j) = 2.0 * s;
        if (j + 1 < nn) {
            m(j, j + 1) = -s;
            m(j + 1, j) = -s;
        }
    }
    return Operator(std::move(m));
}

/// Lifts a single-mode operator into slot i of the three-mode bosonic space (dim N^3).
inline Operator lift_mode(const Operator& op, std::size_t slot)
{
    const std::size_t n = op.dim();
    return embed(op, slot, {n, n, n});
}

inline Triple lift_modes(const Operator& op)
{
    return {lift_mode(op, 0), lift_mode(op, 1), lift_mode(op, 2)};
}

/// a_i on the N^3-dim bosonic space.
inline Triple build_bosons_osc(std::size_t levels = 4) { return lift_modes(annihilation(levels)); }

/// c_i on the 8-dim fermion space.
inline Triple build_fermions(FermionConvention conv = FermionConvention::Literal)
{
    const Operator lower({{0.0, 1.0}, {0.0, 0.0}});
    const Operator id = Operator::identity(2);
    const Operator z = Operator::diagonal({1.0, -1.0});
    const Operator pre = conv == FermionConvention::JordanWigner ? z : id;
    return {kron_all({lower, id, id}), kron_all({pre, lower, id}), kron_all({pre, pre, lower})};
}

struct LiftedModes {
    Triple bosons;   // A_i = a_i (x) I_8
    Triple fermions; // C_i = I_{N^3} (x) c_i
};

inline LiftedModes lift(const Triple& a, const Triple& c)
{
    const std::size_t db = a[0].dim(), df = c[0].dim();
    LiftedModes out;
    for (std::size_t i = 0; i < 3; ++i) {
        out.bosons[i] = kron(a[i], Operator::identity(df));
        out.fermions[i] = kron(Operator::identity(db), c[i]);
    }
    return out;
}

namespace detail {

/// sum_cyclic coupling * (C_i C_j + h.c.) * field_k
inline Operator cubic_coupling(const Triple& c, const Triple& field, double coupling)
{
    Operator h = Operator::zero(c[0].dim());
    for (const auto& [i, j, k] : kCyclic) {
        const Operator cc = c[i] * c[j];
        h += coupling * ((cc + cc.adjoint()) * field[k]);
    }
    return h;
}

inline Operator number_sum(const Triple& ops)
{
    Operator h = Operator::zero(ops[0].dim());
    for (const auto& o : ops)
        h += o.adjoint() * o;
    return h;
}

} // namespace detail

/// H = sum A^dag A + sum C^dag C + (g/sqrt2) sum_cyclic (C_i C_j + h.c.)(A_k + A_k^dag).
/// Without fermions this is the bosonic number operator on N^3 states.
inline Operator build_h_osc(const ModelParams& params)
{
    const Triple a = build_bosons_osc(params.levels);
    if (!params.include_fermions)
        return detail::number_sum(a);
    const LiftedModes m = lift(a, build_fermions(params.fermions));
    Triple x;
    for (std::size_t i = 0; i < 3; ++i)
        x[i] = m.bosons[i] + m.bosons[i].adjoint();
    return detail::number_sum(m.bosons) + detail::number_sum(m.fermions) +
           detail::cubic_coupling(m.fermions, x, params.g / std::sqrt(2.0));
}

/// H_fd = 1/2 sum (P_i^2 + X_i^2) + sum C^dag C - 3/2 + g sum_cyclic (C_i C_j + h.c.) X_k.
inline Operator build_h_fd(double g, std::size_t levels = 4,
                           FermionConvention conv = FermionConvention::Literal, bool include_fermions = true)
{
    const Operator q = q_fd(levels);
    const Triple p2 = lift_modes(p2_fd(levels));
    const Triple x = lift_modes(q);
    const std::size_t db = p2[0].dim();
    Operator bos = Operator::zero(db);
    for (std::size_t i = 0; i < 3; ++i)
        bos += 0.5 * (p2[i] + x[i] * x[i]);
    bos -= 1.5 * Operator::identity(db);
    if (!include_fermions)
        return bos;
    const Triple c = build_fermions(conv);
    const Operator i8 = Operator::identity(8);
    Triple xl, cl;
    for (std::size_t i = 0; i < 3; ++i) {
        xl[i] = kron(x[i], i8);
        cl[i] = kron(Operator::identity(db), c[i]);
    }
    return kron(bos, i8) + detail::number_sum(cl) + detail::cubic_coupling(cl, xl, g);
}

inline Operator build_h_fd(const ModelParams& params)
{
    return build_h_fd(params.g, params.levels, params.fermions, params.include_fermions);
}

// ---------------------------------------------------------------------------
// Gauss law

enum class GaussVariant {
    Bosonic,       ///< G_a = eps_abc x_b p_c on the N^3 bosonic space
    Supersymmetric ///< G_a = eps_abc (x_b p_c - i psi_b^dag psi_c) on N^3 * 8 states
};

/// Rotation generators in the oscillator basis. The finite-difference basis
/// only defines P^2, so it has no first-order momentum to build G_a from.
inline Triple gauss_operators(std::size_t levels = 4, Basis basis = Basis::Oscillator,
                              GaussVariant variant = GaussVariant::Bosonic,
                              FermionConvention conv = FermionConvention::JordanWigner)
{
    if (basis != Basis::Oscillator)
        throw UsageError("gauss_operators: the finite-difference basis has no first-order momentum; "
                         "use the oscillator basis");
    const Triple x = lift_modes(q_osc(levels));
    const Triple p = lift_modes(p_osc(levels));
    const std::size_t db = x[0].dim();
    Triple g;
    for (std::size_t a = 0; a < 3; ++a) {
        g[a] = Operator::zero(db);
        for (std::size_t b = 0; b < 3; ++b)
            for (std::size_t c = 0; c < 3; ++c)
                if (const int e = detail::epsilon(a, b, c))
                    g[a] += static_cast<double>(e) * (x[b] * p[c]);
    }
    if (variant == GaussVariant::Bosonic)
        return g;
    const Triple psi = build_fermions(conv);
    const Operator i8 = Operator::identity(8);
    const Operator idb = Operator::identity(db);
    Triple out;
    for (std::size_t a = 0; a < 3; ++a) {
        Operator f = Operator::zero(8);
        for (std::size_t b = 0; b < 3; ++b)
            for (std::size_t c = 0; c < 3; ++c)
                if (const int e = detail::epsilon(a, b, c))
                    f += static_cast<double>(e) * (psi[b].adjoint() * psi[c]);
        out[a] = kron(g[a], i8) - kI * kron(idb, f);
    }
    return out;
}

/// sum_a G_a^2
inline Operator gauss_casimir(const Triple& g) { return g[0] * g[0] + g[1] * g[1] + g[2] * g[2]; }

inline Operator penalty_hamiltonian(const Operator& h, double lambda, const Triple& g)
{
    if (g[0].dim() != h.dim()) {
        std::ostringstream os;
        os << "penalty_hamiltonian: Hamiltonian dimension " << h.dim() << " does not match constraint dimension "
           << g[0].dim();
        throw UsageError(os.str());
    }
    return h + lambda * gauss_casimir(g);
}

/// Orthonormal basis (columns) of the numerical kernel of sum_a G_a^2.
inline Matrix gauss_kernel_basis(const Triple& g, double tol = 1e-9)
{
    const Spectrum s = eigh(gauss_casimir(g));
    Eigen::Index k = 0;
    while (k < s.values.size() && s.values(k) < tol)
        ++k;
    return s.vectors.leftCols(k);
}

/// Indices of basis states whose bosonic occupations are all <= N-2, for a
/// space laid out as boson^3 (x) inner (inner_dim = 1 for purely bosonic).
inline std::vector<std::size_t> truncation_safe_indices(std::size_t levels, std::size_t inner_dim = 1)
{
    std::vector<std::size_t> out;
    const std::size_t n = levels;
    for (std::size_t i = 0; i < n * n * n * inner_dim; ++i) {
        const std::size_t b = i / inner_dim;
        const std::size_t n1 = b / (n * n), n2 = (b / n) % n, n3 = b % n;
        if (n1 <= n - 2 && n2 <= n - 2 && n3 <= n - 2)
            out.push_back(i);
    }
    return out;
}

/// Largest entry of op restricted to the given columns.
inline double max_abs_on_columns(const Operator& op, const std::vector<std::size_t>& cols)
{
    double worst = 0.0;
    for (std::size_t c : cols)
        worst = std::max(worst, op.matrix().col(static_cast<Eigen::Index>(c)).cwiseAbs().maxCoeff());
    return worst;
}

/// (sum_i A_i^dag A_i^dag)^n |0,0,0> for n = 0..count-1, unnormalized.
/// Components pushed past level N-1 are dropped by the truncated creation operators.
inline std::vector<Vector> physical_states_raw(std::size_t levels = 4, std::size_t count = 4)
{
    const Triple a = build_bosons_osc(levels);
    Operator pair = Operator::zero(a[0].dim());
    for (const auto& ai : a)
        pair += ai.adjoint() * ai.adjoint();
    Vector v = Vector::Zero(static_cast<Eigen::Index>(a[0].dim()));
    v(0) = 1.0;
    std::vector<Vector> out;
    for (std::size_t k = 0; k < count; ++k) {
        out.push_back(v);
        v = pair.apply(v);
    }
    return out;
}

/// Gram-Schmidt orthonormalized physical basis states.
inline std::vector<Statevector> physical_states(std::size_t levels = 4, std::size_t count = 4)
{
    std::vector<Vector> raw = physical_states_raw(levels, count);
    std::vector<Statevector> out;
    std::vector<Vector> done;
    for (Vector v : raw) {
        for (const auto& u : done)
            v -= u.dot(v) * u;
        const double nrm = v.norm();
        if (nrm < 1e-12)
            throw NumericalError("physical_states: raw states are linearly dependent in this truncation");
        v /= nrm;
        done.push_back(v);
        out.emplace_back(v);
    }
    return out;
}

/// Rotation-invariant truncation of sum_i 1/2 (p_i^2 + omega^2 x_i^2): the
/// ladder form 1/2(1+w^2)(a^dag a + 1/2) + 1/4(w^2-1)(a^2 + a^dag^2) projected
/// onto total occupation <= N-1. That subspace is closed under the truncated
/// G_a, so the result commutes with them exactly.
inline Operator build_h_isotropic_osc(double omega_sq, std::size_t levels = 4)
{
    const Triple a = build_bosons_osc(levels);
    const std::size_t d = a[0].dim();
    Operator h = Operator::zero(d);
    for (const auto& ai : a) {
        const Operator n = ai.adjoint() * ai;
        h += 0.5 * (1.0 + omega_sq) * (n + 0.5 * Operator::identity(d));
        h += 0.25 * (omega_sq - 1.0) * (ai * ai + ai.adjoint() * ai.adjoint());
    }
    Matrix proj = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) {
        const std::size_t total = i / (levels * levels) + (i / levels) % levels + i % levels;
        if (total <= levels - 1)
            proj(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
    }
    const Operator p(proj);
    return p * h * p;
}

// ---------------------------------------------------------------------------
// Cosmological deformation

struct DeformationParams {
    double alpha = 1.0;
    double beta = 1.0;
    std::function<double(double)> rho; // empty means identically zero

    /// k^2 = -(beta^2 - 2 alpha beta) / (2 alpha)^2
    double k_squared() const
    {
        if (alpha == 0.0)
            throw UsageError("DeformationParams: alpha must be nonzero");
        return -(beta * beta - 2.0 * alpha * beta) / ((2.0 * alpha) * (2.0 * alpha));
    }

    double rho_at(double t) const { return rho ? rho(t) : 0.0; }
};

/// Lambda(t) = -k^2 / t^2
inline double lambda_from_k_squared(double t, double k_squared)
{
    if (t == 0.0)
        throw UsageError("Lambda(t) is singular at t = 0 (Matrix Big Bang)");
    return -k_squared / (t * t);
}

/// Lambda(t) = (beta^2 - 2 alpha beta) / (2 alpha t)^2
inline double lambda_deformation(double t, const DeformationParams& d)
{
    return lambda_from_k_squared(t, d.k_squared());
}

/// Single-direction cosmological Hamiltonian in the finite-difference basis:
/// H(t) = 1/2 P^2 - 1/2 Lambda(t) X^2 - rho(t) X.
inline Operator build_h_cosmo(double t, double k_squared, std::size_t levels = 4, double rho_t = 0.0)
{
    const double lam = lambda_from_k_squared(t, k_squared);
    const Operator x = q_fd(levels);
    return 0.5 * p2_fd(levels) - (0.5 * lam) * (x * x) - rho_t * x;
}

inline Operator build_h_cosmo(double t, const DeformationParams& d, std::size_t levels = 4)
{
    return build_h_cosmo(t, d.k_squared(), levels, d.rho_at(t));
}

// ---------------------------------------------------------------------------
// String-keyed builder registry for front ends.

inline bool is_known_model(const std::string& id)
{
    return id == "osc" || id == "fd" || id == "cosmo" || id == "brst-unitary" || id == "gauss" || id == "penalty";
}

} // namespace mmsim
