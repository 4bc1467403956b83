#pragma once

// Unitary-gauge BRST construction for the SU(2) bosonic matrix model.
//
// Space: boson_1 (x) boson_2 (x) boson_3 (x) ghost_1 (x) ghost_2 (x) ghost_3,
// oscillator basis with N levels per boson, dim N^3 * 8.
//   G_a = g eps_abc X_b P_c
//   Omega = c_a G_a - i (g/2) eps_abc c_a c_b b_c
//   Q_L = Omega^dag Omega

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <vector>

#include "mmsim/model.hpp"
#include "mmsim/operator.hpp"
#include "mmsim/pauli.hpp"

namespace mmsim {

inline constexpr double kNilpotencyTol = 1e-10;
inline constexpr double kZeroModeTol = 1e-10;

/// Ghost representation. JordanWigner gives b, c proper anticommutation
/// between modes; Literal keeps the bare tensor-slot matrices.
using GhostConvention = FermionConvention;

struct BrstConfig {
    std::size_t boson_levels = 3;
    double g = 0.1;
    GhostConvention ghosts = GhostConvention::JordanWigner;
    /// Throw NumericalError when Omega^2 fails on the truncation-safe subspace.
    bool check_nilpotency = true;

    std::size_t boson_dim() const { return boson_levels * boson_levels * boson_levels; }
    std::size_t total_dim() const { return boson_dim() * 8; }
    int padded_qubits() const { return qubits_to_hold(total_dim()); }
};

struct Ghosts {
    Triple c; // lowering on each ghost slot
    Triple b; // b_a = c_a^dag
};

inline Ghosts build_ghosts(GhostConvention conv = GhostConvention::JordanWigner)
{
    Ghosts gh;
    gh.c = build_fermions(conv);
    for (std::size_t a = 0; a < 3; ++a)
        gh.b[a] = gh.c[a].adjoint();
    return gh;
}

struct BrstOperators {
    BrstConfig config;
    Triple x, p;   // bosonic lifts
    Triple gauss;  // G_a
    Triple c, b;   // ghost lifts
    Operator omega;
    Operator laplacian;
    Operator h_eff; // 1/2 sum P_a^2

    /// Ghost number sum_a c_a b_a; Omega raises it by one.
    Operator ghost_number() const
    {
        Operator n = Operator::zero(omega.dim());
        for (std::size_t a = 0; a < 3; ++a)
            n += c[a] * b[a];
        return n;
    }
};

/// max |Omega^2| over all columns and over the truncation-safe columns
/// (boson occupations <= N-2), where truncation cannot interfere.
struct NilpotencyReport {
    double full = 0.0;
    double safe = 0.0;
};

inline NilpotencyReport nilpotency_residual(const Operator& omega, std::size_t boson_levels)
{
    const Operator sq = omega * omega;
    return {sq.max_abs(), max_abs_on_columns(sq, truncation_safe_indices(boson_levels, 8))};
}

inline BrstOperators build_brst(const BrstConfig& cfg)
{
    if (cfg.boson_levels < 2)
        throw UsageError("BrstConfig: boson_levels must be >= 2");
    BrstOperators ops;
    ops.config = cfg;
    const Operator i8 = Operator::identity(8);
    const Operator idb = Operator::identity(cfg.boson_dim());
    const Triple xb = lift_modes(q_osc(cfg.boson_levels));
    const Triple pb = lift_modes(p_osc(cfg.boson_levels));
    const Ghosts gh = build_ghosts(cfg.ghosts);
    for (std::size_t a = 0; a < 3; ++a) {
        ops.x[a] = kron(xb[a], i8);
        ops.p[a] = kron(pb[a], i8);
        ops.c[a] = kron(idb, gh.c[a]);
        ops.b[a] = kron(idb, gh.b[a]);
    }
    const std::size_t d = cfg.total_dim();
    ops.h_eff = Operator::zero(d);
    for (std::size_t a = 0; a < 3; ++a)
        ops.h_eff += 0.5 * (ops.p[a] * ops.p[a]);

    ops.omega = Operator::zero(d);
    for (std::size_t a = 0; a < 3; ++a) {
        ops.gauss[a] = Operator::zero(d);
        for (std::size_t b = 0; b < 3; ++b)
            for (std::size_t c = 0; c < 3; ++c)
                if (const int e = detail::epsilon(a, b, c))
                    ops.gauss[a] += (cfg.g * e) * (ops.x[b] * ops.p[c]);
        ops.omega += ops.c[a] * ops.gauss[a];
    }
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
            for (std::size_t c = 0; c < 3; ++c)
                if (const int e = detail::epsilon(a, b, c))
                    ops.omega -= (kI * (cfg.g / 2.0) * static_cast<double>(e)) * (ops.c[a] * ops.c[b] * ops.b[c]);

    if (cfg.check_nilpotency) {
        const NilpotencyReport r = nilpotency_residual(ops.omega, cfg.boson_levels);
        if (r.safe > kNilpotencyTol) {
            std::ostringstream os;
            os << "build_brst: Omega^2 = " << r.safe << " on the truncation-safe subspace";
            throw NumericalError(os.str());
        }
    }
    ops.laplacian = ops.omega.adjoint() * ops.omega;
    return ops;
}

inline Operator build_brst_charge(const BrstConfig& cfg) { return build_brst(cfg).omega; }

inline Operator build_brst_laplacian(const BrstConfig& cfg) { return build_brst(cfg).laplacian; }

/// Orthonormal basis of the numerical kernel of Q_L (eigenvalues < tol).
inline std::vector<Vector> physical_zero_modes(const BrstOperators& ops, double tol = kZeroModeTol)
{
    const Spectrum s = eigh(ops.laplacian);
    std::vector<Vector> out;
    for (Eigen::Index k = 0; k < s.values.size() && s.values(k) < tol; ++k)
        out.push_back(s.vectors.col(k));
    return out;
}

inline std::vector<Vector> physical_zero_modes(const BrstConfig& cfg, double tol = kZeroModeTol)
{
    return physical_zero_modes(build_brst(cfg), tol);
}

/// Boson vacuum (x) the ghost state annihilated by every c_a.
inline Vector brst_vacuum(const BrstConfig& cfg)
{
    Vector v = Vector::Zero(static_cast<Eigen::Index>(cfg.total_dim()));
    v(0) = 1.0;
    return v;
}

} // namespace mmsim
