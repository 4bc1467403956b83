#pragma once

// Statevector simulator: gates, parameterized circuits, Pauli-rotation
// exponentials and Pauli-sum expectation values.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mmsim/operator.hpp"
#include "mmsim/pauli.hpp"
#include "mmsim/statevector.hpp"

namespace mmsim {

enum class GateKind { RY, RZ, CZ, CX, H, X, S, SDG, PauliRotation };

inline const char* gate_name(GateKind k)
{
    switch (k) {
    case GateKind::RY: return "ry";
    case GateKind::RZ: return "rz";
    case GateKind::CZ: return "cz";
    case GateKind::CX: return "cx";
    case GateKind::H: return "h";
    case GateKind::X: return "x";
    case GateKind::S: return "s";
    case GateKind::SDG: return "sdg";
    case GateKind::PauliRotation: return "pauli_rotation";
    }
    return "?";
}

inline bool is_rotation(GateKind k)
{
    return k == GateKind::RY || k == GateKind::RZ || k == GateKind::PauliRotation;
}

inline bool is_two_qubit(GateKind k) { return k == GateKind::CZ || k == GateKind::CX; }

struct Gate {
    GateKind kind = GateKind::X;
    std::size_t q0 = 0; // target, or control for CX
    std::size_t q1 = 0; // second qubit for CZ / target for CX
    double angle = 0.0; // used when `param` is empty
    std::optional<std::size_t> param;
    PauliString pauli; // PauliRotation only
};

class Circuit {
public:
    Circuit() = default;
    explicit Circuit(std::size_t n_qubits) : n_(n_qubits) {}

    std::size_t n_qubits() const { return n_; }
    std::size_t num_parameters() const { return n_params_; }
    const std::vector<Gate>& gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }

    Circuit& ry(std::size_t q, double angle) { return push({GateKind::RY, q, 0, angle, {}, {}}); }
    Circuit& rz(std::size_t q, double angle) { return push({GateKind::RZ, q, 0, angle, {}, {}}); }
    Circuit& ry_param(std::size_t q) { return push({GateKind::RY, q, 0, 0.0, n_params_, {}}); }
    Circuit& rz_param(std::size_t q) { return push({GateKind::RZ, q, 0, 0.0, n_params_, {}}); }
    Circuit& cz(std::size_t a, std::size_t b) { return push({GateKind::CZ, a, b, 0.0, {}, {}}); }
    Circuit& cx(std::size_t control, std::size_t target)
    {
        return push({GateKind::CX, control, target, 0.0, {}, {}});
    }
    Circuit& h(std::size_t q) { return push({GateKind::H, q, 0, 0.0, {}, {}}); }
    Circuit& x(std::size_t q) { return push({GateKind::X, q, 0, 0.0, {}, {}}); }
    Circuit& s(std::size_t q) { return push({GateKind::S, q, 0, 0.0, {}, {}}); }
    Circuit& sdg(std::size_t q) { return push({GateKind::SDG, q, 0, 0.0, {}, {}}); }
    Circuit& pauli_rotation(PauliString p, double angle)
    {
        return push({GateKind::PauliRotation, 0, 0, angle, {}, std::move(p)});
    }
    Circuit& pauli_rotation_param(PauliString p)
    {
        return push({GateKind::PauliRotation, 0, 0, 0.0, n_params_, std::move(p)});
    }

    /// Appends a gate, validating indices. Parameterized gates take the next slot.
    Circuit& push(Gate g)
    {
        if (g.kind == GateKind::PauliRotation) {
            if (g.pauli.size() != n_)
                throw UsageError("Circuit: Pauli rotation string length does not match qubit count");
        } else {
            check_qubit(g.q0);
            if (is_two_qubit(g.kind)) {
                check_qubit(g.q1);
                if (g.q0 == g.q1)
                    throw UsageError("Circuit: two-qubit gate endpoints must differ");
            }
        }
        if (g.param) {
            if (!is_rotation(g.kind))
                throw UsageError("Circuit: only rotations can be parameterized");
            g.param = n_params_++;
        }
        gates_.push_back(std::move(g));
        return *this;
    }

private:
    void check_qubit(std::size_t q) const
    {
        if (q >= n_) {
            std::ostringstream os;
            os << "Circuit: qubit index " << q << " out of range for " << n_ << " qubits";
            throw UsageError(os.str());
        }
    }

    std::size_t n_ = 0;
    std::size_t n_params_ = 0;
    std::vector<Gate> gates_;
};

using Mat2 = Eigen::Matrix2cd;

/// Local matrix of a single-qubit gate.
inline Mat2 single_qubit_matrix(GateKind kind, double angle)
{
    const double c = std::cos(angle / 2), s = std::sin(angle / 2);
    const double r = 1.0 / std::sqrt(2.0);
    Mat2 u;
    switch (kind) {
    case GateKind::RY: u << c, -s, s, c; break;
    case GateKind::RZ: u << std::exp(-kI * (angle / 2)), 0.0, 0.0, std::exp(kI * (angle / 2)); break;
    case GateKind::H: u << r, r, r, -r; break;
    case GateKind::X: u << 0.0, 1.0, 1.0, 0.0; break;
    case GateKind::S: u << 1.0, 0.0, 0.0, kI; break;
    case GateKind::SDG: u << 1.0, 0.0, 0.0, -kI; break;
    default: throw UsageError(std::string("single_qubit_matrix: not a single-qubit gate: ") + gate_name(kind));
    }
    return u;
}

/// Local 4x4 matrix of a two-qubit gate in the (q0, q1) basis, q0 most significant.
inline Eigen::Matrix4cd two_qubit_matrix(GateKind kind)
{
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
    if (kind == GateKind::CZ) {
        u(3, 3) = -1.0;
    } else if (kind == GateKind::CX) {
        u(2, 2) = 0.0;
        u(3, 3) = 0.0;
        u(2, 3) = 1.0;
        u(3, 2) = 1.0;
    } else {
        throw UsageError("two_qubit_matrix: not a two-qubit gate");
    }
    return u;
}

namespace detail {

inline std::uint64_t bit_of(std::size_t n, std::size_t q) { return std::uint64_t{1} << (n - 1 - q); }

inline void apply_single(const Mat2& u, std::size_t q, Statevector& psi)
{
    const std::uint64_t bit = bit_of(psi.n_qubits(), q);
    Vector& a = psi.amplitudes();
    const auto dim = static_cast<std::uint64_t>(psi.dim());
    for (std::uint64_t i = 0; i < dim; ++i) {
        if (i & bit)
            continue;
        const auto i0 = static_cast<Eigen::Index>(i), i1 = static_cast<Eigen::Index>(i | bit);
        const cplx x0 = a(i0), x1 = a(i1);
        a(i0) = u(0, 0) * x0 + u(0, 1) * x1;
        a(i1) = u(1, 0) * x0 + u(1, 1) * x1;
    }
}

} // namespace detail

/// exp(-i theta/2 P) |psi>, in place.
inline void apply_pauli_rotation(const PauliString& p, double theta, Statevector& psi)
{
    if (p.size() != psi.n_qubits())
        throw UsageError("pauli_rotation: string length does not match qubit count");
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    const std::uint64_t flip = p.flip_mask(), sign = p.sign_mask();
    const int ny = p.y_count();
    Vector& a = psi.amplitudes();
    if (flip == 0) {
        for (std::uint64_t j = 0; j < psi.dim(); ++j) {
            const cplx ph = PauliString::phase(j, sign, ny);
            a(static_cast<Eigen::Index>(j)) *= cplx(c, 0.0) - kI * s * ph;
        }
        return;
    }
    // Pairs (j, j^flip) mix among themselves only.
    for (std::uint64_t j = 0; j < psi.dim(); ++j) {
        const std::uint64_t k = j ^ flip;
        if (k < j)
            continue;
        const auto jj = static_cast<Eigen::Index>(j), kk = static_cast<Eigen::Index>(k);
        const cplx xj = a(jj), xk = a(kk);
        // (P x)[k] = phase(j) x[j], (P x)[j] = phase(k) x[k]
        a(jj) = c * xj - kI * s * PauliString::phase(k, sign, ny) * xk;
        a(kk) = c * xk - kI * s * PauliString::phase(j, sign, ny) * xj;
    }
}

inline Statevector pauli_rotation(const PauliString& p, double theta, Statevector psi)
{
    apply_pauli_rotation(p, theta, psi);
    return psi;
}

/// Applies one gate with the given (already resolved) angle.
inline void apply_gate(const Gate& g, double angle, Statevector& psi)
{
    const std::size_t n = psi.n_qubits();
    Vector& a = psi.amplitudes();
    switch (g.kind) {
    case GateKind::CZ: {
        const std::uint64_t m = detail::bit_of(n, g.q0) | detail::bit_of(n, g.q1);
        for (std::uint64_t i = 0; i < psi.dim(); ++i)
            if ((i & m) == m)
                a(static_cast<Eigen::Index>(i)) = -a(static_cast<Eigen::Index>(i));
        return;
    }
    case GateKind::CX: {
        const std::uint64_t cb = detail::bit_of(n, g.q0), tb = detail::bit_of(n, g.q1);
        for (std::uint64_t i = 0; i < psi.dim(); ++i)
            if ((i & cb) && !(i & tb))
                std::swap(a(static_cast<Eigen::Index>(i)), a(static_cast<Eigen::Index>(i | tb)));
        return;
    }
    case GateKind::PauliRotation: apply_pauli_rotation(g.pauli, angle, psi); return;
    default: detail::apply_single(single_qubit_matrix(g.kind, angle), g.q0, psi); return;
    }
}

/// Runs the circuit on `in`, binding parameterized gates from `params`.
inline Statevector apply(const Circuit& c, std::span<const double> params, Statevector in)
{
    if (params.size() != c.num_parameters()) {
        std::ostringstream os;
        os << "apply: circuit has " << c.num_parameters() << " parameters, got " << params.size();
        throw UsageError(os.str());
    }
    if (in.n_qubits() != c.n_qubits()) {
        std::ostringstream os;
        os << "apply: circuit acts on " << c.n_qubits() << " qubits, state has " << in.n_qubits();
        throw UsageError(os.str());
    }
    for (const auto& g : c.gates())
        apply_gate(g, g.param ? params[*g.param] : g.angle, in);
    return in;
}

inline Statevector apply(const Circuit& c, Statevector in) { return apply(c, std::span<const double>{}, std::move(in)); }

/// <psi|P|psi> for a single string.
inline cplx expectation(const PauliString& p, const Statevector& psi)
{
    const std::uint64_t flip = p.flip_mask(), sign = p.sign_mask();
    const int ny = p.y_count();
    const Vector& a = psi.amplitudes();
    cplx acc = 0.0;
    for (std::uint64_t j = 0; j < psi.dim(); ++j)
        acc += std::conj(a(static_cast<Eigen::Index>(j ^ flip))) * PauliString::phase(j, sign, ny) *
               a(static_cast<Eigen::Index>(j));
    return acc;
}

/// Sum of coeff * <psi|P_s|psi>; an imaginary residue above tolerance is an
/// internal-consistency error.
inline double expectation(const PauliSum& p, const Statevector& psi, double imag_tol = kImagResidueTol)
{
    if (p.n_qubits() != psi.n_qubits())
        throw UsageError("expectation: qubit count mismatch");
    cplx acc = 0.0;
    for (const auto& t : p)
        acc += t.coeff * expectation(t.string, psi);
    if (std::abs(acc.imag()) > imag_tol) {
        std::ostringstream os;
        os << "expectation: imaginary residue " << acc.imag();
        throw NumericalError(os.str());
    }
    return acc.real();
}

/// Gate-level synthesis of exp(-i theta/2 P): basis change to Z, CX parity
/// ladder onto the last active qubit, RZ, then uncompute. An identity string
/// is a pure global phase and stays a native PauliRotation gate.
inline Circuit synthesize_pauli_rotation(const PauliString& p, double theta)
{
    const std::size_t n = p.size();
    Circuit c(n);
    std::vector<std::size_t> active;
    for (std::size_t q = 0; q < n; ++q)
        if (p[q] != 'I')
            active.push_back(q);
    if (active.empty()) {
        c.pauli_rotation(p, theta);
        return c;
    }
    for (std::size_t q : active) {
        if (p[q] == 'X')
            c.h(q);
        else if (p[q] == 'Y')
            c.sdg(q).h(q);
    }
    for (std::size_t k = 0; k + 1 < active.size(); ++k)
        c.cx(active[k], active[k + 1]);
    c.rz(active.back(), theta);
    for (std::size_t k = active.size() - 1; k-- > 0;)
        c.cx(active[k], active[k + 1]);
    for (std::size_t q : active) {
        if (p[q] == 'X')
            c.h(q);
        else if (p[q] == 'Y')
            c.h(q).s(q);
    }
    return c;
}

/// Full 2^n x 2^n unitary of a gate, built by Kronecker products.
inline Operator dense_gate_unitary(const Gate& g, double angle, std::size_t n)
{
    if (g.kind == GateKind::PauliRotation) {
        const Operator p = reconstruct(PauliSum(n, {{1.0, g.pauli}}));
        return expm(p, -kI * (angle / 2));
    }
    if (!is_two_qubit(g.kind)) {
        const Matrix u = single_qubit_matrix(g.kind, angle);
        Operator acc = Operator::identity(1);
        for (std::size_t q = 0; q < n; ++q)
            acc = kron(acc, q == g.q0 ? Operator(u) : Operator::identity(2));
        return acc;
    }
    // Two-qubit gates: |1><1| on the control/first qubit selects the action.
    const Operator p0({{1.0, 0.0}, {0.0, 0.0}});
    const Operator p1({{0.0, 0.0}, {0.0, 1.0}});
    const Operator on_target = g.kind == GateKind::CZ ? Operator({{1.0, 0.0}, {0.0, -1.0}})
                                                      : Operator({{0.0, 1.0}, {1.0, 0.0}});
    Operator a = Operator::identity(1), b = Operator::identity(1);
    for (std::size_t q = 0; q < n; ++q) {
        const Operator id = Operator::identity(2);
        a = kron(a, q == g.q0 ? p0 : id);
        b = kron(b, q == g.q0 ? p1 : (q == g.q1 ? on_target : id));
    }
    return a + b;
}

} // namespace mmsim
