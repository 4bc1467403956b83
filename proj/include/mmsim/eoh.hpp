#pragma once

// Evolution of time-dependent Hamiltonians: time-sliced Trotter evolution,
// the exact per-slice dense oracle, and closed-form Wronskian propagators for
// quadratic Hamiltonians.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <sstream>
#include <vector>

#include "mmsim/circuit.hpp"
#include "mmsim/operator.hpp"
#include "mmsim/pauli.hpp"
#include "mmsim/statevector.hpp"

namespace mmsim {

/// Slicing of [t_initial, t_final]. The Hamiltonian is sampled at slice midpoints.
struct TimeGrid {
    double t_initial = 0.1;
    double t_final = 4.0;
    std::size_t n_slices = 100;

    double dt() const { return (t_final - t_initial) / static_cast<double>(n_slices); }
    double midpoint(std::size_t k) const { return t_initial + (static_cast<double>(k) + 0.5) * dt(); }
    double slice_end(std::size_t k) const { return t_initial + static_cast<double>(k + 1) * dt(); }

    /// Throws UsageError unless dt > 0 (and t_initial > 0 when the drive is singular at t = 0).
    void validate(bool require_positive_start = false) const
    {
        if (n_slices == 0)
            throw UsageError("TimeGrid: n_slices must be positive");
        if (!(t_final > t_initial))
            throw UsageError("TimeGrid: t_final must exceed t_initial");
        if (require_positive_start && !(t_initial > 0.0))
            throw UsageError("TimeGrid: t_initial must be positive for a drive singular at t = 0");
    }
};

enum class TrotterOrder { First, Second };

struct TrotterOptions {
    /// First-order product steps inside each slice; 1 is the plain slice product.
    std::size_t steps_per_slice = 1;
    TrotterOrder order = TrotterOrder::First;
};

using PauliSchedule = std::function<PauliSum(double)>;
using OperatorSchedule = std::function<Operator(double)>;
/// Called after each slice with (slice index, time at slice end, state).
using SliceObserver = std::function<void(std::size_t, double, const Statevector&)>;

/// psi_f = prod_k [prod_j exp(-i c_j(t_k) dt P_j)] psi_0, slices in increasing
/// time, terms in descending |c_j| (ties by string).
inline Statevector trotter_evolve(const PauliSchedule& h_of_t, const TimeGrid& grid, Statevector psi,
                                  const TrotterOptions& opt = {}, const SliceObserver& observe = {})
{
    grid.validate();
    if (opt.steps_per_slice == 0)
        throw UsageError("trotter_evolve: steps_per_slice must be positive");
    const double dt = grid.dt();
    const double h = dt / static_cast<double>(opt.steps_per_slice);
    for (std::size_t k = 0; k < grid.n_slices; ++k) {
        const PauliSum hk = h_of_t(grid.midpoint(k));
        if (hk.n_qubits() != psi.n_qubits())
            throw UsageError("trotter_evolve: Hamiltonian and state qubit counts differ");
        const std::vector<PauliTerm> terms = trotter_order(hk);
        for (std::size_t r = 0; r < opt.steps_per_slice; ++r) {
            if (opt.order == TrotterOrder::First) {
                for (const auto& t : terms)
                    apply_pauli_rotation(t.string, 2.0 * t.coeff * h, psi);
            } else {
                for (const auto& t : terms)
                    apply_pauli_rotation(t.string, t.coeff * h, psi);
                for (auto it = terms.rbegin(); it != terms.rend(); ++it)
                    apply_pauli_rotation(it->string, it->coeff * h, psi);
            }
        }
        if (observe)
            observe(k, grid.slice_end(k), psi);
    }
    return psi;
}

/// psi_f = prod_k expm(h(t_k), -i dt) psi_0 with dense exponentials.
inline Statevector exact_evolve(const OperatorSchedule& h_of_t, const TimeGrid& grid, Statevector psi,
                                const SliceObserver& observe = {})
{
    grid.validate();
    const double dt = grid.dt();
    for (std::size_t k = 0; k < grid.n_slices; ++k) {
        const Operator hk = h_of_t(grid.midpoint(k));
        if (hk.dim() != psi.dim())
            throw UsageError("exact_evolve: Hamiltonian and state dimensions differ");
        if (!hk.is_hermitian()) {
            std::ostringstream os;
            os << "exact_evolve: Hamiltonian at t = " << grid.midpoint(k) << " is not Hermitian (asymmetry "
               << hk.max_asymmetry() << ")";
            throw NumericalError(os.str());
        }
        psi.amplitudes() = expm(hk, -kI * dt).matrix() * psi.amplitudes();
        if (observe)
            observe(k, grid.slice_end(k), psi);
    }
    return psi;
}

// ---------------------------------------------------------------------------
// Wronskian propagators

/// Two classical solutions u, v with their time derivatives at t_i and t_f.
struct PropagatorInputs {
    cplx u_i, du_i, u_f, du_f;
    cplx v_i, dv_i, v_f, dv_f;

    /// u_i v_f - u_f v_i, normalized to 1.
    cplx normalization() const { return u_i * v_f - u_f * v_i; }
    cplx wronskian_initial() const { return u_i * dv_i - v_i * du_i; }
    cplx wronskian_final() const { return u_f * dv_f - v_f * du_f; }
};

/// K = sqrt(W / 2 pi i) exp[i/2 ((u_i v'_f - v_i u'_f) q_f^2 + (u_f v'_i - v_f u'_i) q_i^2 - 2 W q_i q_f)],
/// principal branch of the square root.
inline cplx wronskian_propagator(const PropagatorInputs& in, double q_i, double q_f)
{
    const cplx w = in.wronskian_initial();
    const cplx a_f = in.u_i * in.dv_f - in.v_i * in.du_f;
    const cplx a_i = in.u_f * in.dv_i - in.v_f * in.du_i;
    const cplx phase = 0.5 * kI * (a_f * q_f * q_f + a_i * q_i * q_i - 2.0 * w * q_i * q_f);
    return std::sqrt(w / (2.0 * std::numbers::pi * kI)) * std::exp(phase);
}

/// sqrt(1 / 2 pi i T) exp(i (q_f - q_i)^2 / 2T)
inline cplx free_propagator(double duration, double q_i, double q_f)
{
    if (duration == 0.0)
        throw UsageError("free_propagator: zero duration");
    const double dq = q_f - q_i;
    return std::sqrt(1.0 / (2.0 * std::numbers::pi * kI * duration)) * std::exp(kI * (dq * dq / (2.0 * duration)));
}

/// u = cos(wt)/sqrt(sin wT), v = sin(wt)/sqrt(sin wT) on [0, T].
inline PropagatorInputs sho_inputs(double omega, double duration)
{
    const double s = std::sin(omega * duration);
    if (std::abs(s) < 1e-14)
        throw UsageError("sho_inputs: caustic, sin(omega T) = 0");
    const cplx norm = std::sqrt(cplx(s, 0.0));
    const double c = std::cos(omega * duration);
    PropagatorInputs in;
    in.u_i = 1.0 / norm;
    in.du_i = 0.0;
    in.u_f = c / norm;
    in.du_f = -omega * s / norm;
    in.v_i = 0.0;
    in.dv_i = omega / norm;
    in.v_f = s / norm;
    in.dv_f = omega * c / norm;
    return in;
}

/// Closed-form harmonic-oscillator kernel over duration T.
inline cplx sho_propagator(double omega, double duration, double q_i, double q_f)
{
    const double s = std::sin(omega * duration);
    if (std::abs(s) < 1e-14)
        throw UsageError("sho_propagator: caustic, sin(omega T) = 0");
    const double c = std::cos(omega * duration);
    const cplx pref = std::sqrt(omega / (2.0 * std::numbers::pi * kI * s));
    return pref * std::exp(kI * omega / (2.0 * s) * (c * (q_f * q_f + q_i * q_i) - 2.0 * q_i * q_f));
}

/// Power-law solution data: u = c t^a, v = c t^(1-a).
struct PowerLawSolution {
    double a = 1.0;
    double c_squared = 0.0; // (t_i^a t_f^(1-a) - t_f^a t_i^(1-a))^-1, may be negative
    double wronskian = 0.0; // c^2 (1 - 2a)
};

inline PowerLawSolution power_law_solution(double k_squared, double t_i, double t_f)
{
    if (4.0 * k_squared + 1.0 < 0.0)
        throw UsageError("power_law: requires 4k^2 + 1 >= 0");
    if (!(t_i > 0.0) || !(t_f > 0.0))
        throw UsageError("power_law: times must be positive");
    if (t_i == t_f)
        throw UsageError("power_law: t_i must differ from t_f");
    PowerLawSolution s;
    s.a = 0.5 * (1.0 + std::sqrt(4.0 * k_squared + 1.0));
    const double denom = std::pow(t_i, s.a) * std::pow(t_f, 1.0 - s.a) - std::pow(t_f, s.a) * std::pow(t_i, 1.0 - s.a);
    s.c_squared = 1.0 / denom;
    s.wronskian = s.c_squared * (1.0 - 2.0 * s.a);
    return s;
}

inline PropagatorInputs power_law_inputs(double k_squared, double t_i, double t_f)
{
    const PowerLawSolution s = power_law_solution(k_squared, t_i, t_f);
    const cplx c = std::sqrt(cplx(s.c_squared, 0.0));
    const double a = s.a;
    PropagatorInputs in;
    in.u_i = c * std::pow(t_i, a);
    in.du_i = c * a * std::pow(t_i, a - 1.0);
    in.u_f = c * std::pow(t_f, a);
    in.du_f = c * a * std::pow(t_f, a - 1.0);
    in.v_i = c * std::pow(t_i, 1.0 - a);
    in.dv_i = c * (1.0 - a) * std::pow(t_i, -a);
    in.v_f = c * std::pow(t_f, 1.0 - a);
    in.dv_f = c * (1.0 - a) * std::pow(t_f, -a);
    return in;
}

inline cplx power_law_propagator(double k_squared, double t_i, double t_f, double q_i, double q_f)
{
    return wronskian_propagator(power_law_inputs(k_squared, t_i, t_f), q_i, q_f);
}

} // namespace mmsim
