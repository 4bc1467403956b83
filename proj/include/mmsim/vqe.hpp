#pragma once

// Variational ground-state search with a hardware-efficient RY/CZ ansatz.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <sstream>
#include <vector>

#include "mmsim/circuit.hpp"
#include "mmsim/operator.hpp"
#include "mmsim/pauli.hpp"
#include "mmsim/statevector.hpp"

namespace mmsim {

struct AnsatzSpec {
    std::size_t n_qubits = 1;
    std::size_t depth = 3; // number of CZ entangling blocks

    std::size_t num_parameters() const { return n_qubits * (depth + 1); }
};

/// [RY on all qubits] then depth x [CZ chain (0,1),(1,2),...; RY on all qubits].
inline Circuit build_ansatz(const AnsatzSpec& spec)
{
    if (spec.n_qubits == 0)
        throw UsageError("build_ansatz: n_qubits must be positive");
    Circuit c(spec.n_qubits);
    for (std::size_t q = 0; q < spec.n_qubits; ++q)
        c.ry_param(q);
    for (std::size_t layer = 0; layer < spec.depth; ++layer) {
        for (std::size_t q = 0; q + 1 < spec.n_qubits; ++q)
            c.cz(q, q + 1);
        for (std::size_t q = 0; q < spec.n_qubits; ++q)
            c.ry_param(q);
    }
    return c;
}

/// Energy functional over ansatz parameters. Caches the circuit and, when it
/// is cheaper than the term-by-term kernel, a dense copy of the Hamiltonian.
class EnergyObjective {
public:
    EnergyObjective(const PauliSum& p, const AnsatzSpec& spec) : p_(p), spec_(spec), circuit_(build_ansatz(spec))
    {
        if (p.n_qubits() != spec.n_qubits) {
            std::ostringstream os;
            os << "energy: Hamiltonian acts on " << p.n_qubits() << " qubits, ansatz on " << spec.n_qubits;
            throw UsageError(os.str());
        }
        const std::size_t dim = std::size_t{1} << spec.n_qubits;
        if (p.size() > dim)
            dense_ = reconstruct(p).matrix();
    }

    std::size_t num_parameters() const { return circuit_.num_parameters(); }
    const Circuit& circuit() const { return circuit_; }

    Statevector state(std::span<const double> theta) const
    {
        return apply(circuit_, theta, Statevector(spec_.n_qubits));
    }

    double operator()(std::span<const double> theta) const
    {
        if (theta.size() != num_parameters()) {
            std::ostringstream os;
            os << "energy: expected " << num_parameters() << " parameters, got " << theta.size();
            throw UsageError(os.str());
        }
        const Statevector psi = state(theta);
        if (dense_.size() == 0)
            return expectation(p_, psi);
        const cplx e = psi.amplitudes().dot(dense_ * psi.amplitudes());
        if (std::abs(e.imag()) > kImagResidueTol)
            throw NumericalError("energy: imaginary residue in expectation value");
        return e.real();
    }

private:
    PauliSum p_;
    AnsatzSpec spec_;
    Circuit circuit_;
    Matrix dense_;
};

/// E(theta) = <psi(theta)|H|psi(theta)>, psi(theta) = ansatz(theta)|0...0>.
inline double energy(const PauliSum& p, const AnsatzSpec& spec, std::span<const double> theta)
{
    return EnergyObjective(p, spec)(theta);
}

enum class OptimizerKind { BFGS, NelderMead };

struct VqeOptions {
    std::uint64_t seed = 7;
    std::size_t restarts = 5;       // includes the all-zeros start
    std::size_t max_evals = 5000;   // per restart
    double ftol = 1e-8;             // |dE| per iteration
    double fd_step = 1e-6;          // central-difference step
    double init_scale = 0.1;        // uniform [-init_scale, init_scale]
    OptimizerKind optimizer = OptimizerKind::BFGS;
};

struct TracePoint {
    std::size_t eval_index = 0;
    double energy = 0.0;
};

struct VqeResult {
    double best_energy = std::numeric_limits<double>::infinity();
    std::vector<double> best_params;
    std::vector<TracePoint> trace;
    std::size_t evaluations = 0;
    bool converged = false;
    std::size_t best_restart = 0;
};

namespace detail {

struct BudgetExhausted {};

/// Counts evaluations, records the trace and enforces the budget.
class CountingObjective {
public:
    CountingObjective(const EnergyObjective& f, VqeResult& result, std::size_t budget)
        : f_(f), result_(result), budget_(budget)
    {
    }

    bool exhausted() const { return used_ >= budget_; }
    std::size_t used() const { return used_; }

    double operator()(std::span<const double> theta)
    {
        if (exhausted())
            throw BudgetExhausted{};
        const double e = f_(theta);
        ++used_;
        result_.trace.push_back({result_.evaluations++, e});
        if (e < local_best_) {
            local_best_ = e;
            local_best_params_.assign(theta.begin(), theta.end());
        }
        return e;
    }

    double best() const { return local_best_; }
    const std::vector<double>& best_params() const { return local_best_params_; }

private:
    const EnergyObjective& f_;
    VqeResult& result_;
    std::size_t budget_;
    std::size_t used_ = 0;
    double local_best_ = std::numeric_limits<double>::infinity();
    std::vector<double> local_best_params_;
};

using Vec = Eigen::VectorXd;

inline double eval_at(CountingObjective& f, const Vec& x)
{
    return f(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
}

inline Vec central_gradient(CountingObjective& f, const Vec& x, double h)
{
    Vec g(x.size());
    Vec xp = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        xp(i) = x(i) + h;
        const double fp = eval_at(f, xp);
        xp(i) = x(i) - h;
        const double fm = eval_at(f, xp);
        xp(i) = x(i);
        g(i) = (fp - fm) / (2.0 * h);
    }
    return g;
}

/// Quasi-Newton BFGS with Armijo backtracking. Returns true on convergence.
inline bool run_bfgs(CountingObjective& f, Vec x, const VqeOptions& opt)
{
    const Eigen::Index n = x.size();
    double fx = eval_at(f, x);
    Vec g = central_gradient(f, x, opt.fd_step);
    Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);
    while (!f.exhausted()) {
        if (g.norm() < 1e-10)
            return true;
        Vec dir = -hinv * g;
        double slope = g.dot(dir);
        if (slope >= 0.0) {
            hinv.setIdentity();
            dir = -g;
            slope = -g.squaredNorm();
        }
        double step = 1.0;
        double fnew = fx;
        Vec xnew = x;
        bool accepted = false;
        for (int ls = 0; ls < 40 && !f.exhausted(); ++ls) {
            xnew = x + step * dir;
            fnew = eval_at(f, xnew);
            if (fnew <= fx + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted)
            return std::abs(fnew - fx) < opt.ftol;
        const Vec gnew = central_gradient(f, xnew, opt.fd_step);
        const Vec s = xnew - x;
        const Vec y = gnew - g;
        const double sy = s.dot(y);
        if (sy > 1e-12) {
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
            hinv = (id - rho * s * y.transpose()) * hinv * (id - rho * y * s.transpose()) + rho * s * s.transpose();
        }
        const double df = fx - fnew;
        x = xnew;
        fx = fnew;
        g = gnew;
        if (std::abs(df) < opt.ftol)
            return true;
    }
    return false;
}

/// Nelder-Mead simplex, used when gradients are not wanted.
inline bool run_nelder_mead(CountingObjective& f, const Vec& x0, const VqeOptions& opt)
{
    const Eigen::Index n = x0.size();
    std::vector<Vec> pts(static_cast<std::size_t>(n + 1), x0);
    std::vector<double> vals(static_cast<std::size_t>(n + 1));
    for (Eigen::Index i = 0; i < n; ++i)
        pts[static_cast<std::size_t>(i + 1)](i) += 0.2;
    for (std::size_t i = 0; i < pts.size(); ++i)
        vals[i] = eval_at(f, pts[i]);
    std::vector<std::size_t> order(pts.size());
    while (!f.exhausted()) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];
        if (std::abs(vals[worst] - vals[best]) < opt.ftol)
            return true;
        Vec centroid = Vec::Zero(n);
        for (std::size_t i : order)
            if (i != worst)
                centroid += pts[i];
        centroid /= static_cast<double>(n);
        const Vec xr = centroid + (centroid - pts[worst]);
        const double fr = eval_at(f, xr);
        if (fr < vals[best]) {
            const Vec xe = centroid + 2.0 * (centroid - pts[worst]);
            const double fe = eval_at(f, xe);
            if (fe < fr) {
                pts[worst] = xe;
                vals[worst] = fe;
            } else {
                pts[worst] = xr;
                vals[worst] = fr;
            }
        } else if (fr < vals[second]) {
            pts[worst] = xr;
            vals[worst] = fr;
        } else {
            const Vec xc = centroid + 0.5 * (pts[worst] - centroid);
            const double fc = eval_at(f, xc);
            if (fc < vals[worst]) {
                pts[worst] = xc;
                vals[worst] = fc;
            } else {
                for (std::size_t i : order) {
                    if (i == best)
                        continue;
                    pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
                    vals[i] = eval_at(f, pts[i]);
                }
            }
        }
    }
    return false;
}

} // namespace detail

/// Best-of-restarts local minimization of the ansatz energy. Restart 0 starts
/// from all-zero angles; the others draw angles uniformly from the seeded RNG.
/// Every energy evaluation (including finite-difference probes) is traced.
inline VqeResult minimize(const PauliSum& p, const AnsatzSpec& spec, const VqeOptions& opt = {})
{
    const EnergyObjective objective(p, spec);
    const std::size_t np = objective.num_parameters();
    VqeResult result;
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> dist(-opt.init_scale, opt.init_scale);
    const std::size_t restarts = std::max<std::size_t>(opt.restarts, 1);
    for (std::size_t r = 0; r < restarts; ++r) {
        detail::Vec x0 = detail::Vec::Zero(static_cast<Eigen::Index>(np));
        if (r > 0)
            for (Eigen::Index i = 0; i < x0.size(); ++i)
                x0(i) = dist(rng);
        detail::CountingObjective counted(objective, result, opt.max_evals);
        bool ok = false;
        try {
            ok = opt.optimizer == OptimizerKind::BFGS ? detail::run_bfgs(counted, x0, opt)
                                                      : detail::run_nelder_mead(counted, x0, opt);
        } catch (const detail::BudgetExhausted&) {
            ok = false;
        }
        if (counted.best() < result.best_energy) {
            result.best_energy = counted.best();
            result.best_params = counted.best_params();
            result.converged = ok;
            result.best_restart = r;
        }
    }
    return result;
}

} // namespace mmsim
