#pragma once

#include <cstddef>
#include <cstdint>
#include <sstream>
#include <utility>

#include "mmsim/operator.hpp"
#include "mmsim/pauli.hpp"

namespace mmsim {

/// Amplitudes of an n-qubit register. Qubit 0 is the leftmost tensor factor,
/// i.e. the most significant bit of the basis index.
class Statevector {
public:
    Statevector() = default;

    /// |0...0> on n qubits.
    explicit Statevector(std::size_t n_qubits) : n_(n_qubits), amps_(Vector::Zero(dim_for(n_qubits)))
    {
        amps_(0) = 1.0;
    }

    explicit Statevector(Vector amplitudes) : amps_(std::move(amplitudes))
    {
        const int n = qubits_for_dim(static_cast<std::size_t>(amps_.size()));
        if (n < 0) {
            std::ostringstream os;
            os << "Statevector: length " << amps_.size() << " is not a power of two";
            throw UsageError(os.str());
        }
        n_ = static_cast<std::size_t>(n);
    }

    static Statevector basis(std::size_t n_qubits, std::uint64_t index)
    {
        Statevector s(n_qubits);
        if (index >= s.dim())
            throw UsageError("Statevector::basis: index out of range");
        s.amps_(0) = 0.0;
        s.amps_(static_cast<Eigen::Index>(index)) = 1.0;
        return s;
    }

    std::size_t n_qubits() const { return n_; }
    std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }

    const Vector& amplitudes() const { return amps_; }
    Vector& amplitudes() { return amps_; }

    cplx operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }
    cplx& operator[](std::size_t i) { return amps_(static_cast<Eigen::Index>(i)); }

    double norm() const { return amps_.norm(); }

    Statevector normalized() const
    {
        const double nrm = norm();
        if (nrm == 0.0)
            throw NumericalError("Statevector: cannot normalize the zero vector");
        return Statevector(Vector(amps_ / nrm));
    }

    /// <this|other>
    cplx inner(const Statevector& other) const { return amps_.dot(other.amps_); }

private:
    static Eigen::Index dim_for(std::size_t n)
    {
        if (n > 30)
            throw UsageError("Statevector: too many qubits");
        return static_cast<Eigen::Index>(std::size_t{1} << n);
    }

    std::size_t n_ = 0;
    Vector amps_;
};

inline double max_abs_diff(const Statevector& a, const Statevector& b)
{
    if (a.dim() != b.dim())
        throw UsageError("statevector dimension mismatch");
    return (a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff();
}

} // namespace mmsim
