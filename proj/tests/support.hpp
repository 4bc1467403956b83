#pragma once

#include <cstdint>
#include <random>

#include "mmsim/operator.hpp"
#include "mmsim/statevector.hpp"

namespace mmsim::testing {

inline Matrix random_matrix(std::size_t n, std::mt19937_64& rng)
{
    std::normal_distribution<double> d;
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            m(r, c) = cplx(d(rng), d(rng));
    return m;
}

inline Operator random_hermitian(std::size_t n, std::mt19937_64& rng)
{
    const Matrix m = random_matrix(n, rng);
    return Operator(Matrix(0.5 * (m + m.adjoint())));
}

inline Statevector random_state(std::size_t n_qubits, std::mt19937_64& rng)
{
    std::normal_distribution<double> d;
    Vector v(static_cast<Eigen::Index>(std::size_t{1} << n_qubits));
    for (Eigen::Index k = 0; k < v.size(); ++k)
        v(k) = cplx(d(rng), d(rng));
    return Statevector(Vector(v / v.norm()));
}

} // namespace mmsim::testing
