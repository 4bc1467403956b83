#pragma once

// Dense complex operators: construction, Kronecker products, Hermitian
// eigendecomposition and matrix exponentials. Every Hamiltonian, constraint
// and charge in the library is carried by an Operator.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "mmsim/error.hpp"

namespace mmsim {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

/// Default tolerance for Hermiticity predicates.
inline constexpr double kHermitianTol = 1e-10;

class Operator {
public:
    Operator() = default;

    explicit Operator(Matrix m) : m_(std::move(m))
    {
        if (m_.rows() != m_.cols()) {
            std::ostringstream os;
            os << "operator must be square, got " << m_.rows() << "x" << m_.cols();
            throw UsageError(os.str());
        }
    }

    /// Row-major construction from nested lists, mostly for tests.
    Operator(std::initializer_list<std::initializer_list<cplx>> rows)
    {
        const auto n = static_cast<Eigen::Index>(rows.size());
        m_ = Matrix::Zero(n, n);
        Eigen::Index r = 0;
        for (const auto& row : rows) {
            if (static_cast<Eigen::Index>(row.size()) != n)
                throw UsageError("operator must be square");
            Eigen::Index c = 0;
            for (const auto& v : row)
                m_(r, c++) = v;
            ++r;
        }
    }

    static Operator identity(std::size_t dim)
    {
        return Operator(Matrix::Identity(idx(dim), idx(dim)));
    }

    static Operator zero(std::size_t dim) { return Operator(Matrix::Zero(idx(dim), idx(dim))); }

    static Operator diagonal(std::initializer_list<cplx> entries)
    {
        Matrix m = Matrix::Zero(idx(entries.size()), idx(entries.size()));
        Eigen::Index k = 0;
        for (const auto& v : entries) {
            m(k, k) = v;
            ++k;
        }
        return Operator(std::move(m));
    }

    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }

    const Matrix& matrix() const { return m_; }

    cplx operator()(std::size_t r, std::size_t c) const { return m_(idx(r), idx(c)); }

    /// max |h(j,k) - conj(h(k,j))|
    double max_asymmetry() const
    {
        if (m_.size() == 0)
            return 0.0;
        return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    }

    bool is_hermitian(double tol = kHermitianTol) const { return max_asymmetry() <= tol; }

    Operator adjoint() const { return Operator(m_.adjoint()); }

    double max_abs() const { return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff(); }

    double frobenius_norm() const { return m_.norm(); }

    cplx trace() const { return m_.trace(); }

    Vector apply(const Vector& v) const
    {
        if (v.size() != m_.cols())
            throw UsageError("vector length does not match operator dimension");
        return m_ * v;
    }

    Operator& operator+=(const Operator& o)
    {
        check_same_dim(o);
        m_ += o.m_;
        return *this;
    }
    Operator& operator-=(const Operator& o)
    {
        check_same_dim(o);
        m_ -= o.m_;
        return *this;
    }
    Operator& operator*=(cplx s)
    {
        m_ *= s;
        return *this;
    }

    friend Operator operator+(Operator a, const Operator& b) { return a += b; }
    friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
    friend Operator operator-(Operator a) { return a *= -1.0; }
    friend Operator operator*(Operator a, cplx s) { return a *= s; }
    friend Operator operator*(cplx s, Operator a) { return a *= s; }
    friend Operator operator*(Operator a, double s) { return a *= cplx(s, 0.0); }
    friend Operator operator*(double s, Operator a) { return a *= cplx(s, 0.0); }
    friend Operator operator*(const Operator& a, const Operator& b)
    {
        a.check_same_dim(b);
        return Operator(a.m_ * b.m_);
    }

private:
    static Eigen::Index idx(std::size_t n) { return static_cast<Eigen::Index>(n); }

    void check_same_dim(const Operator& o) const
    {
        if (o.dim() != dim()) {
            std::ostringstream os;
            os << "dimension mismatch: " << dim() << " vs " << o.dim();
            throw UsageError(os.str());
        }
    }

    Matrix m_;
};

/// Largest entrywise deviation between two operators of equal dimension.
inline double max_abs_diff(const Operator& a, const Operator& b) { return (a - b).max_abs(); }

inline Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

inline Operator anticommutator(const Operator& a, const Operator& b) { return a * b + b * a; }

/// result[(j*db + l), (k*db + m)] = a[j,k] * b[l,m]
inline Operator kron(const Operator& a, const Operator& b)
{
    const auto da = static_cast<Eigen::Index>(a.dim());
    const auto db = static_cast<Eigen::Index>(b.dim());
    Matrix r(da * db, da * db);
    for (Eigen::Index j = 0; j < da; ++j)
        for (Eigen::Index k = 0; k < da; ++k)
            r.block(j * db, k * db, db, db) = a.matrix()(j, k) * b.matrix();
    return Operator(std::move(r));
}

/// Left-to-right Kronecker product of all factors.
inline Operator kron_all(std::initializer_list<Operator> factors)
{
    if (factors.size() == 0)
        throw UsageError("kron_all needs at least one factor");
    auto it = factors.begin();
    Operator acc = *it++;
    for (; it != factors.end(); ++it)
        acc = kron(acc, *it);
    return acc;
}

struct Spectrum {
    RealVector values; // ascending
    Matrix vectors;    // column k pairs with values[k]

    Vector vector(std::size_t k) const { return vectors.col(static_cast<Eigen::Index>(k)); }
};

/// Hermitian eigendecomposition. Throws NumericalError with the measured
/// asymmetry when h is not Hermitian to `tol`.
inline Spectrum eigh(const Operator& h, double tol = kHermitianTol)
{
    const double asym = h.max_asymmetry();
    if (asym > tol) {
        std::ostringstream os;
        os << "eigh: operator is not Hermitian (max asymmetry " << asym << " > " << tol << ")";
        throw NumericalError(os.str());
    }
    // Symmetrize so round-off asymmetry does not leak into the solver.
    const Matrix herm = 0.5 * (h.matrix() + h.matrix().adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigh: eigensolver did not converge");
    return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

inline double min_eigenvalue(const Operator& h, double tol = kHermitianTol)
{
    return eigh(h, tol).values(0);
}

/// exp(scale * a). Hermitian generators go through the eigendecomposition;
/// anything else falls back to Pade scaling-and-squaring.
inline Operator expm(const Operator& a, cplx scale, double hermitian_tol = kHermitianTol)
{
    if (a.dim() == 0)
        return a;
    if (a.is_hermitian(hermitian_tol)) {
        const Spectrum s = eigh(a, hermitian_tol);
        Vector phases(s.values.size());
        for (Eigen::Index k = 0; k < s.values.size(); ++k)
            phases(k) = std::exp(scale * s.values(k));
        return Operator(s.vectors * phases.asDiagonal() * s.vectors.adjoint());
    }
    const Matrix scaled = scale * a.matrix();
    return Operator(scaled.exp());
}

/// Embeds a single-factor operator into slot `slot` of a tensor product of
/// identity factors with the given dimensions.
inline Operator embed(const Operator& op, std::size_t slot, std::initializer_list<std::size_t> dims)
{
    if (slot >= dims.size())
        throw UsageError("embed: slot out of range");
    std::size_t i = 0;
    Operator acc;
    bool first = true;
    for (std::size_t d : dims) {
        Operator f = (i == slot) ? op : Operator::identity(d);
        if (i == slot && op.dim() != d)
            throw UsageError("embed: operator dimension does not match its slot");
        acc = first ? f : kron(acc, f);
        first = false;
        ++i;
    }
    return acc;
}

} // namespace mmsim
