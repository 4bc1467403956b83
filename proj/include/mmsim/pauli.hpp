#pragma once

// Hamiltonian mapping: dense Hermitian operators <-> weighted Pauli sums.
//
// Letter 0 of a PauliString acts on the leftmost tensor factor, i.e. the most
// significant bit of a basis index. Every Pauli string maps basis state |j>
// to phase(j) |j ^ flip_mask>, so it has exactly one nonzero per row; all
// kernels below rely on that.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mmsim/operator.hpp"

namespace mmsim {

inline constexpr double kDefaultPauliThreshold = 1e-12;
inline constexpr double kImagResidueTol = 1e-10;

class PauliString {
public:
    PauliString() = default;

    explicit PauliString(std::string letters) : letters_(std::move(letters))
    {
        if (letters_.size() > 62)
            throw UsageError("PauliString: at most 62 qubits supported");
        for (char c : letters_)
            if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z')
                throw UsageError(std::string("PauliString: invalid letter '") + c + "'");
    }

    static PauliString identity(std::size_t n) { return PauliString(std::string(n, 'I')); }

    std::size_t size() const { return letters_.size(); }
    const std::string& str() const { return letters_; }
    char operator[](std::size_t q) const { return letters_[q]; }

    bool is_identity() const
    {
        return std::all_of(letters_.begin(), letters_.end(), [](char c) { return c == 'I'; });
    }

    /// Bits flipped by the string (X or Y positions).
    std::uint64_t flip_mask() const { return mask([](char c) { return c == 'X' || c == 'Y'; }); }

    /// Bits that pick up a sign (Z or Y positions).
    std::uint64_t sign_mask() const { return mask([](char c) { return c == 'Z' || c == 'Y'; }); }

    int y_count() const
    {
        return static_cast<int>(std::count(letters_.begin(), letters_.end(), 'Y'));
    }

    /// P|j> = phase(j) |j ^ flip_mask()>
    cplx phase(std::uint64_t j) const { return phase(j, sign_mask(), y_count()); }

    static cplx phase(std::uint64_t j, std::uint64_t sign_mask, int y_count)
    {
        static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        const cplx base = kIPow[y_count & 3];
        return (std::popcount(j & sign_mask) & 1) ? -base : base;
    }

    friend bool operator==(const PauliString&, const PauliString&) = default;
    friend auto operator<=>(const PauliString&, const PauliString&) = default;

    friend std::ostream& operator<<(std::ostream& os, const PauliString& s) { return os << s.letters_; }

private:
    template <class Pred>
    std::uint64_t mask(Pred pred) const
    {
        std::uint64_t m = 0;
        const std::size_t n = letters_.size();
        for (std::size_t q = 0; q < n; ++q)
            if (pred(letters_[q]))
                m |= std::uint64_t{1} << (n - 1 - q);
        return m;
    }

    std::string letters_;
};

struct PauliTerm {
    double coeff = 0.0;
    PauliString string;
};

class PauliSum {
public:
    PauliSum() = default;

    PauliSum(std::size_t n_qubits, std::vector<PauliTerm> terms) : n_(n_qubits), terms_(std::move(terms))
    {
        if (n_ == 0)
            throw UsageError("PauliSum: n_qubits must be positive");
        std::set<std::string> seen;
        for (const auto& t : terms_) {
            if (t.string.size() != n_) {
                std::ostringstream os;
                os << "PauliSum: string '" << t.string << "' has length " << t.string.size() << ", expected "
                   << n_;
                throw UsageError(os.str());
            }
            if (!seen.insert(t.string.str()).second)
                throw UsageError("PauliSum: duplicate string " + t.string.str());
        }
    }

    std::size_t n_qubits() const { return n_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    const std::vector<PauliTerm>& terms() const { return terms_; }

    auto begin() const { return terms_.begin(); }
    auto end() const { return terms_.end(); }

    /// Coefficient of `s`, zero if absent.
    double coeff(const PauliString& s) const
    {
        for (const auto& t : terms_)
            if (t.string == s)
                return t.coeff;
        return 0.0;
    }

private:
    std::size_t n_ = 0;
    std::vector<PauliTerm> terms_;
};

/// Number of qubits n with 2^n == dim, or -1 if dim is not a power of two.
inline int qubits_for_dim(std::size_t dim)
{
    if (dim == 0 || !std::has_single_bit(dim))
        return -1;
    return std::countr_zero(dim);
}

/// Smallest n with 2^n >= dim.
inline int qubits_to_hold(std::size_t dim)
{
    return dim <= 1 ? 0 : static_cast<int>(std::bit_width(dim - 1));
}

/// Tr(P_s h) / 2^n through the one-nonzero-per-row structure of P_s.
inline cplx pauli_coefficient(const Operator& h, const PauliString& s)
{
    const int n = qubits_for_dim(h.dim());
    if (n < 0 || static_cast<std::size_t>(n) != s.size())
        throw UsageError("pauli_coefficient: string length does not match operator");
    const std::uint64_t flip = s.flip_mask();
    const std::uint64_t sign = s.sign_mask();
    const int ny = s.y_count();
    cplx acc = 0.0;
    const auto& m = h.matrix();
    for (std::uint64_t j = 0; j < h.dim(); ++j)
        acc += PauliString::phase(j, sign, ny) * m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j ^ flip));
    return acc / static_cast<double>(h.dim());
}

namespace detail {

// Splits the block on its leading qubit:
// M = I(A+D)/2 + X(B+C)/2 + Y i(B-C)/2 + Z(A-D)/2, then recurses.
inline void decompose_block(const Matrix& m, std::string& prefix, double threshold, std::vector<PauliTerm>& out)
{
    if (m.rows() == 1) {
        const cplx c = m(0, 0);
        if (std::abs(c.imag()) > kImagResidueTol) {
            std::ostringstream os;
            os << "decompose: coefficient of " << prefix << " has imaginary part " << c.imag();
            throw NumericalError(os.str());
        }
        if (std::abs(c.real()) > threshold)
            out.push_back({c.real(), PauliString(prefix)});
        return;
    }
    const Eigen::Index h = m.rows() / 2;
    const auto a = m.topLeftCorner(h, h);
    const auto b = m.topRightCorner(h, h);
    const auto c = m.bottomLeftCorner(h, h);
    const auto d = m.bottomRightCorner(h, h);
    const std::pair<char, Matrix> parts[4] = {
        {'I', 0.5 * (a + d)},
        {'X', 0.5 * (b + c)},
        {'Y', (0.5 * kI) * (b - c)},
        {'Z', 0.5 * (a - d)},
    };
    for (const auto& [letter, block] : parts) {
        if (block.cwiseAbs().maxCoeff() == 0.0)
            continue;
        prefix.push_back(letter);
        decompose_block(block, prefix, threshold, out);
        prefix.pop_back();
    }
}

} // namespace detail

/// Pauli expansion of a Hermitian 2^n x 2^n operator. Terms with
/// |coeff| <= threshold are dropped; output is ordered lexicographically (I<X<Y<Z).
inline PauliSum decompose(const Operator& h, double threshold = kDefaultPauliThreshold)
{
    const int n = qubits_for_dim(h.dim());
    if (n <= 0) {
        std::ostringstream os;
        os << "decompose: dimension " << h.dim() << " is not a power of two >= 2; use pad_to_qubits first";
        throw UsageError(os.str());
    }
    const double asym = h.max_asymmetry();
    if (asym > kHermitianTol) {
        std::ostringstream os;
        os << "decompose: operator is not Hermitian (max asymmetry " << asym << ")";
        throw UsageError(os.str());
    }
    std::vector<PauliTerm> terms;
    std::string prefix;
    prefix.reserve(static_cast<std::size_t>(n));
    detail::decompose_block(h.matrix(), prefix, threshold, terms);
    return PauliSum(static_cast<std::size_t>(n), std::move(terms));
}

/// Sum of coeff * P_s as a dense operator.
inline Operator reconstruct(const PauliSum& p)
{
    const std::size_t dim = std::size_t{1} << p.n_qubits();
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto& t : p) {
        const std::uint64_t flip = t.string.flip_mask();
        const std::uint64_t sign = t.string.sign_mask();
        const int ny = t.string.y_count();
        for (std::uint64_t j = 0; j < dim; ++j)
            m(static_cast<Eigen::Index>(j ^ flip), static_cast<Eigen::Index>(j)) +=
                t.coeff * PauliString::phase(j, sign, ny);
    }
    return Operator(std::move(m));
}

/// Zero-pads h into the top-left block of a 2^n x 2^n operator.
inline Operator pad_to_qubits(const Operator& h, int n_qubits)
{
    if (n_qubits < 0 || n_qubits > 20)
        throw UsageError("pad_to_qubits: qubit count out of range");
    const std::size_t dim = std::size_t{1} << n_qubits;
    if (h.dim() > dim) {
        std::ostringstream os;
        os << "pad_to_qubits: dimension " << h.dim() << " does not fit in " << n_qubits << " qubits";
        throw UsageError(os.str());
    }
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    const auto d = static_cast<Eigen::Index>(h.dim());
    m.topLeftCorner(d, d) = h.matrix();
    return Operator(std::move(m));
}

/// Terms in first-order Trotter order: descending |coeff|, ties by string.
inline std::vector<PauliTerm> trotter_order(const PauliSum& p)
{
    std::vector<PauliTerm> terms = p.terms();
    std::stable_sort(terms.begin(), terms.end(), [](const PauliTerm& a, const PauliTerm& b) {
        const double ma = std::abs(a.coeff), mb = std::abs(b.coeff);
        if (ma != mb)
            return ma > mb;
        return a.string < b.string;
    });
    return terms;
}

} // namespace mmsim
