#include <gtest/gtest.h>

#include <random>

#include "mmsim/brst.hpp"
#include "mmsim/pauli.hpp"

using namespace mmsim;

namespace {

const BrstOperators& default_ops()
{
    static const BrstOperators ops = build_brst({});
    return ops;
}

} // namespace

TEST(BrstConfig, Dimensions)
{
    const BrstConfig c;
    EXPECT_EQ(c.total_dim(), 216u);
    EXPECT_EQ(c.padded_qubits(), 8);
    BrstConfig four;
    four.boson_levels = 4;
    EXPECT_EQ(four.total_dim(), 512u);
    EXPECT_EQ(four.padded_qubits(), 9);
}

TEST(BrstConfig, RejectsSingleLevel)
{
    BrstConfig c;
    c.boson_levels = 1;
    EXPECT_THROW(build_brst(c), UsageError);
}

TEST(Ghosts, LoweringSquaresToZero)
{
    const Ghosts g = build_ghosts();
    for (const auto& c : g.c)
        EXPECT_EQ((c * c).max_abs(), 0.0);
}

TEST(Ghosts, PerModeAnticommutator)
{
    for (auto conv : {GhostConvention::Literal, GhostConvention::JordanWigner}) {
        const Ghosts g = build_ghosts(conv);
        for (std::size_t a = 0; a < 3; ++a) {
            EXPECT_LE(max_abs_diff(anticommutator(g.c[a], g.b[a]), Operator::identity(8)), 1e-15);
            EXPECT_EQ(max_abs_diff(g.b[a], g.c[a].adjoint()), 0.0);
        }
    }
}

TEST(Ghosts, DistinctModesAnticommute)
{
    const Ghosts g = build_ghosts(GhostConvention::JordanWigner);
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
            if (a != b) {
                EXPECT_EQ(anticommutator(g.c[a], g.c[b]).max_abs(), 0.0);
                EXPECT_EQ(anticommutator(g.c[a], g.b[b]).max_abs(), 0.0);
            }
}

TEST(Ghosts, GhostNumberSpectrum)
{
    const Ghosts g = build_ghosts();
    Operator n = Operator::zero(8);
    for (std::size_t a = 0; a < 3; ++a)
        n += g.c[a] * g.b[a];
    const RealVector ev = eigh(n).values;
    const double expect[] = {0, 1, 1, 1, 2, 2, 2, 3};
    for (int k = 0; k < 8; ++k)
        EXPECT_NEAR(ev(k), expect[k], 1e-14);
}

TEST(Charge, VanishesWithoutCoupling)
{
    BrstConfig c;
    c.g = 0.0;
    EXPECT_EQ(build_brst_charge(c).max_abs(), 0.0);
}

TEST(Charge, NilpotentAwayFromTruncation)
{
    const NilpotencyReport r = nilpotency_residual(default_ops().omega, 3);
    EXPECT_LE(r.safe, 1e-10);
    // boundary levels leave a residue of the truncated commutator
    EXPECT_GT(r.full, 1e-3);
}

TEST(Charge, CommutingGhostsFailNilpotency)
{
    BrstConfig c;
    c.ghosts = GhostConvention::Literal;
    EXPECT_THROW(build_brst(c), NumericalError);
    c.check_nilpotency = false;
    const BrstOperators ops = build_brst(c);
    EXPECT_GT(nilpotency_residual(ops.omega, 3).safe, 1e-3);
}

TEST(Charge, AnnihilatesVacuum)
{
    const Vector v = brst_vacuum({});
    EXPECT_LE(default_ops().omega.apply(v).norm(), 1e-14);
}

TEST(Charge, RaisesGhostNumber)
{
    const BrstOperators& ops = default_ops();
    EXPECT_LE(max_abs_diff(commutator(ops.ghost_number(), ops.omega), ops.omega), 1e-10);
}

TEST(Charge, GaussGeneratorsCarryCoupling)
{
    const BrstOperators& ops = default_ops();
    for (const auto& g : ops.gauss)
        EXPECT_TRUE(g.is_hermitian());
    BrstConfig doubled;
    doubled.g = 0.2;
    const BrstOperators two = build_brst(doubled);
    EXPECT_LE(max_abs_diff(two.gauss[0], 2.0 * ops.gauss[0]), 1e-14);
}

TEST(Laplacian, HermitianPositiveWithZeroGround)
{
    const Operator& q = default_ops().laplacian;
    EXPECT_TRUE(q.is_hermitian(1e-12));
    const RealVector ev = eigh(q).values;
    EXPECT_GE(ev(0), -1e-12);
    EXPECT_LE(std::abs(ev(0)), 1e-12);
}

TEST(Laplacian, PaddingAddsZeroBlock)
{
    const Operator& q = default_ops().laplacian;
    const Operator padded = pad_to_qubits(q, 8);
    const RealVector a = eigh(q).values;
    const RealVector b = eigh(padded).values;
    EXPECT_EQ(b.size(), 256);
    EXPECT_GE(b(0), -1e-12);
    EXPECT_NEAR(b(b.size() - 1), a(a.size() - 1), 1e-10);
    int zeros = 0;
    for (Eigen::Index k = 0; k < b.size(); ++k)
        zeros += std::abs(b(k)) < 1e-10;
    int zeros_q = 0;
    for (Eigen::Index k = 0; k < a.size(); ++k)
        zeros_q += std::abs(a(k)) < 1e-10;
    EXPECT_EQ(zeros, zeros_q + 40);
}

TEST(Laplacian, PaddedTermCount)
{
    // Measured count for the zero-padded 8-qubit operator.
    EXPECT_EQ(decompose(pad_to_qubits(default_ops().laplacian, 8)).size(), 1574u);
}

TEST(ZeroModes, OrthonormalAndClosed)
{
    const BrstOperators& ops = default_ops();
    const auto modes = physical_zero_modes(ops);
    ASSERT_GE(modes.size(), 1u);
    for (std::size_t i = 0; i < modes.size(); ++i) {
        EXPECT_LE(ops.omega.apply(modes[i]).norm(), 1e-8);
        for (std::size_t j = i; j < modes.size(); ++j)
            EXPECT_NEAR(std::abs(modes[i].dot(modes[j])), i == j ? 1.0 : 0.0, 1e-10);
    }
}

TEST(ZeroModes, ExactShiftsStayClosed)
{
    const BrstOperators& ops = default_ops();
    const auto modes = physical_zero_modes(ops);
    std::mt19937_64 rng(61);
    std::normal_distribution<double> d;
    Vector lambda = Vector::Zero(216);
    for (std::size_t i : truncation_safe_indices(3, 8))
        lambda(static_cast<Eigen::Index>(i)) = cplx(d(rng), d(rng));
    for (std::size_t k = 0; k < modes.size(); k += 17) {
        const Vector shifted = modes[k] + ops.omega.apply(lambda);
        EXPECT_LE((ops.omega.apply(shifted) - ops.omega.apply(modes[k])).norm(), 1e-10);
    }
}

TEST(Brst, EffectiveHamiltonianIsKinetic)
{
    const BrstOperators& ops = default_ops();
    EXPECT_TRUE(ops.h_eff.is_hermitian());
    EXPECT_GE(min_eigenvalue(ops.h_eff), -1e-12);
}
