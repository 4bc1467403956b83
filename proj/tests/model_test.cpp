#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mmsim/model.hpp"
#include "mmsim/pauli.hpp"

using namespace mmsim;

namespace {

Operator top_level_projector(std::size_t n)
{
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n - 1)) = 1.0;
    return Operator(m);
}

double restricted_norm(const Operator& op, const std::vector<std::size_t>& cols)
{
    return max_abs_on_columns(op, cols);
}

} // namespace

TEST(Basis, PositionTwoLevels)
{
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_LE(max_abs_diff(q_osc(2), Operator({{0.0, r}, {r, 0.0}})), 1e-15);
}

TEST(Basis, MomentumTwoLevels)
{
    const double r = 1.0 / std::sqrt(2.0);
    const Operator p = p_osc(2);
    EXPECT_LE(max_abs_diff(p, Operator({{0.0, -kI * r}, {kI * r, 0.0}})), 1e-15);
    EXPECT_TRUE(p.is_hermitian());
}

TEST(Basis, TruncatedCanonicalCommutator)
{
    const Operator c = commutator(q_osc(4), p_osc(4));
    EXPECT_LE(max_abs_diff(c, kI * (Operator::identity(4) - 4.0 * top_level_projector(4))), 1e-14);
}

TEST(Basis, RequiresTwoLevels)
{
    EXPECT_THROW(q_osc(1), UsageError);
    EXPECT_THROW(q_fd(1), UsageError);
    EXPECT_THROW(p2_fd(0), UsageError);
}

TEST(Basis, FiniteDifferencePositionGrid)
{
    const double s = 1.0 / std::sqrt(8.0);
    EXPECT_LE(max_abs_diff(q_fd(4), Operator::diagonal({-3.0 * s, -s, s, 3.0 * s})), 1e-15);
}

TEST(Basis, FiniteDifferenceLaplacian)
{
    const Operator expect({{4.0, -2.0, 0.0, 0.0}, {-2.0, 4.0, -2.0, 0.0}, {0.0, -2.0, 4.0, -2.0}, {0.0, 0.0, -2.0, 4.0}});
    EXPECT_LE(max_abs_diff(p2_fd(4), expect), 1e-15);
}

TEST(Basis, FiniteDifferenceGridIsCentered)
{
    for (std::size_t n = 2; n <= 8; ++n)
        EXPECT_NEAR(std::abs(q_fd(n).trace()), 0.0, 1e-14) << n;
}

TEST(Modes, AnnihilationSuperdiagonal)
{
    const Operator a = annihilation(4);
    EXPECT_NEAR(a(0, 1).real(), 1.0, 1e-15);
    EXPECT_NEAR(a(1, 2).real(), std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(a(2, 3).real(), std::sqrt(3.0), 1e-15);
    double rest = 0.0;
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c)
            if (c != r + 1)
                rest = std::max(rest, std::abs(a(r, c)));
    EXPECT_EQ(rest, 0.0);
}

TEST(Modes, NumberOperator)
{
    const Operator a = annihilation(4);
    EXPECT_LE(max_abs_diff(a.adjoint() * a, Operator::diagonal({0.0, 1.0, 2.0, 3.0})), 1e-14);
}

TEST(Modes, DistinctBosonsCommute)
{
    const Triple a = build_bosons_osc(4);
    EXPECT_EQ(a[0].dim(), 64u);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            if (i != j) {
                EXPECT_EQ(commutator(a[i], a[j]).max_abs(), 0.0);
            }
}

TEST(Modes, FermionsSquareToZero)
{
    for (auto conv : {FermionConvention::Literal, FermionConvention::JordanWigner}) {
        const Triple c = build_fermions(conv);
        for (const auto& ci : c) {
            EXPECT_EQ(ci.dim(), 8u);
            EXPECT_EQ((ci * ci).max_abs(), 0.0);
            EXPECT_LE(max_abs_diff(anticommutator(ci, ci.adjoint()), Operator::identity(8)), 1e-15);
        }
    }
}

TEST(Modes, JordanWignerModesAnticommute)
{
    const Triple c = build_fermions(FermionConvention::JordanWigner);
    const Triple l = build_fermions(FermionConvention::Literal);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            if (i != j) {
                EXPECT_EQ(anticommutator(c[i], c[j]).max_abs(), 0.0);
                EXPECT_EQ(anticommutator(c[i], c[j].adjoint()).max_abs(), 0.0);
                EXPECT_EQ(commutator(l[i], l[j]).max_abs(), 0.0);
            }
}

TEST(Modes, LiftLayout)
{
    const LiftedModes m = lift(build_bosons_osc(4), build_fermions());
    EXPECT_EQ(m.bosons[0].dim(), 512u);
    EXPECT_EQ(m.fermions[2].dim(), 512u);
    // A_1 lowers the leading boson digit: |1,0,0>|000> -> |0,0,0>|000>
    EXPECT_NEAR(m.bosons[0](0, 16 * 8).real(), 1.0, 1e-15);
    // C_3 acts on the last tensor slot
    EXPECT_NEAR(m.fermions[2](0, 1).real(), 1.0, 1e-15);
}

TEST(OscillatorHamiltonian, FreeVacuumIsUniqueGround)
{
    ModelParams p;
    p.g = 0.0;
    const RealVector ev = eigh(build_h_osc(p)).values;
    EXPECT_NEAR(ev(0), 0.0, 1e-12);
    EXPECT_GT(ev(1), 0.5);
}

TEST(OscillatorHamiltonian, FreeSpectrumIsOccupationSum)
{
    ModelParams p;
    p.g = 0.0;
    const RealVector ev = eigh(build_h_osc(p)).values;
    std::vector<double> expect;
    for (int n1 = 0; n1 < 4; ++n1)
        for (int n2 = 0; n2 < 4; ++n2)
            for (int n3 = 0; n3 < 4; ++n3)
                for (int f = 0; f < 8; ++f)
                    expect.push_back(n1 + n2 + n3 + __builtin_popcount(static_cast<unsigned>(f)));
    std::sort(expect.begin(), expect.end());
    for (std::size_t k = 0; k < expect.size(); ++k)
        EXPECT_NEAR(ev(static_cast<Eigen::Index>(k)), expect[k], 1e-10);
}

TEST(OscillatorHamiltonian, GroundEnergyAtCoupling)
{
    const Operator h = build_h_osc({});
    EXPECT_EQ(h.dim(), 512u);
    EXPECT_TRUE(h.is_hermitian(1e-10));
    EXPECT_NEAR(min_eigenvalue(h), -0.005, 5e-4);
}

TEST(OscillatorHamiltonian, ConventionsShareGroundEnergy)
{
    ModelParams lit, jw;
    jw.fermions = FermionConvention::JordanWigner;
    EXPECT_NEAR(min_eigenvalue(build_h_osc(lit)), min_eigenvalue(build_h_osc(jw)), 1e-12);
}

TEST(OscillatorHamiltonian, DecomposesWithRealCoefficients)
{
    for (auto conv : {FermionConvention::Literal, FermionConvention::JordanWigner}) {
        ModelParams p;
        p.fermions = conv;
        const PauliSum s = decompose(build_h_osc(p));
        EXPECT_EQ(s.n_qubits(), 9u);
        // Measured count; both conventions agree.
        EXPECT_EQ(s.size(), 34u);
    }
}

TEST(OscillatorHamiltonian, BosonicOnlyIsNumberOperator)
{
    ModelParams p;
    p.include_fermions = false;
    const Operator h = build_h_osc(p);
    EXPECT_EQ(h.dim(), 64u);
    EXPECT_NEAR(min_eigenvalue(h), 0.0, 1e-14);
}

TEST(FiniteDifferenceHamiltonian, GroundEnergyAtCoupling)
{
    const Operator h = build_h_fd(0.1, 4);
    EXPECT_TRUE(h.is_hermitian(1e-10));
    EXPECT_NEAR(min_eigenvalue(h), 0.18447904, 1e-6);
}

TEST(FiniteDifferenceHamiltonian, TermCount)
{
    for (auto conv : {FermionConvention::Literal, FermionConvention::JordanWigner})
        EXPECT_EQ(decompose(build_h_fd(0.1, 4, conv)).size(), 28u);
}

TEST(FiniteDifferenceHamiltonian, FreeGroundIsSeparable)
{
    const Operator single = 0.5 * p2_fd(4) + 0.5 * (q_fd(4) * q_fd(4));
    const double expect = 3.0 * min_eigenvalue(single) - 1.5;
    EXPECT_NEAR(min_eigenvalue(build_h_fd(0.0, 4)), expect, 1e-10);
}

TEST(FiniteDifferenceHamiltonian, FreeSpectrumIsSeparable)
{
    const RealVector e1 = eigh(0.5 * p2_fd(3) + 0.5 * (q_fd(3) * q_fd(3))).values;
    std::vector<double> expect;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int f = 0; f < 8; ++f)
                    expect.push_back(e1(a) + e1(b) + e1(c) - 1.5 + __builtin_popcount(static_cast<unsigned>(f)));
    std::sort(expect.begin(), expect.end());
    const RealVector ev = eigh(build_h_fd(0.0, 3)).values;
    for (std::size_t k = 0; k < expect.size(); ++k)
        EXPECT_NEAR(ev(static_cast<Eigen::Index>(k)), expect[k], 1e-10);
}

TEST(FiniteDifferenceHamiltonian, LinearInCoupling)
{
    const Operator h0 = build_h_fd(0.0, 4);
    const Operator d1 = build_h_fd(0.1, 4) - h0;
    const Operator d3 = build_h_fd(0.3, 4) - h0;
    EXPECT_LE(max_abs_diff(d3, 3.0 * d1), 1e-14);
}

TEST(Gauss, VacuumIsAnnihilated)
{
    const Triple g = gauss_operators(4);
    Vector vac = Vector::Zero(64);
    vac(0) = 1.0;
    for (const auto& ga : g)
        EXPECT_EQ(ga.apply(vac).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Gauss, OperatorsAreHermitian)
{
    for (const auto& ga : gauss_operators(4))
        EXPECT_TRUE(ga.is_hermitian());
    for (const auto& ga : gauss_operators(4, Basis::Oscillator, GaussVariant::Supersymmetric))
        EXPECT_TRUE(ga.is_hermitian());
}

TEST(Gauss, FiniteDifferenceBasisRejected)
{
    EXPECT_THROW(gauss_operators(4, Basis::FiniteDifference), UsageError);
}

TEST(Gauss, AlgebraHoldsAwayFromTruncation)
{
    const Triple g = gauss_operators(4);
    const Operator dev = commutator(g[0], g[1]) - kI * g[2];
    const auto safe = truncation_safe_indices(4);
    EXPECT_LE(restricted_norm(dev, safe), 1e-10);
    // the boundary levels break the algebra
    EXPECT_GT(dev.max_abs(), 1.0);
}

TEST(Gauss, FirstPhysicalStateIsInvariant)
{
    const Triple g = gauss_operators(4);
    const auto phys = physical_states(4);
    for (const auto& ga : g)
        EXPECT_LE(ga.apply(phys[1].amplitudes()).norm(), 1e-10);
}

TEST(Gauss, SupersymmetricGeneratorsCommuteWithHamiltonian)
{
    ModelParams p;
    p.fermions = FermionConvention::JordanWigner;
    const Operator h = build_h_osc(p);
    const Triple g = gauss_operators(4, Basis::Oscillator, GaussVariant::Supersymmetric, FermionConvention::JordanWigner);
    const auto safe = truncation_safe_indices(4, 8);
    for (const auto& ga : g)
        EXPECT_LE(restricted_norm(commutator(h, ga), safe), 1e-9);
}

TEST(Gauss, LiteralFermionsBreakRotationInvariance)
{
    const Operator h = build_h_osc({});
    const Triple g = gauss_operators(4, Basis::Oscillator, GaussVariant::Supersymmetric, FermionConvention::Literal);
    const auto safe = truncation_safe_indices(4, 8);
    double worst = 0.0;
    for (const auto& ga : g)
        worst = std::max(worst, restricted_norm(commutator(h, ga), safe));
    EXPECT_GT(worst, 1e-2);
}

TEST(PhysicalStates, VacuumFirst)
{
    const auto phys = physical_states(4);
    ASSERT_EQ(phys.size(), 4u);
    EXPECT_NEAR(std::abs(phys[0][0]), 1.0, 1e-15);
}

TEST(PhysicalStates, FirstExcitedByHand)
{
    // sum_i a_i^dag a_i^dag |000> = sqrt2 (|200> + |020> + |002>)
    const auto raw = physical_states_raw(4);
    Vector expect = Vector::Zero(64);
    for (std::size_t idx : {2u * 16u, 2u * 4u, 2u})
        expect(static_cast<Eigen::Index>(idx)) = std::sqrt(2.0);
    EXPECT_LE((raw[1] - expect).cwiseAbs().maxCoeff(), 1e-14);
    const auto phys = physical_states(4);
    EXPECT_LE((phys[1].amplitudes() - expect / expect.norm()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(PhysicalStates, Orthonormal)
{
    const auto phys = physical_states(4);
    for (std::size_t i = 0; i < phys.size(); ++i)
        for (std::size_t j = 0; j < phys.size(); ++j)
            EXPECT_NEAR(std::abs(phys[i].inner(phys[j])), i == j ? 1.0 : 0.0, 1e-12);
}

TEST(Penalty, ZeroWeightLeavesHamiltonian)
{
    ModelParams p;
    p.include_fermions = false;
    const Operator h = build_h_osc(p);
    EXPECT_EQ(max_abs_diff(penalty_hamiltonian(h, 0.0, gauss_operators(4)), h), 0.0);
}

TEST(Penalty, DimensionMismatch)
{
    EXPECT_THROW(penalty_hamiltonian(build_h_osc({}), 10.0, gauss_operators(4)), UsageError);
}

TEST(Penalty, GroundStateSatisfiesConstraint)
{
    ModelParams p;
    p.include_fermions = false;
    const Triple g = gauss_operators(4);
    const Operator hp = penalty_hamiltonian(build_h_osc(p), 10.0, g);
    EXPECT_TRUE(hp.is_hermitian());
    const Vector psi0 = eigh(hp).vector(0);
    for (const auto& ga : g)
        EXPECT_LE(ga.apply(psi0).norm(), 1e-6);
}

TEST(Penalty, LowSpectrumMatchesPhysicalSector)
{
    ModelParams p;
    p.include_fermions = false;
    const Operator h = build_h_osc(p);
    const Triple g = gauss_operators(4);
    const Matrix k = gauss_kernel_basis(g);
    ASSERT_GE(k.cols(), 1);
    const RealVector sector = eigh(Operator(Matrix(k.adjoint() * h.matrix() * k))).values;
    const RealVector penalized = eigh(penalty_hamiltonian(h, 10.0, g)).values;
    for (Eigen::Index i = 0; i < sector.size(); ++i)
        EXPECT_NEAR(penalized(i), sector(i), 1e-8);
}

TEST(IsotropicHamiltonian, CommutesWithGenerators)
{
    const Triple g = gauss_operators(4);
    for (double w2 : {1.0, 0.3, 2.5}) {
        const Operator h = build_h_isotropic_osc(w2);
        EXPECT_TRUE(h.is_hermitian());
        for (const auto& ga : g)
            EXPECT_LE(commutator(h, ga).max_abs(), 1e-12);
    }
}

TEST(Cosmology, DeformationFromAlphaBeta)
{
    DeformationParams d;
    d.alpha = 1.0;
    d.beta = 1.0;
    EXPECT_NEAR(d.k_squared(), 0.25, 1e-14);
    EXPECT_NEAR(lambda_deformation(2.0, d), -1.0 / 16.0, 1e-15);
    d.alpha = 0.5;
    d.beta = 3.0;
    const double direct = (d.beta * d.beta - 2 * d.alpha * d.beta) / std::pow(2 * d.alpha * 1.7, 2);
    EXPECT_NEAR(lambda_deformation(1.7, d), direct, 1e-14);
}

TEST(Cosmology, RejectsSingularTimeAndZeroAlpha)
{
    EXPECT_THROW(lambda_from_k_squared(0.0, 0.25), UsageError);
    EXPECT_THROW(build_h_cosmo(0.0, 0.25), UsageError);
    DeformationParams d;
    d.alpha = 0.0;
    EXPECT_THROW(d.k_squared(), UsageError);
}

TEST(Cosmology, DeformationDecays)
{
    DeformationParams d;
    d.alpha = 0.7;
    d.beta = -2.0;
    double prev = std::abs(lambda_deformation(1.0, d));
    for (double t : {10.0, 100.0, 1e4}) {
        const double now = std::abs(lambda_deformation(t, d));
        EXPECT_LT(now, prev);
        prev = now;
    }
    EXPECT_LT(prev, 1e-7);
}

TEST(Cosmology, FivePauliTerms)
{
    const Operator h = build_h_cosmo(2.0, 0.25, 4);
    EXPECT_EQ(h.dim(), 4u);
    EXPECT_TRUE(h.is_hermitian());
    const PauliSum p = decompose(h);
    ASSERT_EQ(p.size(), 5u);
    EXPECT_NEAR(p.coeff(PauliString("II")), 2.01953125, 1e-14);
    EXPECT_NEAR(p.coeff(PauliString("IX")), -1.0, 1e-14);
    EXPECT_NEAR(p.coeff(PauliString("XX")), -0.5, 1e-14);
    EXPECT_NEAR(p.coeff(PauliString("YY")), -0.5, 1e-14);
    EXPECT_NEAR(p.coeff(PauliString("ZZ")), 0.015625, 1e-14);
}

TEST(Cosmology, AssemblyFromBasisOperators)
{
    const double t = 0.7, ksq = 0.25, rho = 0.3;
    const Operator x = q_fd(4);
    const Operator expect = 0.5 * p2_fd(4) + (0.5 * ksq / (t * t)) * (x * x) - rho * x;
    EXPECT_LE(max_abs_diff(build_h_cosmo(t, ksq, 4, rho), expect), 1e-14);
}

TEST(Cosmology, DrivingTermFromParams)
{
    DeformationParams d;
    d.rho = [](double t) { return 0.5 * t; };
    EXPECT_LE(max_abs_diff(build_h_cosmo(2.0, d, 4), build_h_cosmo(2.0, 0.25, 4, 1.0)), 1e-15);
}

TEST(Registry, KnownModels)
{
    for (const char* id : {"osc", "fd", "cosmo", "brst-unitary", "gauss", "penalty"})
        EXPECT_TRUE(is_known_model(id));
    EXPECT_FALSE(is_known_model("bmn"));
}
