#include <cavopt/cavity_physics.hpp>

#include <gtest/gtest.h>

namespace {

using namespace cavopt;

PhysicalParams balanced_params(double g_r, double delta) {
    // Delta_F = 0 with equal drives is trivially balanced; Omega chosen so
    // g_R1 = g_R2 = g_r.
    PhysicalParams p;
    p.Delta = 1e4;
    p.Delta_F = 0.0;
    p.g0 = 1.0;
    p.Omega1 = p.Omega2 = 2.0 * g_r * p.Delta / p.g0;
    p.delta = delta;
    p.kappa = 1.0;
    p.Gamma = 1.0;
    return p;
}

TEST(EffectiveParams, FourPhotonStrength) {
    const PhysicalParams p = balanced_params(1.0, 100.0);
    const EffectiveParams e = effective_params(p);
    ASSERT_TRUE(e.g4.has_value());
    EXPECT_NEAR(e.g_R1, 1.0, 1e-12);
    EXPECT_NEAR(e.g_R2, 1.0, 1e-12);
    EXPECT_NEAR(*e.g4, -0.01, 1e-12);  // -g_R^2/delta
}

TEST(EffectiveParams, BalancedRatioEqualizesCouplings) {
    PhysicalParams p;
    p.Delta = 1000.0;
    p.Delta_F = 500.0;
    p.g0 = 2.0;
    p.Omega2 = 100.0;
    p.Omega1 = p.Omega2 * (p.Delta + p.Delta_F) / p.Delta;
    p.delta = 50.0;
    const EffectiveParams e = effective_params(p);
    EXPECT_TRUE(e.balanced);
    EXPECT_DOUBLE_EQ(e.g_R1, e.g_R2);
}

TEST(EffectiveParams, StarkShiftZeroCase) {
    PhysicalParams p;
    p.Delta = 1000.0;
    p.Delta_F = 100.0;
    p.delta = 50.0;
    p.delta_m = 0.0;
    p.Omega1 = p.Omega2 = 0.0;
    p.g0 = 1.0;
    EXPECT_DOUBLE_EQ(effective_params(p).delta_m_tilde, 0.0);
}

TEST(EffectiveParams, UnbalancedReportsBothCouplings) {
    PhysicalParams p = balanced_params(1.0, 100.0);
    p.Omega1 *= 1.02;
    const EffectiveParams e = effective_params(p);
    EXPECT_FALSE(e.balanced);
    EXPECT_FALSE(e.g4.has_value());
    try {
        required_g4(p);
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.kind(), ErrorKind::Unbalanced);
        EXPECT_NE(std::string(err.what()).find("g_R1"), std::string::npos);
    }
}

TEST(FullModel, HandBuiltSingleAtom) {
    // N=1, n_ph=1, delta_m_tilde=0: basis (0,down),(0,up),(1,down),(1,up).
    PhysicalParams p = balanced_params(0.3, 7.0);
    const Eigen::MatrixXd H = build_full_model(p, {0.5}, 1, 0.0);
    ASSERT_EQ(H.rows(), 4);
    Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(4, 4);
    expect(2, 2) = 7.0;  // delta * n
    expect(3, 3) = 7.0;
    // (g_R1 a + g_R2 a^dag)|down><up| + h.c. with lambda = 0.5, g_R = 0.3
    expect(2, 1) = expect(1, 2) = 0.5 * 0.3;  // a^dag branch: (0,up) -> (1,down)
    expect(0, 3) = expect(3, 0) = 0.5 * 0.3;  // a branch:     (1,up) -> (0,down)
    EXPECT_NEAR((H - expect).norm(), 0.0, 1e-12);
}

TEST(FullModel, HermitianAndDecoupledLimit) {
    PhysicalParams p = balanced_params(0.2, 10.0);
    const Eigen::MatrixXd H = build_full_model(p, {1.0, 0.6}, 3, 0.25);
    EXPECT_NEAR((H - H.transpose()).norm(), 0.0, 1e-12);

    PhysicalParams p0 = balanced_params(0.0, 10.0);
    const Eigen::MatrixXd H0 = build_full_model(p0, {1.0, 0.6}, 3, 0.25);
    // decoupled: spectrum = {delta n + delta_m (N_up - N_down)}
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H0);
    std::vector<double> expect;
    for (int n = 0; n <= 3; ++n)
        for (int spin = 0; spin < 4; ++spin)
            expect.push_back(10.0 * n + 0.25 * (2 * std::popcount(static_cast<unsigned>(spin)) - 2));
    std::sort(expect.begin(), expect.end());
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        EXPECT_NEAR(es.eigenvalues()(i), expect[static_cast<std::size_t>(i)], 1e-12);
}

TEST(FullModel, CapExceeded) {
    PhysicalParams p = balanced_params(0.1, 10.0);
    EXPECT_THROW(build_full_model(p, {1, 1, 1, 1, 1}, 2), Error);
    EXPECT_THROW(build_full_model(p, {1}, 9), Error);
}

TEST(SpectralCompare, RecoversG4) {
    const double delta = 100.0;
    const double g_r = 0.05 * delta;  // g_R/delta = 0.05
    const SpectralComparison c = spectral_compare(balanced_params(g_r, delta), {1.0, 1.0}, 6);
    EXPECT_NEAR(c.g4_fit, c.g4_theory, 0.10 * std::fabs(c.g4_theory));
}

TEST(SpectralCompare, DeviationShrinksWithCouplingLadder) {
    const double delta = 100.0;
    double prev = std::numeric_limits<double>::infinity();
    for (double ratio : {0.1, 0.05, 0.025, 0.0125}) {
        const SpectralComparison c =
            spectral_compare(balanced_params(ratio * delta, delta), {1.0, 0.6}, 6);
        EXPECT_LT(c.max_rel_dev, prev);
        prev = c.max_rel_dev;
    }
}

TEST(SpectralCompare, VirtualPhotonOccupation) {
    const double delta = 100.0;
    const double ratio = 0.1;
    const SpectralComparison c =
        spectral_compare(balanced_params(ratio * delta, delta), {1.0, 0.6}, 6);
    const double bound = ratio * ratio * (1.0 + 0.6) * (1.0 + 0.6) * 4.0;
    EXPECT_LE(c.max_branch_photon, bound);
}

TEST(SpectralCompare, ZeroCouplingIsExact) {
    const SpectralComparison c = spectral_compare(balanced_params(0.0, 100.0), {1.0, 0.6}, 4);
    EXPECT_NEAR(c.max_abs_dev, 0.0, 1e-12);
}

TEST(SpectralCompare, RejectsStrongCoupling) {
    EXPECT_THROW(spectral_compare(balanced_params(20.0, 100.0), {1.0}, 4), Error);
}

TEST(CoherenceBudget, EtaHundred) {
    PhysicalParams p;
    p.Gamma = 1.0;
    p.kappa = 1.0;
    p.g0 = 5.0;  // eta = 100
    p.Delta = 400.0;
    p.delta = std::sqrt(100.0) / 4.0;  // delta_opt
    const CoherenceBudget b = coherence_budget(p);
    EXPECT_DOUBLE_EQ(b.eta, 100.0);
    EXPECT_DOUBLE_EQ(b.delta_opt_over_kappa, 2.5);
    EXPECT_DOUBLE_EQ(b.Ng4T_single, 2.5);
    // at delta = delta_opt the two photon channels balance exactly
    EXPECT_DOUBLE_EQ(b.gamma1_over_g4, b.gamma3_over_g4);
    EXPECT_THROW(b.side(), Error);
}

TEST(CoherenceBudget, RubidiumCrossCavityPoint) {
    // Gamma = 2pi*6 MHz, Delta = 2pi*2.4 GHz, eta = eta_side = 5000, N = 400.
    PhysicalParams p;
    p.Gamma = 6.0;
    p.kappa = 1.0;
    p.g0 = std::sqrt(5000.0 * p.Gamma * p.kappa) / 2.0;
    p.Delta = 2400.0;
    p.delta = std::sqrt(5000.0) / 4.0;
    p.eta_side = 5000.0;
    p.N_atoms = 400;
    const CoherenceBudget b = coherence_budget(p);
    ASSERT_TRUE(b.side_opt.has_value());
    EXPECT_NEAR(b.eta, 5000.0, 1e-9);
    // formula value (Gamma/8 Delta) eta^(3/2) ~ 110.5
    EXPECT_NEAR(b.side().g4T_side, (6.0 / (8.0 * 2400.0)) * std::pow(5000.0, 1.5), 1e-6);
    EXPECT_NEAR(b.side().g4T_side, 110.485, 0.01);
    EXPECT_NEAR(b.side().boost_factor, 2500.0 * 2500.0, 1e-3);
}

TEST(CoherenceBudget, SuppressionVanishesWithoutSideCavity) {
    PhysicalParams p;
    p.Gamma = 1.0;
    p.kappa = 1.0;
    p.g0 = 5.0;
    p.Delta = 400.0;
    p.delta = 2.5;
    p.N_atoms = 100;
    p.eta_side = 1e-12;
    const CoherenceBudget b = coherence_budget(p);
    EXPECT_NEAR(b.side().suppression_factor, 1.0, 1e-6);
}

TEST(ParamFlags, HierarchyDiagnostics) {
    PhysicalParams p;
    p.Delta = 1e4;
    p.Delta_F = 0.0;
    p.Omega1 = p.Omega2 = 500.0;
    p.g0 = 200.0;
    p.delta = 100.0;  // g_R = 500*200/2e4 = 5, ratio 0.05
    const ParamFlags f = param_flags(p);
    EXPECT_TRUE(f.balanced);
    EXPECT_DOUBLE_EQ(f.gr_over_delta2, 0.05);
    EXPECT_TRUE(f.hierarchy_ok);
    PhysicalParams bad = p;
    bad.Omega1 = bad.Omega2 = 0.5 * bad.Delta;
    EXPECT_FALSE(param_flags(bad).hierarchy_ok);
}

}  // namespace
