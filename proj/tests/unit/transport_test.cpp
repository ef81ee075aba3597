// Copyright 2026 The bethe-transport Authors
// SPDX-License-Identifier: Apache-2.0

#include "bethe/chain.hpp"
#include "bethe/localized.hpp"
#include "bethe/transport.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace bethe;

TEST(CurrentOperatorTest, TwoSiteBlock) {
    CMatrix expect(2, 2);
    expect << 0, kI, -kI, 0;
    EXPECT_EQ(chain_current_operator(0, 1), expect);
    const CMatrix j = chain_current_operator(2, 5);
    EXPECT_EQ(j, j.adjoint());
    EXPECT_EQ(j.trace(), cplx{});
    EXPECT_THROW(chain_current_operator(1, 1), DomainError);
    EXPECT_THROW(chain_current_operator(-1, 3), DomainError);
}

TEST(CurrentOperatorTest, ExpectationMatchesMatrixForm) {
    CVector psi(4);
    psi << cplx{0.3, 0.1}, cplx{-0.2, 0.5}, cplx{0.1, -0.4}, cplx{0.6, 0.2};
    psi.normalize();
    for (int l = 0; l < 3; ++l) {
        const cplx m = psi.dot(chain_current_operator(l, 3) * psi);
        EXPECT_NEAR(m.imag(), 0.0, 1e-15);
        EXPECT_NEAR(m.real(), expectation_current(psi, l), 1e-15);
    }
    CVector flat(2);
    flat << 1, 1;
    EXPECT_EQ(expectation_current(flat / std::sqrt(2.0), 0), 0.0);
    EXPECT_THROW(expectation_current(flat, 1), DomainError);
}

TEST(CurrentTest, TwoSiteClosedForms) {
    for (double gt : {0.1, 0.5, 0.9, 0.999, 1.001, 1.5, 2.0, 7.0}) {
        for (const auto &r : solve_secular(1, gt)) {
            const auto f = eigenfunction(r, 1, gt);
            const double expect = gt < 1 ? gt : 1.0 / gt;
            EXPECT_NEAR(expectation_current(f.values, 0), expect, 1e-12) << gt;
        }
    }
    const auto f = eigenfunction(solve_secular(1, 0.5)[0], 1, 0.5);
    EXPECT_NEAR(expectation_current(f.values, 0), 0.5, 1e-12);
    const auto g = eigenfunction(solve_secular(1, 2.0)[1], 1, 2.0);
    EXPECT_NEAR(expectation_current(g.values, 0), 0.5, 1e-12);
}

TEST(CurrentTest, RealKStatesAreLinkIndependentAndMatchClosedForm) {
    for (int N = 1; N <= 12; ++N) {
        const double ep = exceptional_point(N);
        for (double gt : {0.05, 0.3, 0.7, ep - 0.05}) {
            for (const auto &r : solve_secular(N, gt)) {
                const auto f = eigenfunction(r, N, gt);
                const auto p = current_profile(f.values);
                EXPECT_LE(p.spread(), 1e-10) << N << " " << gt;
                EXPECT_NEAR(p.J[0], closed_form_current(N, gt, r.k.real()), 1e-12) << N << " " << gt;
                EXPECT_NEAR(average_current(f.values, N), p.J[0], 1e-12);
            }
        }
    }
}

TEST(CurrentTest, ExceptionalPointValues) {
    EXPECT_DOUBLE_EQ(exceptional_point_current(9), 0.2);
    EXPECT_NEAR(exceptional_point_current(8), 0.223607, 1e-6);
    EXPECT_NEAR(exceptional_point_current(8), 2.0 / std::sqrt(80.0), 1e-15);
    for (int N : {1, 3, 9, 2, 4, 8}) {
        EXPECT_NEAR(average_current(exceptional_point_eigenfunction(N), N), exceptional_point_current(N), 1e-14);
        EXPECT_NEAR(closed_form_current(N, exceptional_point(N), kPi / 2), exceptional_point_current(N), 1e-14);
    }
    EXPECT_THROW(exceptional_point_current(0), DomainError);
}

TEST(CurrentTest, MaximumAtExceptionalPoint) {
    std::vector<double> grid;
    for (int i = 0; i <= 2990; ++i) grid.push_back(0.01 + 1e-3 * i);
    for (int N : {1, 2, 3, 4, 9}) {
        const auto sweep = current_sweep(N, grid);
        const auto best = std::max_element(sweep.begin(), sweep.end(), [](const auto &a, const auto &b) {
            return a.profile.average < b.profile.average;
        });
        EXPECT_NEAR(best->gamma_tilde, exceptional_point(N), 1.5e-3) << N;
        EXPECT_LE(best->profile.average, exceptional_point_current(N) + 1e-12) << N;
        EXPECT_GT(best->profile.average, exceptional_point_current(N) - 1e-3) << N;
        EXPECT_LT(std::abs(best->energy), 0.1) << N;
    }
}

TEST(CurrentTest, BrokenProfilesMirror) {
    const int N = 6;
    const double gt = 1.8;
    const auto pair = solve_secular_broken(N, gt);
    const auto pm = current_profile(eigenfunction(pair[0], N, gt).values);
    const auto pp = current_profile(eigenfunction(pair[1], N, gt).values);
    EXPECT_GT(pp.spread(), 1e-3);
    for (int l = 0; l < N; ++l) EXPECT_NEAR(pp.J[static_cast<std::size_t>(l)], pm.J[static_cast<std::size_t>(N - 1 - l)], 1e-12);
}

TEST(CurrentTest, HoppingWeightedFlag) {
    CVector psi(3);
    psi << cplx{0.5, 0.1}, cplx{0.1, 0.6}, cplx{-0.3, 0.2};
    const auto plain = current_profile(psi);
    const auto weighted = current_profile(psi, 4, CurrentWeighting::HoppingWeighted, {2.0, 0.5});
    EXPECT_EQ(weighted.state_id, 4);
    EXPECT_NEAR(weighted.J[0], 2.0 * plain.J[0], 1e-15);
    EXPECT_NEAR(weighted.J[1], 0.5 * plain.J[1], 1e-15);
    EXPECT_THROW(current_profile(psi, 0, CurrentWeighting::HoppingWeighted, {1.0}), DomainError);
    EXPECT_THROW(current_profile(CVector::Zero(1)), DomainError);
    EXPECT_THROW(average_current(psi, 3), DomainError);
}

TEST(CurrentTest, WeightedProfileObeysContinuityOnNonuniformChain) {
    // d|psi(l)|^2/dt = 2 Im E |psi(l)|^2 balances the weighted link currents
    ChainSpec c{4, {1.0, 0.8, 1.3, 0.9}, 0.5, 0.5};
    const auto pairs = eig_dense(c.matrix());
    for (const auto &p : pairs) {
        const auto w = current_profile(p.vector, -1, CurrentWeighting::HoppingWeighted, c.hoppings);
        for (int l = 1; l < 4; ++l) {
            const double inflow = w.J[static_cast<std::size_t>(l)] - w.J[static_cast<std::size_t>(l - 1)];
            EXPECT_NEAR(2 * p.value.imag() * std::norm(p.vector(l)), inflow, 1e-10);
        }
    }
}

TEST(TreeCurrentTest, ExtendedStatesMatchChain) {
    const TreeSpec s{2, {2, 2}, 0.4, 0.4};
    const TreeIndex idx(s);
    const auto chain = eig_dense(effective_chain(s).matrix());
    for (const auto &p : chain) {
        const CVector tree = lift_to_tree(p.vector, idx);
        for (int l = 0; l < s.N; ++l) EXPECT_NEAR(tree_current_expectation(tree, s, idx, l), expectation_current(p.vector, l), 1e-10);
    }
}

TEST(TreeCurrentTest, LocalizedAndRealStatesCarryNothing) {
    const TreeSpec s{3, {2, 3, 2}, 0.4, 0.7};
    const TreeIndex idx(s);
    for (const auto &st : all_localized(s, idx)) {
        const CVector v = st.full_vector(idx.size());
        for (int l = 0; l < st.mode.generation - 1; ++l) EXPECT_EQ(tree_current_expectation(v, s, idx, l), 0.0);
    }
    const CVector real = Eigen::VectorXd::Random(idx.size()).cast<cplx>();
    for (int l = 0; l < s.N; ++l) EXPECT_NEAR(tree_current_expectation(real, s, idx, l), 0.0, 1e-15);
    EXPECT_THROW(tree_current_expectation(real, s, idx, 3), DomainError);
    EXPECT_THROW(tree_current_expectation(CVector::Zero(3), s, idx, 0), DomainError);
}

TEST(BiorthogonalTest, VanishesInBothPhases) {
    for (double gt : {0.0, 0.2, 0.5, 0.9, 1.1, 2.0, 5.0}) EXPECT_LT(biorthogonal_current_n1(gt), 1e-12) << gt;
    EXPECT_THROW(biorthogonal_current_n1(1.0), DomainError);
}

TEST(BiorthogonalTest, TransposedRightVectorsAreLeftVectors) {
    for (double gt : {0.5, 2.0}) {
        const auto pairs = eig_dense(oracle::uniform_chain(1, gt));
        // <phi_+| = psi_+^T; biorthogonality with psi_-
        const cplx a = pairs[0].vector.transpose() * pairs[1].vector;
        const cplx b = pairs[1].vector.transpose() * pairs[0].vector;
        EXPECT_LT(std::abs(a), 1e-12);
        EXPECT_LT(std::abs(b), 1e-12);
    }
}

TEST(CurrentSweepTest, CsvOutputs) {
    const auto sweep = current_sweep(3, {0.5, 1.5});
    ASSERT_EQ(sweep.size(), 8u);
    std::ostringstream a, b;
    write_current_sweep(a, sweep);
    write_current_profiles(b, sweep);
    EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "gamma_tilde,state_id,phase,J_av");
    EXPECT_EQ(b.str().substr(0, b.str().find('\n')), "gamma_tilde,state_id,phase,l,J");
    const std::string sa = a.str(), sb = b.str();
    EXPECT_EQ(std::count(sa.begin(), sa.end(), '\n'), 9);
    EXPECT_EQ(std::count(sb.begin(), sb.end(), '\n'), 1 + 8 * 3);
}
