// Copyright 2026 The bethe-transport Authors
// SPDX-License-Identifier: Apache-2.0

#include "bethe/lattice.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <set>
#include <sstream>

using namespace bethe;

namespace {

TreeSpec tree(std::vector<int> b, double g0 = 0.5, double gN = 0.5) {
    TreeSpec s;
    s.N = static_cast<int>(b.size());
    s.branching = std::move(b);
    s.gamma0 = g0;
    s.gammaN = gN;
    return s;
}

} // namespace

TEST(TreeSpecTest, CountsMatchEnumeration) {
    for (const auto &b : std::vector<std::vector<int>>{{2}, {2, 3}, {2, 2, 2}, {3, 1, 4}, {1, 1, 1, 1}, {5, 2}}) {
        const auto s = tree(b);
        EXPECT_EQ(s.total_sites(), static_cast<std::int64_t>(oracle::enumerate_paths(b).size()));
    }
    EXPECT_EQ(tree({2}).total_sites(), 3);
    EXPECT_EQ(tree({2, 3}).total_sites(), 9);
    EXPECT_EQ(tree({2, 2, 2}).total_sites(), 15);
    EXPECT_EQ(tree({2, 3}).sites_in_generation(0), 1);
    EXPECT_EQ(tree({2, 3}).sites_in_generation(2), 6);
}

TEST(TreeSpecTest, ValidationErrors) {
    EXPECT_THROW(tree({}).validate(), ConfigError);
    EXPECT_THROW(tree({2, 0}).validate(), ConfigError);
    EXPECT_THROW(tree({2}, 0.0, 1.0).validate(), ConfigError);
    EXPECT_THROW(tree({2}, 1.0, -1.0).validate(), ConfigError);
    auto bad = tree({2, 2});
    bad.N = 3;
    EXPECT_THROW(bad.validate(), ConfigError);
    // gamma = 0 is structurally fine (Hermitian limit) but not a valid physical spec
    EXPECT_NO_THROW(tree({2}, 0.0, 0.0).validate_structure());
    EXPECT_NO_THROW(tree({2}, 0.1, 0.2).validate());
}

TEST(TreeIndexTest, RoundTripAndContiguity) {
    const auto s = tree({3, 2, 4});
    const TreeIndex idx(s);
    ASSERT_EQ(idx.size(), s.total_sites());
    std::set<std::int64_t> seen;
    for (const auto &p : oracle::enumerate_paths(s.branching)) {
        const auto id = idx.id(p);
        EXPECT_TRUE(seen.insert(id).second);
        EXPECT_EQ(idx.path(id), p);
        EXPECT_EQ(idx.generation_of(id), static_cast<int>(p.size()));
        EXPECT_GE(id, idx.generation_offset(static_cast<int>(p.size())));
        EXPECT_LT(id, idx.generation_offset(static_cast<int>(p.size())) + idx.generation_size(static_cast<int>(p.size())));
        if (!p.empty()) {
            auto pp = p;
            pp.pop_back();
            EXPECT_EQ(idx.parent(id), idx.id(pp));
        }
    }
    EXPECT_EQ(static_cast<std::int64_t>(seen.size()), idx.size());
    EXPECT_EQ(idx.id({}), 0);
    EXPECT_EQ(idx.path(0), SitePath{});
}

TEST(TreeIndexTest, SmallestTreeIds) {
    const TreeIndex idx(tree({2}));
    EXPECT_EQ(idx.size(), 3);
    EXPECT_EQ(idx.id({1}), 1);
    EXPECT_EQ(idx.id({2}), 2);
    EXPECT_EQ(idx.first_child(0), 1);
}

TEST(TreeIndexTest, Errors) {
    const TreeIndex idx(tree({2, 3}));
    EXPECT_THROW(idx.id({3}), DomainError);
    EXPECT_THROW(idx.id({1, 0}), DomainError);
    EXPECT_THROW(idx.id({1, 1, 1}), DomainError);
    EXPECT_THROW(idx.path(9), DomainError);
    EXPECT_THROW(idx.path(-1), DomainError);
    EXPECT_THROW(idx.parent(0), DomainError);
    EXPECT_THROW(idx.first_child(8), DomainError);
    EXPECT_THROW(TreeIndex(tree({10, 10, 10}), 1000), SizeError);
    EXPECT_NO_THROW(TreeIndex(tree({10, 10, 10}), 1111));
}

TEST(HamiltonianTest, SmallestTreeEntries) {
    const double g = 0.7;
    const auto s = tree({2}, g, g);
    const auto h = assemble_hamiltonian(s, TreeIndex(s)).to_dense();
    CMatrix expect(3, 3);
    expect << cplx{0, -g}, -1, -1, -1, cplx{0, g}, 0, -1, 0, cplx{0, g};
    EXPECT_LT((h - expect).norm(), 1e-15);
}

TEST(HamiltonianTest, PermutationEquivalentToDepthFirstBuild) {
    const auto s = tree({2, 3, 2}, 0.3, 0.9);
    const TreeIndex idx(s);
    const auto h = assemble_hamiltonian(s, idx).to_dense();
    const auto paths = oracle::enumerate_paths(s.branching);
    const auto ref = oracle::tree_hamiltonian_dfs(s.branching, s.gamma0, s.gammaN);
    for (std::size_t a = 0; a < paths.size(); ++a)
        for (std::size_t b = 0; b < paths.size(); ++b)
            ASSERT_EQ(h(idx.id(paths[a]), idx.id(paths[b])), ref(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
}

TEST(HamiltonianTest, StructuralInvariants) {
    for (const auto &b : std::vector<std::vector<int>>{{2, 2}, {3, 1, 2}, {1}, {4, 3}}) {
        const auto s = tree(b, 0.4, 1.3);
        const TreeIndex idx(s);
        const auto h = assemble_hamiltonian(s, idx);
        EXPECT_TRUE(h.is_transpose_symmetric());
        EXPECT_FALSE(h.is_hermitian());
        std::size_t off = 0;
        for (const auto &t : h.entries()) {
            EXPECT_NE(t.value, cplx{});
            if (t.row != t.col) {
                ++off;
                EXPECT_EQ(t.value, cplx{-1.0});
            }
        }
        EXPECT_EQ(static_cast<std::int64_t>(off), 2 * (s.total_sites() - 1));
        const CMatrix d = h.to_dense();
        const CMatrix anti = (d - d.adjoint()) / cplx{0, 2};
        for (Eigen::Index i = 0; i < d.rows(); ++i) {
            for (Eigen::Index j = 0; j < d.cols(); ++j) {
                if (i != j) {
                    EXPECT_EQ(anti(i, j), cplx{});
                } else {
                    const double a = anti(i, i).real();
                    EXPECT_TRUE(a == -0.4 || a == 0.0 || a == 1.3) << a;
                }
            }
        }
    }
    EXPECT_EQ(assemble_hamiltonian(tree({2, 2}), TreeIndex(tree({2, 2}))).nonzeros(), 12u + 1u + 4u);
}

TEST(HamiltonianTest, HermitianLimitHasRealSpectrum) {
    const auto s = tree({2, 3}, 0.0, 0.0);
    const auto h = assemble_hamiltonian(s, TreeIndex(s));
    EXPECT_TRUE(h.is_hermitian());
    Eigen::ComplexEigenSolver<CMatrix> es(h.to_dense());
    EXPECT_LT(es.eigenvalues().imag().cwiseAbs().maxCoeff(), 1e-12);
}

TEST(HamiltonianTest, MismatchedIndexRejected) {
    EXPECT_THROW(assemble_hamiltonian(tree({2, 2}), TreeIndex(tree({2, 3}))), DomainError);
}

TEST(SparseMatrixTest, DuplicatesSummedAndMultiply) {
    SparseComplexMatrix m(3);
    m.add(0, 1, 1.0);
    m.add(0, 1, cplx{0, 2});
    m.add(2, 2, 3.0);
    m.add(1, 1, 1.0);
    m.add(1, 1, -1.0);
    m.finalize();
    EXPECT_EQ(m.at(0, 1), cplx(1, 2));
    EXPECT_EQ(m.at(1, 1), cplx{});
    EXPECT_EQ(m.nonzeros(), 2u);
    CVector x(3);
    x << 1, cplx{0, 1}, 2;
    EXPECT_LT((m.multiply(x) - m.to_dense() * x).norm(), 1e-15);
}

TEST(SparseMatrixTest, CoordinateOutput) {
    const auto s = tree({2}, 0.5, 0.25);
    const auto h = assemble_hamiltonian(s, TreeIndex(s));
    std::ostringstream os;
    h.write_coordinate(os);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line.rfind("# dimension 3", 0), 0u);
    CMatrix back = CMatrix::Zero(3, 3);
    std::int64_t r, c;
    double re, im;
    int count = 0;
    while (is >> r >> c >> re >> im) {
        back(r, c) += cplx{re, im};
        ++count;
    }
    EXPECT_EQ(count, 7);
    EXPECT_EQ(back, h.to_dense());
}

TEST(LinkCurrentTest, BlockAndSpectrum) {
    const auto s = tree({2, 2});
    const TreeIndex idx(s);
    const auto j = link_current_operator({}, {1}, idx);
    EXPECT_EQ(j.at(0, 1), cplx(0, 1));
    EXPECT_EQ(j.at(1, 0), cplx(0, -1));
    EXPECT_TRUE(j.is_hermitian());
    const CMatrix d = link_current_operator({1}, {1, 2}, idx).to_dense();
    EXPECT_EQ(d.trace(), cplx{});
    Eigen::SelfAdjointEigenSolver<CMatrix> es(d);
    const auto ev = es.eigenvalues();
    EXPECT_NEAR(ev.minCoeff(), -1.0, 1e-14);
    EXPECT_NEAR(ev.maxCoeff(), 1.0, 1e-14);
    EXPECT_NEAR(ev.cwiseAbs().sum(), 2.0, 1e-14);
}

TEST(LinkCurrentTest, Expectations) {
    const auto s = tree({2, 2});
    const TreeIndex idx(s);
    const auto j = link_current_operator({2}, {2, 1}, idx);
    CVector zero_on_link = CVector::Random(idx.size());
    zero_on_link(idx.id({2})) = 0;
    zero_on_link(idx.id({2, 1})) = 0;
    EXPECT_EQ(j.expectation(zero_on_link), cplx{});
    const CVector real = Eigen::VectorXd::Random(idx.size()).cast<cplx>();
    EXPECT_NEAR(std::abs(j.expectation(real)), 0.0, 1e-15);
    // -2 Im[psi(child) conj(psi(parent))]
    CVector psi = CVector::Zero(idx.size());
    psi(idx.id({2})) = 1.0;
    psi(idx.id({2, 1})) = std::polar(0.5, 0.3);
    EXPECT_NEAR(j.expectation(psi).real(), -2 * 0.5 * std::sin(0.3), 1e-15);
    EXPECT_NEAR(j.expectation(psi).imag(), 0.0, 1e-15);
}

TEST(LinkCurrentTest, NonAdjacentRejected) {
    const TreeIndex idx(tree({2, 2}));
    EXPECT_THROW(link_current_operator({}, {1, 1}, idx), DomainError);
    EXPECT_THROW(link_current_operator({1}, {2, 1}, idx), DomainError);
    EXPECT_THROW(link_current_operator({1}, {}, idx), DomainError);
}
