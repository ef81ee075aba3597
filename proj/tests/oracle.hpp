// Copyright 2026 The bethe-transport Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference computations used by the tests. Nothing here calls
// into the library; each helper rebuilds its answer from first principles.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

/// Depth-first enumeration of every root-to-site path of a tree.
inline std::vector<std::vector<int>> enumerate_paths(const std::vector<int> &branching) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void()> rec = [&] {
        out.push_back(cur);
        if (cur.size() == branching.size()) return;
        for (int c = 1; c <= branching[cur.size()]; ++c) {
            cur.push_back(c);
            rec();
            cur.pop_back();
        }
    };
    rec();
    return out;
}

/// Tree Hamiltonian built from the path enumeration by adjacency search.
/// Sites are in depth-first order, so the result differs from the library's
/// breadth-first ordering by a permutation only.
inline Eigen::MatrixXcd tree_hamiltonian_dfs(const std::vector<int> &branching, double g0, double gN) {
    const auto paths = enumerate_paths(branching);
    const auto n = static_cast<Eigen::Index>(paths.size());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        const auto &pa = paths[static_cast<std::size_t>(a)];
        if (pa.empty()) h(a, a) += cplx{0, -g0};
        if (pa.size() == branching.size()) h(a, a) += cplx{0, gN};
        for (Eigen::Index b = 0; b < n; ++b) {
            const auto &pb = paths[static_cast<std::size_t>(b)];
            if (pb.size() == pa.size() + 1 && std::equal(pa.begin(), pa.end(), pb.begin())) {
                h(a, b) = -1.0;
                h(b, a) = -1.0;
            }
        }
    }
    return h;
}

/// Uniform open chain of N+1 sites with -i g at site 0 and +i g at site N.
inline Eigen::MatrixXcd uniform_chain(int N, double g) {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(N + 1, N + 1);
    for (int l = 0; l < N; ++l) h(l, l + 1) = h(l + 1, l) = -1.0;
    h(0, 0) = cplx{0, -g};
    h(N, N) += cplx{0, g};
    return h;
}

/// All roots of a monic polynomial (coefficients highest degree first, the
/// leading 1 omitted) by Durand-Kerner iteration.
inline std::vector<cplx> poly_roots(const std::vector<cplx> &coeffs) {
    const std::size_t n = coeffs.size();
    std::vector<cplx> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = std::pow(cplx{0.4, 0.9}, static_cast<double>(i)) * 2.0;
    const auto p = [&](cplx x) {
        cplx v = 1.0;
        for (const cplx &c : coeffs) v = v * x + c;
        return v;
    };
    for (int it = 0; it < 2000; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            cplx den = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) den *= z[i] - z[j];
            z[i] -= p(z[i]) / den;
        }
    }
    return z;
}

/// Smallest sum of |a_i - b_sigma(i)| maximum over all permutations, by brute
/// force; only for tiny sets.
inline double brute_force_match(std::vector<cplx> a, const std::vector<cplx> &b) {
    std::vector<std::size_t> perm(b.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    double best = 1e300;
    do {
        double worst = 0;
        for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[perm[i]]));
        best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// Sorted real parts, handy for comparing Hermitian spectra.
inline std::vector<double> sorted_real(const Eigen::VectorXcd &v) {
    std::vector<double> out;
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i).real());
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace oracle
