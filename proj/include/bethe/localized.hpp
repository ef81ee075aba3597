// Copyright 2026 The bethe-transport Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file localized.hpp
 * @brief Analytic construction of the eigenstates with zero amplitude on the
 *        origin.
 *
 * Family l (1 <= l <= N) lives below one generation-(l-1) root site. The
 * children of the root carry discrete-Fourier phases exp(i m (nu-1) 2pi/n_l),
 * m = 1..n_l-1, which cancel at the root. Below each child the amplitude is
 * uniform per generation and given by an eigenvector of the (N-l+1)-site
 * branch sub-Hamiltonian
 *
 *   diag(0, ..., 0, +i gammaN),  off-diagonals -sqrt(n_{l+1}), ..., -sqrt(n_N).
 *
 * Family l therefore holds (N+1-l) (n_tot_l - n_tot_{l-1}) states and all
 * families together hold n_tot - (N+1).
 */

#pragma once

#include "bethe/csv.hpp"
#include "bethe/lattice.hpp"
#include "bethe/spectral.hpp"
#include "bethe/types.hpp"

#include <cmath>
#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

namespace bethe {

struct RootsOfUnityMode {
    int generation = 1;          ///< generation of the children carrying the phases
    std::int64_t root_site = 0;  ///< id of the generation-(l-1) root
    int mode = 1;                ///< m in [1, n_l - 1]
    int children = 1;            ///< n_l

    double theta() const { return 2.0 * kPi / children; }

    /// exp(i m nu theta) for nu = 0 .. n_l-1; sums to zero for 1 <= m < n_l.
    std::vector<cplx> child_phases() const {
        std::vector<cplx> ph(static_cast<std::size_t>(children));
        for (int nu = 0; nu < children; ++nu) {
            // reduce m*nu modulo n_l first to keep the argument small
            const int k = static_cast<int>((static_cast<long long>(mode) * nu) % children);
            ph[static_cast<std::size_t>(nu)] = std::polar(1.0, k * theta());
        }
        return ph;
    }
};

struct BranchSubHamiltonian {
    int root_generation = 1;       ///< l; depth 0 of the branch sits at generation l
    std::vector<double> hoppings;  ///< sqrt(n_{l+1}), ..., sqrt(n_N)
    double gammaN = 0.0;

    int size() const { return static_cast<int>(hoppings.size()) + 1; }

    CMatrix matrix() const {
        const int d = size();
        CMatrix m = CMatrix::Zero(d, d);
        for (int j = 0; j + 1 < d; ++j) {
            m(j, j + 1) = -hoppings[static_cast<std::size_t>(j)];
            m(j + 1, j) = -hoppings[static_cast<std::size_t>(j)];
        }
        m(d - 1, d - 1) += cplx{0.0, gammaN};
        return m;
    }
};

inline BranchSubHamiltonian branch_sub_hamiltonian(const TreeSpec &spec, int root_generation) {
    if (root_generation < 1 || root_generation > spec.N) {
        throw DomainError("branch_sub_hamiltonian: generation must be in [1, N]");
    }
    BranchSubHamiltonian b;
    b.root_generation = root_generation;
    b.gammaN = spec.gammaN;
    for (int g = root_generation + 1; g <= spec.N; ++g) b.hoppings.push_back(std::sqrt(static_cast<double>(spec.n(g))));
    return b;
}

/// Eigenpairs of the branch sub-Hamiltonian; the 1x1 case returns +i gammaN
/// exactly.
inline std::vector<EigenPair> branch_eigenpairs(const BranchSubHamiltonian &b, const EigOptions &opt = {}) {
    if (b.size() == 1) {
        EigenPair p;
        p.value = cplx{0.0, b.gammaN};
        p.vector = CVector::Ones(1);
        p.residual = 0.0;
        return {p};
    }
    return eig_dense(b.matrix(), opt);
}

struct LocalizedState {
    RootsOfUnityMode mode;
    EigenPair sub_pair;                                  ///< branch sub-Hamiltonian eigenpair
    std::vector<std::pair<std::int64_t, cplx>> support; ///< nonzero amplitudes, unit norm overall

    cplx value() const { return sub_pair.value; }
    std::size_t support_size() const { return support.size(); }

    CVector full_vector(std::int64_t n_tot) const {
        CVector v = CVector::Zero(n_tot);
        for (const auto &[id, a] : support) v(id) = a;
        return v;
    }
};

/// Family of states whose phases sit on generation `generation`. Empty when
/// n_l = 1.
inline std::vector<LocalizedState> localized_family(const TreeSpec &spec, const TreeIndex &index, int generation,
                                                    const EigOptions &opt = {}) {
    if (generation < 1 || generation > spec.N) throw DomainError("localized_family: generation must be in [1, N]");
    std::vector<LocalizedState> out;
    const int nl = spec.n(generation);
    if (nl < 2) return out;

    const auto sub = branch_sub_hamiltonian(spec, generation);
    const auto sub_pairs = branch_eigenpairs(sub, opt);
    const int depth = sub.size();

    // number of descendants of one generation-l site at each depth
    std::vector<std::int64_t> per_depth(static_cast<std::size_t>(depth), 1);
    for (int j = 1; j < depth; ++j) per_depth[static_cast<std::size_t>(j)] = per_depth[static_cast<std::size_t>(j) - 1] * spec.n(generation + j);

    const std::int64_t roots_begin = index.generation_offset(generation - 1);
    const std::int64_t roots_end = roots_begin + index.generation_size(generation - 1);
    out.reserve(static_cast<std::size_t>((roots_end - roots_begin) * (nl - 1) * depth));

    for (std::int64_t root = roots_begin; root < roots_end; ++root) {
        const std::int64_t first = index.first_child(root);
        for (int m = 1; m < nl; ++m) {
            RootsOfUnityMode mode{generation, root, m, nl};
            const auto phases = mode.child_phases();
            for (const auto &sp : sub_pairs) {
                LocalizedState st;
                st.mode = mode;
                st.sub_pair = sp;
                double norm2 = 0.0;
                for (int j = 0; j < depth; ++j) norm2 += std::norm(sp.vector(j));
                const double scale = 1.0 / std::sqrt(norm2 * nl);
                std::int64_t support = 0;
                for (int j = 0; j < depth; ++j) support += per_depth[static_cast<std::size_t>(j)];
                st.support.reserve(static_cast<std::size_t>(support * nl));
                for (int nu = 0; nu < nl; ++nu) {
                    std::int64_t block = first + nu; // first descendant at the current depth
                    for (int j = 0; j < depth; ++j) {
                        const std::int64_t count = per_depth[static_cast<std::size_t>(j)];
                        const cplx a = phases[static_cast<std::size_t>(nu)] * sp.vector(j) * scale /
                                       std::sqrt(static_cast<double>(count));
                        for (std::int64_t s = 0; s < count; ++s) st.support.emplace_back(block + s, a);
                        if (j + 1 < depth) block = index.first_child(block);
                    }
                }
                out.push_back(std::move(st));
            }
        }
    }
    return out;
}

/// Eigenvalue +i gammaN family on the peripheral sites.
inline std::vector<LocalizedState> peripheral_family(const TreeSpec &spec, const TreeIndex &index) {
    return localized_family(spec, index, spec.N);
}

inline std::vector<LocalizedState> all_localized(const TreeSpec &spec, const TreeIndex &index,
                                                 const EigOptions &opt = {}) {
    std::vector<LocalizedState> out;
    for (int l = spec.N; l >= 1; --l) {
        auto fam = localized_family(spec, index, l, opt);
        out.insert(out.end(), std::make_move_iterator(fam.begin()), std::make_move_iterator(fam.end()));
    }
    return out;
}

/// (N+1-l)(n_tot_l - n_tot_{l-1}) in exact integer arithmetic.
inline std::int64_t localized_family_size(const TreeSpec &spec, int generation) {
    return static_cast<std::int64_t>(spec.N + 1 - generation) *
           (spec.sites_in_generation(generation) - spec.sites_in_generation(generation - 1));
}

inline std::int64_t localized_count(const TreeSpec &spec) {
    std::int64_t total = 0;
    for (int l = 1; l <= spec.N; ++l) total += localized_family_size(spec, l);
    return total;
}

/// One row per localized state:
/// family_generation,root_site_id,mode,re_E,im_E,support_size
inline void write_localized_inventory(std::ostream &os, const std::vector<LocalizedState> &states) {
    CsvWriter csv(os, {"family_generation", "root_site_id", "mode", "re_E", "im_E", "support_size"});
    for (const auto &s : states) {
        csv.row(s.mode.generation, s.mode.root_site, s.mode.mode, s.value().real(), s.value().imag(),
                s.support_size());
    }
}

} // namespace bethe
