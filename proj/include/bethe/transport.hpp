// Copyright 2026 The bethe-transport Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file transport.hpp
 * @brief Link current operators and their expectation values.
 *
 * The scaled current between generations l and l+1 of the chain is
 *   J(l) = -2 Im[psi(l+1) conj(psi(l))],
 * positive when the flow runs toward the origin. Expectations always use
 * unit-normalized right eigenvectors with the Hermitian-conjugate bra; the
 * biorthogonal variant only appears as the explicit N = 1 contrast.
 */

#pragma once

#include "bethe/chain.hpp"
#include "bethe/csv.hpp"
#include "bethe/lattice.hpp"
#include "bethe/spectral.hpp"
#include "bethe/types.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

namespace bethe {

/// (N+1)x(N+1) Hermitian matrix with +i at (l, l+1) and -i at (l+1, l).
inline CMatrix chain_current_operator(int l, int N) {
    if (N < 1 || l < 0 || l > N - 1) {
        throw DomainError("chain_current_operator: link " + std::to_string(l) + " out of range for N = " +
                          std::to_string(N));
    }
    CMatrix j = CMatrix::Zero(N + 1, N + 1);
    j(l, l + 1) = kI;
    j(l + 1, l) = -kI;
    return j;
}

inline double expectation_current(const CVector &psi, int l) {
    if (l < 0 || l + 1 >= psi.size()) throw DomainError("expectation_current: link out of range");
    return -2.0 * (psi(l + 1) * std::conj(psi(l))).imag();
}

enum class CurrentWeighting { Unweighted, HoppingWeighted };

struct CurrentProfile {
    std::vector<double> J; ///< J(l), l = 0..N-1
    double average = 0.0;
    int state_id = -1;

    double spread() const {
        if (J.empty()) return 0.0;
        const auto [lo, hi] = std::minmax_element(J.begin(), J.end());
        return *hi - *lo;
    }
};

/// Per-link expectations for a unit vector. With HoppingWeighted, link l is
/// multiplied by hoppings[l] (the scaled t_{l+1}), which makes the profile
/// obey the lattice continuity equation on a nonuniform chain.
inline CurrentProfile current_profile(const CVector &psi, int state_id = -1,
                                      CurrentWeighting weighting = CurrentWeighting::Unweighted,
                                      const std::vector<double> &hoppings = {}) {
    const int N = static_cast<int>(psi.size()) - 1;
    if (N < 1) throw DomainError("current_profile: need at least two sites");
    if (weighting == CurrentWeighting::HoppingWeighted && static_cast<int>(hoppings.size()) != N) {
        throw DomainError("current_profile: hopping weights must have length N");
    }
    CurrentProfile p;
    p.state_id = state_id;
    p.J.resize(static_cast<std::size_t>(N));
    double sum = 0.0;
    for (int l = 0; l < N; ++l) {
        double j = expectation_current(psi, l);
        if (weighting == CurrentWeighting::HoppingWeighted) j *= hoppings[static_cast<std::size_t>(l)];
        p.J[static_cast<std::size_t>(l)] = j;
        sum += j;
    }
    p.average = sum / N;
    return p;
}

inline double average_current(const CVector &psi, int N) {
    if (psi.size() != N + 1) throw DomainError("average_current: vector length must be N+1");
    return current_profile(psi).average;
}

/// 4 gt sin^2 k / (N(1 + gt^2) + 2) for a real-k state.
inline double closed_form_current(int N, double gamma_tilde, double k) {
    const double s = std::sin(k);
    return 4.0 * gamma_tilde * s * s / (N * (1.0 + gamma_tilde * gamma_tilde) + 2.0);
}

/// 2/(N+1) for odd N and 2/sqrt(N(N+2)) for even N.
inline double exceptional_point_current(int N) {
    if (N < 1) throw DomainError("exceptional_point_current: N must be >= 1");
    return N % 2 ? 2.0 / (N + 1) : 2.0 / std::sqrt(static_cast<double>(N) * (N + 2));
}

/// Sum of the link currents from generation l+1 into generation l, divided
/// by sqrt(n_{l+1}). For an extended state this is the chain expectation.
inline double tree_current_expectation(const CVector &state, const TreeSpec &spec, const TreeIndex &index, int l) {
    if (l < 0 || l >= spec.N) throw DomainError("tree_current_expectation: generation out of range");
    if (state.size() != index.size()) throw DomainError("tree_current_expectation: state has wrong dimension");
    const std::int64_t begin = index.generation_offset(l + 1);
    const std::int64_t end = begin + index.generation_size(l + 1);
    double sum = 0.0;
    for (std::int64_t c = begin; c < end; ++c) sum += -2.0 * (state(c) * std::conj(state(index.parent(c)))).imag();
    return sum / std::sqrt(static_cast<double>(spec.n(l + 1)));
}

/// max |<phi|J|psi>| over both N = 1 states, with phi the left eigenvector
/// normalized so that <phi|psi> = 1.
inline double biorthogonal_current_n1(double gamma_tilde, double ep_window = 1e-8) {
    if (std::abs(gamma_tilde - 1.0) < ep_window) {
        throw DomainError("biorthogonal_current_n1: left/right pair is undefined at the exceptional point");
    }
    const CMatrix h = ChainSpec::scaled_uniform(1, gamma_tilde).matrix();
    const auto right = eig_dense(h);
    const auto left = eig_dense(CMatrix(h.adjoint()));
    const CMatrix j = chain_current_operator(0, 1);
    double worst = 0.0;
    for (const auto &r : right) {
        // the left partner has eigenvalue conj(E) for H^dagger
        const auto it = std::min_element(left.begin(), left.end(), [&](const EigenPair &a, const EigenPair &b) {
            return std::abs(a.value - std::conj(r.value)) < std::abs(b.value - std::conj(r.value));
        });
        const cplx norm = it->vector.dot(r.vector);
        if (std::abs(norm) < 1e-14) throw NumericalError("biorthogonal_current_n1: self-orthogonal pair");
        const cplx value = it->vector.dot(j * r.vector) / norm;
        worst = std::max(worst, std::abs(value));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Sweeps over gamma_tilde for the scaled uniform chain

struct CurrentSample {
    double gamma_tilde = 0.0;
    int state_id = 0;
    Phase phase = Phase::PTUnbroken;
    cplx energy;
    CurrentProfile profile;
};

/// Current of every extended state at each grid point, from the closed-form
/// eigenfunctions.
inline std::vector<CurrentSample> current_sweep(int N, const std::vector<double> &grid) {
    std::vector<CurrentSample> out;
    for (double gt : grid) {
        const auto roots = solve_secular(N, gt);
        for (std::size_t s = 0; s < roots.size(); ++s) {
            const auto f = eigenfunction(roots[s], N, gt);
            out.push_back({gt, static_cast<int>(s), roots[s].phase, roots[s].energy(),
                           current_profile(f.values, static_cast<int>(s))});
        }
    }
    return out;
}

/// gamma_tilde,state_id,phase,J_av
inline void write_current_sweep(std::ostream &os, const std::vector<CurrentSample> &samples) {
    CsvWriter csv(os, {"gamma_tilde", "state_id", "phase", "J_av"});
    for (const auto &s : samples) csv.row(s.gamma_tilde, s.state_id, to_string(s.phase), s.profile.average);
}

/// gamma_tilde,state_id,phase,l,J
inline void write_current_profiles(std::ostream &os, const std::vector<CurrentSample> &samples) {
    CsvWriter csv(os, {"gamma_tilde", "state_id", "phase", "l", "J"});
    for (const auto &s : samples) {
        for (std::size_t l = 0; l < s.profile.J.size(); ++l) {
            csv.row(s.gamma_tilde, s.state_id, to_string(s.phase), static_cast<std::int64_t>(l), s.profile.J[l]);
        }
    }
}

} // namespace bethe
