// Copyright 2026 The bethe-transport Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file chain.hpp
 * @brief The (N+1)-site effective chain carrying the extended eigenstates.
 *
 * Uniform-amplitude states per generation close under the tree Hamiltonian
 * and give a tridiagonal matrix with hoppings -sqrt(n_l), drain -i gamma0 at
 * site 0 and source +i gammaN at site N. For uniform branching n and
 * gamma0 = gammaN = gamma, dividing by sqrt(n) leaves unit hoppings and the
 * single parameter gamma_tilde = gamma / sqrt(n).
 *
 * For the scaled uniform chain the plane-wave ansatz gives E = -2 cos k with
 *
 *   f(k) = -sin((N+2)k) / sin(Nk) = gamma_tilde^2,
 *
 * and, beyond the exceptional point, k = pi/2 +- i kappa with
 * cosh((N+2)kappa)/cosh(N kappa) (odd N) or sinh(...)/sinh(...) (even N)
 * equal to gamma_tilde^2.
 */

#pragma once

#include "bethe/csv.hpp"
#include "bethe/lattice.hpp"
#include "bethe/spectral.hpp"
#include "bethe/types.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace bethe {

struct ChainSpec {
    int N = 1;
    std::vector<double> hoppings; ///< t_1 .. t_N, matrix entries are -t_l
    double gamma0 = 0.0;
    double gammaN = 0.0;

    int sites() const { return N + 1; }

    CMatrix matrix() const {
        if (static_cast<int>(hoppings.size()) != N) throw DomainError("ChainSpec: expected N hoppings");
        CMatrix m = CMatrix::Zero(N + 1, N + 1);
        for (int l = 0; l < N; ++l) {
            m(l, l + 1) = -hoppings[static_cast<std::size_t>(l)];
            m(l + 1, l) = -hoppings[static_cast<std::size_t>(l)];
        }
        m(0, 0) += cplx{0.0, -gamma0};
        m(N, N) += cplx{0.0, gammaN};
        return m;
    }

    /// Unit hoppings, gamma0 = gammaN = gamma_tilde.
    static ChainSpec scaled_uniform(int N, double gamma_tilde) {
        if (N < 1) throw DomainError("ChainSpec: N must be >= 1");
        return ChainSpec{N, std::vector<double>(static_cast<std::size_t>(N), 1.0), gamma_tilde, gamma_tilde};
    }

    ChainSpec with_gamma(double gamma) const {
        ChainSpec c = *this;
        c.gamma0 = c.gammaN = gamma;
        return c;
    }
};

inline ChainSpec effective_chain(const TreeSpec &spec) {
    spec.validate_structure();
    ChainSpec c;
    c.N = spec.N;
    c.gamma0 = spec.gamma0;
    c.gammaN = spec.gammaN;
    for (int l = 1; l <= spec.N; ++l) c.hoppings.push_back(std::sqrt(static_cast<double>(spec.n(l))));
    return c;
}

/// Gamma_tilde of the scaled chain when the branching is uniform and
/// gamma0 = gammaN.
inline std::optional<double> scaled_gamma(const TreeSpec &spec) {
    if (!spec.uniform_branching() || spec.gamma0 != spec.gammaN) return std::nullopt;
    return spec.gamma0 / std::sqrt(static_cast<double>(spec.branching.front()));
}

// ---------------------------------------------------------------------------
// Secular equation

enum class Phase { PTUnbroken, PTBrokenPlus, PTBrokenMinus, ZeroMode };

inline std::string to_string(Phase p) {
    switch (p) {
    case Phase::PTUnbroken: return "PT_unbroken";
    case Phase::PTBrokenPlus: return "PT_broken_plus";
    case Phase::PTBrokenMinus: return "PT_broken_minus";
    case Phase::ZeroMode: return "zero_mode";
    }
    return "unknown";
}

struct SecularRoot {
    cplx k;              ///< wave number; real, or pi/2 +- i kappa
    double kappa = 0.0;  ///< >= 0, zero for real roots
    Phase phase = Phase::PTUnbroken;
    bool degenerate = false; ///< reported at the exceptional point itself

    cplx energy() const { return -2.0 * std::cos(k); }
};

/// f(k) = -sin((N+2)k) / sin(Nk).
inline double secular_f(int N, double k) { return -std::sin((N + 2) * k) / std::sin(N * k); }

/// Gamma_tilde at the exceptional point: 1 (odd N), sqrt((N+2)/N) (even N).
inline double exceptional_point(int N) {
    if (N < 1) throw DomainError("exceptional_point: N must be >= 1");
    return N % 2 ? 1.0 : std::sqrt(static_cast<double>(N + 2) / N);
}

struct SecularOptions {
    double ep_window = 1e-8;   ///< |gamma_tilde - EP| below this reports the merged root
    int samples_per_site = 64; ///< bracketing resolution on (0, pi/2)
};

namespace detail {

/// Zero-free reformulation of the secular condition on (0, pi/2]:
/// g(k) = sin((N+2)k) + gt^2 sin(Nk), divided by cos k for even N to remove
/// the always-present zero mode at k = pi/2.
inline double secular_h(int N, double gt2, double k) {
    const double g = std::sin((N + 2) * k) + gt2 * std::sin(N * k);
    if (N % 2) return g;
    const double c = std::cos(k);
    if (std::abs(c) < 1e-300) {
        const double dg = (N + 2) * std::cos((N + 2) * k) + gt2 * N * std::cos(N * k);
        return -dg;
    }
    return g / c;
}

inline double secular_h_at_half_pi(int N, double gt2) {
    const double k = kPi / 2;
    if (N % 2) return std::sin((N + 2) * k) + gt2 * std::sin(N * k);
    return -((N + 2) * std::cos((N + 2) * k) + gt2 * N * std::cos(N * k));
}

} // namespace detail

/// Real roots in (0, pi): bracketing of the pole-free form on (0, pi/2),
/// bisection to machine precision, then mirroring k -> pi - k. For even N
/// the zero mode k = pi/2 is included, tagged ZeroMode. Throws
/// NumericalError if the number of roots differs from N+1 (below the EP) or
/// N-1 (above it).
inline std::vector<SecularRoot> solve_secular_real(int N, double gamma_tilde, const SecularOptions &opt = {}) {
    if (N < 1) throw DomainError("solve_secular_real: N must be >= 1");
    if (gamma_tilde < 0) throw DomainError("solve_secular_real: gamma_tilde must be >= 0");
    const double ep = exceptional_point(N);
    const double gt2 = gamma_tilde * gamma_tilde;
    std::vector<SecularRoot> roots;

    const bool at_ep = std::abs(gamma_tilde - ep) < opt.ep_window;
    const int samples = opt.samples_per_site * (N + 2);
    const double half = kPi / 2;
    std::vector<double> left;
    double k_prev = 0.0;
    double h_prev = std::numeric_limits<double>::quiet_NaN();
    for (int i = 1; i <= samples; ++i) {
        const double k = half * i / samples;
        double h = (i == samples) ? detail::secular_h_at_half_pi(N, gt2) : detail::secular_h(N, gt2, k);
        if (i == samples && at_ep) break; // the endpoint sign is unreliable at the EP
        if (i > 1 && h == 0.0 && i < samples) {
            left.push_back(k);
        } else if (i > 1 && std::signbit(h) != std::signbit(h_prev) && h_prev != 0.0 && h != 0.0) {
            double lo = k_prev, hi = k, hlo = h_prev;
            for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double hm = detail::secular_h(N, gt2, mid);
                if (hm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (std::signbit(hm) == std::signbit(hlo)) {
                    lo = mid;
                    hlo = hm;
                } else {
                    hi = mid;
                }
            }
            left.push_back(0.5 * (lo + hi));
        }
        k_prev = k;
        h_prev = h;
    }
    for (double k : left) roots.push_back({cplx{k, 0.0}, 0.0, Phase::PTUnbroken, false});
    for (auto it = left.rbegin(); it != left.rend(); ++it) roots.push_back({cplx{kPi - *it, 0.0}, 0.0, Phase::PTUnbroken, false});
    if (at_ep) {
        roots.push_back({cplx{half, 0.0}, 0.0, Phase::PTUnbroken, true});
        roots.push_back({cplx{half, 0.0}, 0.0, Phase::PTUnbroken, true});
    }
    if (N % 2 == 0) roots.push_back({cplx{half, 0.0}, 0.0, Phase::ZeroMode, at_ep});
    std::sort(roots.begin(), roots.end(), [](const SecularRoot &a, const SecularRoot &b) { return a.k.real() < b.k.real(); });

    const int expected = (gamma_tilde < ep || at_ep) ? N + 1 : N - 1;
    if (static_cast<int>(roots.size()) != expected) {
        throw NumericalError("solve_secular_real: found " + std::to_string(roots.size()) + " real roots for N = " +
                             std::to_string(N) + ", gamma_tilde = " + std::to_string(gamma_tilde) + ", expected " +
                             std::to_string(expected));
    }
    return roots;
}

/// log of cosh((N+2)x)/cosh(Nx) (odd N) or sinh((N+2)x)/sinh(Nx) (even N),
/// evaluated without overflow.
inline double broken_ratio_log(int N, double kappa) {
    const double a = (N + 2) * kappa, b = N * kappa;
    if (N % 2) return (a - b) + std::log1p(std::exp(-2 * a)) - std::log1p(std::exp(-2 * b));
    if (kappa < 1e-4) {
        // series: sinh(a)/sinh(b) = (a/b)(1 + (a^2 - b^2)/6 + ...)
        return std::log(static_cast<double>(N + 2) / N) + (a * a - b * b) / 6.0;
    }
    return (a - b) + std::log(-std::expm1(-2 * a)) - std::log(-std::expm1(-2 * b));
}

/// The pair k = pi/2 +- i kappa beyond the EP.
inline std::vector<SecularRoot> solve_secular_broken(int N, double gamma_tilde) {
    const double ep = exceptional_point(N);
    if (!(gamma_tilde > ep)) {
        throw DomainError("solve_secular_broken: gamma_tilde = " + std::to_string(gamma_tilde) +
                          " is not beyond the exceptional point " + std::to_string(ep));
    }
    const double target = 2.0 * std::log(gamma_tilde);
    // the ratio is bounded below by cosh(2 kappa), so kappa <= acosh(gt^2)/2
    double lo = 0.0;
    double hi = 0.5 * std::acosh(gamma_tilde * gamma_tilde) + 1.0;
    while (broken_ratio_log(N, hi) < target) hi *= 2;
    for (int it = 0; it < 300 && hi - lo > 1e-16 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (broken_ratio_log(N, mid) < target) lo = mid;
        else hi = mid;
    }
    const double kappa = 0.5 * (lo + hi);
    return {SecularRoot{cplx{kPi / 2, -kappa}, kappa, Phase::PTBrokenMinus, false},
            SecularRoot{cplx{kPi / 2, kappa}, kappa, Phase::PTBrokenPlus, false}};
}

/// kappa - ln(gamma_tilde) for a broken root, from the root itself and free
/// of cancellation: with x = exp(-2 kappa) the ratio is
/// exp(2 kappa) (1 -+ x^(N+2)) / (1 -+ x^N), upper signs for even N.
inline double broken_log_deviation(int N, double kappa) {
    const double x = std::exp(-2.0 * kappa);
    const double s = N % 2 ? 1.0 : -1.0;
    return 0.5 * (std::log1p(s * std::pow(x, N)) - std::log1p(s * std::pow(x, N + 2)));
}

/// All N+1 roots, ordered by (Re E, Im E).
inline std::vector<SecularRoot> solve_secular(int N, double gamma_tilde, const SecularOptions &opt = {}) {
    auto roots = solve_secular_real(N, gamma_tilde, opt);
    const double ep = exceptional_point(N);
    if (gamma_tilde > ep && std::abs(gamma_tilde - ep) >= opt.ep_window) {
        auto broken = solve_secular_broken(N, gamma_tilde);
        roots.insert(roots.end(), broken.begin(), broken.end());
    }
    std::sort(roots.begin(), roots.end(),
              [](const SecularRoot &a, const SecularRoot &b) { return complex_less(a.energy(), b.energy()); });
    return roots;
}

/// Numerical EP: smallest eigenvalue gap of the scaled uniform chain,
/// located by a 200-point scan of [lo, hi] and refined by golden section
/// between the neighbours of the best scan point. The gap closes like a
/// square root at the EP, so the scan cannot prefer an ordinary avoided
/// crossing over it once the bracket is resolved.
inline double exceptional_point_numeric(int N, double lo, double hi, double tol = 1e-9) {
    const auto gap = [N](double gt) {
        const auto vals = eigenvalues_of(eig_dense(ChainSpec::scaled_uniform(N, gt).matrix()));
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < vals.size(); ++i)
            for (std::size_t j = i + 1; j < vals.size(); ++j) best = std::min(best, std::abs(vals[i] - vals[j]));
        return best;
    };
    constexpr int scan = 200;
    int arg = 0;
    double fbest = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= scan; ++i) {
        const double f = gap(lo + (hi - lo) * i / scan);
        if (f < fbest) fbest = f, arg = i;
    }
    const double r = (std::sqrt(5.0) - 1) / 2;
    double a = lo + (hi - lo) * std::max(arg - 1, 0) / scan, b = lo + (hi - lo) * std::min(arg + 1, scan) / scan;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = gap(c), fd = gap(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = gap(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = gap(d);
        }
    }
    return 0.5 * (a + b);
}

// ---------------------------------------------------------------------------
// Closed-form eigenfunctions

struct ExtendedEigenfunction {
    CVector values;      ///< psi(0..N)
    SecularRoot root;
    bool normalized = false;
};

/// 2i sin(k(l+1)) + 2 gt sin(kl) for l = 0..N, any complex k, unnormalized.
inline CVector plane_wave_eigenfunction(int N, double gamma_tilde, cplx k) {
    CVector v(N + 1);
    for (int l = 0; l <= N; ++l) v(l) = 2.0 * kI * std::sin(k * double(l + 1)) + 2.0 * gamma_tilde * std::sin(k * double(l));
    return v;
}

/// Broken-phase branch for k = pi/2 + sign*i*kappa in the exponential form
///   i^{l+1} (e^{-s kappa} - gt) e^{-s kappa l} - (-i)^{l+1} (e^{s kappa} + gt) e^{s kappa l}.
inline CVector broken_eigenfunction_exponential(int N, double gamma_tilde, double kappa, int sign) {
    CVector v(N + 1);
    const double s = sign >= 0 ? 1.0 : -1.0;
    for (int l = 0; l <= N; ++l) {
        const cplx ip = std::pow(kI, l + 1), im = std::pow(-kI, l + 1);
        v(l) = ip * (std::exp(-s * kappa) - gamma_tilde) * std::exp(-s * kappa * l) -
               im * (std::exp(s * kappa) + gamma_tilde) * std::exp(s * kappa * l);
    }
    return v;
}

/// Same branch in the parity-split hyperbolic form:
///   even l:  2 i^{l+1} [cosh(kappa(l+1)) +- gt sinh(kappa l)]
///   odd l:   2 i^{l+1} [-+ sinh(kappa(l+1)) - gt cosh(kappa l)]
inline CVector broken_eigenfunction_hyperbolic(int N, double gamma_tilde, double kappa, int sign) {
    CVector v(N + 1);
    const double s = sign >= 0 ? 1.0 : -1.0;
    for (int l = 0; l <= N; ++l) {
        const cplx pre = 2.0 * std::pow(kI, l + 1);
        if (l % 2 == 0) v(l) = pre * (std::cosh(kappa * (l + 1)) + s * gamma_tilde * std::sinh(kappa * l));
        else v(l) = pre * (-s * std::sinh(kappa * (l + 1)) - gamma_tilde * std::cosh(kappa * l));
    }
    return v;
}

/// Parity reversal combined with complex conjugation.
inline CVector pt_transform(const CVector &v) {
    CVector w(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) w(i) = std::conj(v(v.size() - 1 - i));
    return w;
}

/// Unit-normalized closed-form eigenfunction of the scaled uniform chain.
/// Real k (including the zero mode and the EP) uses the closed
/// normalization 2N(1 + gt^2) + 4. The growing broken branch uses the
/// exponential form; the decaying branch is its PT image, which avoids the
/// cancellation the direct formula suffers when kappa*N is large.
inline ExtendedEigenfunction eigenfunction(const SecularRoot &root, int N, double gamma_tilde,
                                           double consistency_tol = 1e-8) {
    ExtendedEigenfunction f;
    f.root = root;
    if (root.phase == Phase::PTBrokenPlus || root.phase == Phase::PTBrokenMinus) {
        const CVector grow = broken_eigenfunction_exponential(N, gamma_tilde, root.kappa, +1);
        f.values = root.phase == Phase::PTBrokenPlus ? grow : pt_transform(grow);
        f.values.normalize();
    } else {
        if (std::abs(root.k.imag()) > 0) throw DomainError("eigenfunction: real-k root has an imaginary part");
        f.values = plane_wave_eigenfunction(N, gamma_tilde, root.k);
        f.values /= std::sqrt(2.0 * N * (1.0 + gamma_tilde * gamma_tilde) + 4.0);
    }
    f.normalized = true;

    const CMatrix h = ChainSpec::scaled_uniform(N, gamma_tilde).matrix();
    const double residual = (h * f.values - root.energy() * f.values).norm() / std::max(1.0, f.values.norm());
    const double tol = root.degenerate ? std::max(consistency_tol, 1e-6) : consistency_tol;
    if (!(residual <= tol)) {
        throw DomainError("eigenfunction: root does not solve the chain for N = " + std::to_string(N) +
                          ", gamma_tilde = " + std::to_string(gamma_tilde) + " (residual " +
                          std::to_string(residual) + ")");
    }
    return f;
}

/// Closed-form eigenfunction at the exceptional point (k = pi/2):
/// odd N: i/sqrt(N+1) sin(pi(l+1)/2) + 1/sqrt(N+1) sin(pi l/2);
/// even N: i/sqrt(N+2) sin(pi(l+1)/2) + 1/sqrt(N) sin(pi l/2).
inline CVector exceptional_point_eigenfunction(int N) {
    CVector v(N + 1);
    const double a = N % 2 ? 1.0 / std::sqrt(N + 1.0) : 1.0 / std::sqrt(N + 2.0);
    const double b = N % 2 ? 1.0 / std::sqrt(N + 1.0) : 1.0 / std::sqrt(static_cast<double>(N));
    for (int l = 0; l <= N; ++l) {
        // sin(pi m / 2) for integer m, exactly
        const auto s = [](int m) { return m % 2 == 0 ? 0.0 : ((m / 2) % 2 == 0 ? 1.0 : -1.0); };
        v(l) = kI * a * s(l + 1) + b * s(l);
    }
    return v;
}

// ---------------------------------------------------------------------------
// PT symmetry

struct PTReport {
    bool symmetric = false;   ///< P conj(M) P == M within tol
    double deviation = 0.0;   ///< max entrywise |P conj(M) P - M|
    std::vector<bool> unbroken; ///< per eigenpair, PT image parallel to itself
};

inline PTReport check_pt_symmetry(const CMatrix &m, double tol, const std::vector<EigenPair> *pairs = nullptr,
                                  double parallel_tol = 1e-8) {
    if (m.rows() != m.cols()) throw DomainError("check_pt_symmetry: matrix is not square");
    PTReport rep;
    const Eigen::Index n = m.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            rep.deviation = std::max(rep.deviation, std::abs(std::conj(m(n - 1 - i, n - 1 - j)) - m(i, j)));
    rep.symmetric = rep.deviation <= tol;
    if (pairs) {
        for (const auto &p : *pairs) {
            const CVector v = p.vector.normalized();
            rep.unbroken.push_back(std::abs(v.dot(pt_transform(v))) > 1.0 - parallel_tol);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Tree <-> chain

/// Spread a chain vector over the tree: every generation-l site gets
/// c(l) / sqrt(n_tot_l).
inline CVector lift_to_tree(const CVector &chain_vector, const TreeIndex &index) {
    if (chain_vector.size() != index.generations() + 1) throw DomainError("lift_to_tree: length must be N+1");
    CVector v(index.size());
    for (int l = 0; l <= index.generations(); ++l) {
        const std::int64_t begin = index.generation_offset(l), count = index.generation_size(l);
        const cplx a = chain_vector(l) / std::sqrt(static_cast<double>(count));
        for (std::int64_t s = 0; s < count; ++s) v(begin + s) = a;
    }
    return v;
}

/// Project a tree vector on the uniform generation states |(l)>.
inline CVector project_to_chain(const CVector &tree_vector, const TreeIndex &index) {
    CVector c = CVector::Zero(index.generations() + 1);
    for (int l = 0; l <= index.generations(); ++l) {
        const std::int64_t begin = index.generation_offset(l), count = index.generation_size(l);
        c(l) = tree_vector.segment(begin, count).sum() / std::sqrt(static_cast<double>(count));
    }
    return c;
}

/// The N+1 extended eigenpairs of the tree, from the dense chain oracle.
inline std::vector<EigenPair> extended_states(const TreeSpec &spec, const TreeIndex &index, const EigOptions &opt = {}) {
    const auto chain_pairs = eig_dense(effective_chain(spec).matrix(), opt);
    std::vector<EigenPair> out;
    out.reserve(chain_pairs.size());
    for (const auto &p : chain_pairs) out.push_back({p.value, lift_to_tree(p.vector, index), p.residual});
    return out;
}

/// gamma_tilde,k_re,k_im,E_re,E_im,phase
inline void write_secular_table(std::ostream &os, int N, const std::vector<double> &grid) {
    CsvWriter csv(os, {"gamma_tilde", "k_re", "k_im", "E_re", "E_im", "phase"});
    for (double gt : grid) {
        for (const auto &r : solve_secular(N, gt)) {
            const cplx e = r.energy();
            csv.row(gt, r.k.real(), r.k.imag(), e.real(), e.imag(), to_string(r.phase));
        }
    }
}

} // namespace bethe
