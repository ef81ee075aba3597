// Copyright 2026 The bethe-transport Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file spectral.hpp
 * @brief Dense non-Hermitian eigensolver oracle, spectrum checks,
 *        eigenvalue continuation along a parameter sweep and the projection
 *        (Feshbach) effective Hamiltonian.
 *
 * The eigensolver is Eigen's complex Schur decomposition followed by a few
 * steps of shifted inverse iteration on any pair whose residual exceeds the
 * tolerance. Eigenpairs are returned sorted by real part, then imaginary
 * part, with unit-norm right eigenvectors.
 */

#pragma once

#include "bethe/lattice.hpp"
#include "bethe/types.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace bethe {

struct EigenPair {
    cplx value;
    CVector vector; ///< right eigenvector, Euclidean norm 1
    double residual = 0.0; ///< ||H v - E v||
};

struct EigOptions {
    std::int64_t dense_cap = 3000;
    double residual_rel = 1e-9; ///< residual bound relative to ||H||_max * dim
    int refine_iterations = 3;
};

/// FNV-1a over the raw matrix bytes; used to identify a failing input.
inline std::uint64_t matrix_hash(const CMatrix &m) {
    std::uint64_t h = 1469598103934665603ULL;
    const auto *bytes = reinterpret_cast<const unsigned char *>(m.data());
    const std::size_t n = static_cast<std::size_t>(m.size()) * sizeof(cplx);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= bytes[i];
        h *= 1099511628211ULL;
    }
    return h;
}

inline double max_abs_entry(const CMatrix &m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline bool complex_less(const cplx &a, const cplx &b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

inline std::vector<EigenPair> eig_dense(const CMatrix &h, const EigOptions &opt = {}) {
    const Eigen::Index n = h.rows();
    if (h.cols() != n) throw DomainError("eig_dense: matrix is not square");
    if (n > opt.dense_cap) {
        throw SizeError("eig_dense: dimension " + std::to_string(n) + " above dense cap " +
                        std::to_string(opt.dense_cap));
    }
    std::vector<EigenPair> pairs;
    if (n == 0) return pairs;

    Eigen::ComplexEigenSolver<CMatrix> solver(h, true);
    if (solver.info() != Eigen::Success) {
        std::ostringstream os;
        os << "eig_dense: Schur iteration did not converge (matrix hash 0x" << std::hex
           << matrix_hash(h) << ")";
        throw NumericalError(os.str());
    }

    const double bound = opt.residual_rel * std::max(max_abs_entry(h), 1.0) * static_cast<double>(n);
    pairs.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        EigenPair p;
        p.value = solver.eigenvalues()(i);
        p.vector = solver.eigenvectors().col(i).normalized();
        p.residual = (h * p.vector - p.value * p.vector).norm();
        if (p.residual > bound) {
            // shifted inverse iteration; the tiny offset keeps the LU nonsingular
            const double scale = std::max(std::abs(p.value), 1.0);
            const cplx shift = p.value + cplx{1e-13 * scale, 1e-13 * scale};
            Eigen::PartialPivLU<CMatrix> lu(h - shift * CMatrix::Identity(n, n));
            CVector v = p.vector;
            for (int it = 0; it < opt.refine_iterations; ++it) {
                CVector w = lu.solve(v);
                const double wn = w.norm();
                if (!std::isfinite(wn) || wn == 0.0) break;
                v = w / wn;
                const double r = (h * v - p.value * v).norm();
                if (r < p.residual) {
                    p.vector = v;
                    p.residual = r;
                }
                if (p.residual <= bound) break;
            }
        }
        pairs.push_back(std::move(p));
    }
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const EigenPair &a, const EigenPair &b) { return complex_less(a.value, b.value); });
    return pairs;
}

inline std::vector<EigenPair> eig_dense(const SparseComplexMatrix &h, const EigOptions &opt = {}) {
    if (h.dimension() > opt.dense_cap) {
        throw SizeError("eig_dense: dimension " + std::to_string(h.dimension()) + " above dense cap " +
                        std::to_string(opt.dense_cap));
    }
    return eig_dense(h.to_dense(), opt);
}

inline std::vector<cplx> eigenvalues_of(const std::vector<EigenPair> &pairs) {
    std::vector<cplx> v;
    v.reserve(pairs.size());
    for (const auto &p : pairs) v.push_back(p.value);
    return v;
}

/// Index pairs (i, j) whose unit eigenvectors overlap by more than
/// 1 - threshold; at an exceptional point the decomposition is defective
/// and such pairs are reported instead of a Jordan form.
inline std::vector<std::pair<std::size_t, std::size_t>>
near_defective_pairs(const std::vector<EigenPair> &pairs, double threshold = 1e-6) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        for (std::size_t j = i + 1; j < pairs.size(); ++j) {
            if (std::abs(pairs[i].vector.dot(pairs[j].vector)) > 1.0 - threshold) out.emplace_back(i, j);
        }
    }
    return out;
}

struct SpectrumCheck {
    bool pass = true;
    double worst = 0.0;             ///< largest violation found
    std::vector<cplx> offending;    ///< eigenvalues that failed
};

/// Reflection symmetry about the imaginary axis: for every E there is an
/// E' in the spectrum with |E' + conj(E)| <= tol.
inline SpectrumCheck check_spectrum_symmetry(const std::vector<cplx> &values, double tol) {
    SpectrumCheck rep;
    for (const cplx &e : values) {
        const cplx mirror = -std::conj(e);
        double best = std::numeric_limits<double>::infinity();
        for (const cplx &f : values) best = std::min(best, std::abs(f - mirror));
        rep.worst = std::max(rep.worst, best);
        if (best > tol) {
            rep.pass = false;
            rep.offending.push_back(e);
        }
    }
    return rep;
}

inline SpectrumCheck check_spectrum_symmetry(const std::vector<EigenPair> &pairs, double tol) {
    return check_spectrum_symmetry(eigenvalues_of(pairs), tol);
}

/// Im E >= -tol for every eigenvalue.
inline SpectrumCheck check_im_nonneg(const std::vector<cplx> &values, double tol) {
    SpectrumCheck rep;
    for (const cplx &e : values) {
        if (e.imag() < -tol) {
            rep.pass = false;
            rep.offending.push_back(e);
        }
        rep.worst = std::max(rep.worst, -e.imag());
    }
    rep.worst = std::max(rep.worst, 0.0);
    return rep;
}

inline SpectrumCheck check_im_nonneg(const std::vector<EigenPair> &pairs, double tol) {
    return check_im_nonneg(eigenvalues_of(pairs), tol);
}

/// Minimum-cost perfect assignment (Kuhn-Munkres, O(n^3)).
/// cost is row-major n x n; returns assignment[row] = column.
inline std::vector<std::size_t> hungarian_assignment(const std::vector<double> &cost, std::size_t n) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> assignment(n);
    for (std::size_t j = 1; j <= n; ++j) assignment[p[j] - 1] = j - 1;
    return assignment;
}

struct MultisetMatch {
    std::vector<std::size_t> assignment; ///< a[i] matched to b[assignment[i]]
    double max_distance = 0.0;
    double total_distance = 0.0;
};

/// Bijective matching of two eigenvalue multisets by minimal total distance.
inline MultisetMatch match_multisets(const std::vector<cplx> &a, const std::vector<cplx> &b) {
    if (a.size() != b.size()) {
        throw DomainError("match_multisets: sizes differ (" + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
    }
    const std::size_t n = a.size();
    std::vector<double> cost(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = std::abs(a[i] - b[j]);
    MultisetMatch m;
    m.assignment = hungarian_assignment(cost, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = cost[i * n + m.assignment[i]];
        m.max_distance = std::max(m.max_distance, d);
        m.total_distance += d;
    }
    return m;
}

// ---------------------------------------------------------------------------
// Continuation along a parameter sweep

struct ContinuationOptions {
    EigOptions eig{};
    double cluster_tol = 1e-8;        ///< eigenvalues closer than this form a degenerate cluster
    double reliable_overlap = 0.5;    ///< below this a step is flagged unreliable
};

/// Eigenpairs along an ascending grid, reordered so that index b at every
/// grid point belongs to the same trajectory ("branch").
struct SpectrumTrace {
    std::vector<double> grid;
    std::vector<std::vector<EigenPair>> branches; ///< [step][branch]
    /// [step][branch] = index into the eigenvalue-sorted output of that step
    std::vector<std::vector<std::size_t>> matching;
    std::vector<bool> reliable;                   ///< per step; step 0 always true
    std::vector<double> min_overlap;              ///< per step; 1 at step 0

    std::size_t steps() const { return grid.size(); }
    std::size_t branch_count() const { return branches.empty() ? 0 : branches.front().size(); }
    cplx value(std::size_t step, std::size_t branch) const { return branches[step][branch].value; }
};

namespace detail {

/// overlap[i][j] between unit vectors prev[i] and next[j]. Inside a
/// degenerate cluster of next eigenvalues the overlap is the norm of the
/// projection onto the cluster subspace.
inline std::vector<std::vector<double>> trace_overlaps(const std::vector<EigenPair> &prev,
                                                       const std::vector<EigenPair> &next,
                                                       double cluster_tol) {
    const std::size_t n = next.size();
    std::vector<std::size_t> cluster(n);
    std::iota(cluster.begin(), cluster.end(), 0);
    const std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (cluster[x] != x) x = cluster[x] = cluster[cluster[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(next[i].value - next[j].value) <= cluster_tol) cluster[find(i)] = find(j);

    std::vector<std::vector<double>> ov(prev.size(), std::vector<double>(n, 0.0));
    std::vector<char> done(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
        if (done[j]) continue;
        std::vector<std::size_t> members;
        for (std::size_t k = 0; k < n; ++k)
            if (find(k) == find(j)) members.push_back(k);
        for (std::size_t k : members) done[k] = 1;
        if (members.size() == 1) {
            for (std::size_t i = 0; i < prev.size(); ++i) ov[i][j] = std::abs(prev[i].vector.dot(next[j].vector));
            continue;
        }
        CMatrix stack(next[j].vector.size(), static_cast<Eigen::Index>(members.size()));
        for (std::size_t c = 0; c < members.size(); ++c) stack.col(static_cast<Eigen::Index>(c)) = next[members[c]].vector;
        Eigen::HouseholderQR<CMatrix> qr(stack);
        const CMatrix basis = qr.householderQ() * CMatrix::Identity(stack.rows(), stack.cols());
        for (std::size_t i = 0; i < prev.size(); ++i) {
            const double proj = (basis.adjoint() * prev[i].vector).norm();
            for (std::size_t k : members) ov[i][k] = proj;
        }
    }
    return ov;
}

} // namespace detail

/// Greedy maximal-overlap assignment (largest overlap first, ties broken by
/// eigenvalue distance) followed by pairwise-swap improvement, so no single
/// transposition of the result increases the total overlap.
inline std::vector<std::size_t> match_by_overlap(const std::vector<EigenPair> &prev,
                                                 const std::vector<EigenPair> &next, double cluster_tol,
                                                 std::vector<double> *matched_overlap = nullptr) {
    const std::size_t n = prev.size();
    if (next.size() != n) throw DomainError("continue_spectrum: dimension changed along the grid");
    const auto ov = detail::trace_overlaps(prev, next, cluster_tol);
    struct Cand {
        double overlap;
        double dist;
        std::size_t i, j;
    };
    std::vector<Cand> cands;
    cands.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) cands.push_back({ov[i][j], std::abs(prev[i].value - next[j].value), i, j});
    std::sort(cands.begin(), cands.end(), [](const Cand &a, const Cand &b) {
        if (a.overlap != b.overlap) return a.overlap > b.overlap;
        if (a.dist != b.dist) return a.dist < b.dist;
        return std::tie(a.i, a.j) < std::tie(b.i, b.j);
    });
    const std::size_t none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> sigma(n, none);
    std::vector<char> taken(n, 0);
    std::size_t assigned = 0;
    for (const auto &c : cands) {
        if (assigned == n) break;
        if (sigma[c.i] != none || taken[c.j]) continue;
        sigma[c.i] = c.j;
        taken[c.j] = 1;
        ++assigned;
    }
    bool improved = true;
    for (int sweep = 0; improved && sweep < 100; ++sweep) {
        improved = false;
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                const double now = ov[a][sigma[a]] + ov[b][sigma[b]];
                const double swapped = ov[a][sigma[b]] + ov[b][sigma[a]];
                if (swapped > now + 1e-12) {
                    std::swap(sigma[a], sigma[b]);
                    improved = true;
                }
            }
        }
    }
    if (matched_overlap) {
        matched_overlap->resize(n);
        for (std::size_t i = 0; i < n; ++i) (*matched_overlap)[i] = ov[i][sigma[i]];
    }
    return sigma;
}

using MatrixBuilder = std::function<CMatrix(double)>;

inline SpectrumTrace continue_spectrum(const MatrixBuilder &builder, const std::vector<double> &grid,
                                       const ContinuationOptions &opt = {}) {
    if (!std::is_sorted(grid.begin(), grid.end())) throw DomainError("continue_spectrum: grid must be ascending");
    SpectrumTrace trace;
    trace.grid = grid;
    for (std::size_t s = 0; s < grid.size(); ++s) {
        auto pairs = eig_dense(builder(grid[s]), opt.eig);
        if (s == 0) {
            std::vector<std::size_t> id(pairs.size());
            std::iota(id.begin(), id.end(), 0);
            trace.matching.push_back(id);
            trace.branches.push_back(std::move(pairs));
            trace.reliable.push_back(true);
            trace.min_overlap.push_back(1.0);
            continue;
        }
        std::vector<double> overlaps;
        const auto sigma = match_by_overlap(trace.branches.back(), pairs, opt.cluster_tol, &overlaps);
        std::vector<EigenPair> ordered;
        ordered.reserve(pairs.size());
        for (std::size_t b = 0; b < sigma.size(); ++b) ordered.push_back(pairs[sigma[b]]);
        const double worst = overlaps.empty() ? 1.0 : *std::min_element(overlaps.begin(), overlaps.end());
        trace.matching.push_back(sigma);
        trace.branches.push_back(std::move(ordered));
        trace.reliable.push_back(worst >= opt.reliable_overlap);
        trace.min_overlap.push_back(worst);
    }
    return trace;
}

// ---------------------------------------------------------------------------
// Projection onto a site subset and the energy-dependent effective Hamiltonian

/// Diagonal 0/1 projector P (mask true = inside) and its complement Q.
struct ProjectionPair {
    std::vector<bool> mask;

    explicit ProjectionPair(std::vector<bool> inside) : mask(std::move(inside)) {}

    Eigen::Index dimension() const { return static_cast<Eigen::Index>(mask.size()); }
    std::vector<Eigen::Index> p_indices() const { return indices(true); }
    std::vector<Eigen::Index> q_indices() const { return indices(false); }

    CMatrix P() const {
        CMatrix m = CMatrix::Zero(dimension(), dimension());
        for (Eigen::Index i : p_indices()) m(i, i) = 1.0;
        return m;
    }
    CMatrix Q() const { return CMatrix::Identity(dimension(), dimension()) - P(); }

  private:
    std::vector<Eigen::Index> indices(bool inside) const {
        std::vector<Eigen::Index> out;
        for (std::size_t i = 0; i < mask.size(); ++i)
            if (mask[i] == inside) out.push_back(static_cast<Eigen::Index>(i));
        return out;
    }
};

inline CMatrix submatrix(const CMatrix &m, const std::vector<Eigen::Index> &rows,
                         const std::vector<Eigen::Index> &cols) {
    CMatrix s(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
            s(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(rows[r], cols[c]);
    return s;
}

/// H_eff(E) = PHP + PHQ (E - QHQ)^{-1} QHP restricted to the P subspace.
/// Throws NumericalError when E lies within min_distance of a QHQ eigenvalue.
inline CMatrix effective_hamiltonian_projection(const CMatrix &h, const ProjectionPair &proj, cplx energy,
                                                double min_distance = 1e-10) {
    if (h.rows() != proj.dimension() || h.cols() != proj.dimension()) {
        throw DomainError("effective_hamiltonian_projection: projector dimension mismatch");
    }
    const auto p = proj.p_indices();
    const auto q = proj.q_indices();
    const CMatrix hpp = submatrix(h, p, p);
    if (q.empty()) return hpp;
    const CMatrix hqq = submatrix(h, q, q);
    Eigen::ComplexEigenSolver<CMatrix> qs(hqq, false);
    double nearest = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < qs.eigenvalues().size(); ++i)
        nearest = std::min(nearest, std::abs(energy - qs.eigenvalues()(i)));
    if (nearest <= min_distance) {
        std::ostringstream os;
        os << "effective_hamiltonian_projection: E - QHQ is near-singular (distance " << std::setprecision(3)
           << nearest << " to the nearest QHQ eigenvalue)";
        throw NumericalError(os.str());
    }
    const CMatrix resolvent_q =
        (energy * CMatrix::Identity(hqq.rows(), hqq.cols()) - hqq).partialPivLu().inverse();
    return hpp + submatrix(h, p, q) * resolvent_q * submatrix(h, q, p);
}

/// P (E - H)^{-1} P restricted to the P subspace.
inline CMatrix projected_resolvent(const CMatrix &h, const ProjectionPair &proj, cplx energy) {
    const CMatrix full = (energy * CMatrix::Identity(h.rows(), h.cols()) - h).partialPivLu().inverse();
    const auto p = proj.p_indices();
    return submatrix(full, p, p);
}

} // namespace bethe
