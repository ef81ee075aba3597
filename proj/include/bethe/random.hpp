// Copyright 2026 The bethe-transport Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file random.hpp
 * @brief Chains with box-distributed branching factors: exceptional point,
 *        zero crossing and current maximum per sample, and ensemble
 *        statistics.
 *
 * Sample streams: seed = splitmix64(master_seed ^ splitmix64(sample_id)),
 * fed to std::mt19937_64. Each sample draws u_l uniform on [-1, 1] and sets
 * Delta_l = delta * u_l, so samples with the same id share their draws
 * across delta values. The scaled hoppings are sqrt(1 + Delta_l).
 *
 * With `antithetic` set, sample 2k+1 reuses the draws of sample 2k with the
 * sign flipped. Each sample is still box distributed, but terms odd in Delta
 * cancel pairwise in ensemble means, which removes the dominant sampling
 * noise of the mean near delta = 0.
 *
 * An eigenvalue is counted as lying on the imaginary axis when its mirror
 * image -conj(E) is closer to E itself than to any other eigenvalue. The
 * exceptional point is the first grid interval where that count grows by
 * two, refined by bisection.
 */

#pragma once

#include "bethe/chain.hpp"
#include "bethe/csv.hpp"
#include "bethe/spectral.hpp"
#include "bethe/transport.hpp"
#include "bethe/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace bethe {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t sample_seed(std::uint64_t master_seed, std::uint64_t sample_id) {
    return splitmix64(master_seed ^ splitmix64(sample_id));
}

inline std::vector<double> uniform_grid(double lo, double hi, double step) {
    if (!(step > 0) || !(hi >= lo)) throw DomainError("uniform_grid: need step > 0 and hi >= lo");
    const auto n = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9));
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(n + 1));
    for (std::int64_t i = 0; i <= n; ++i) g.push_back(lo + step * static_cast<double>(i));
    return g;
}

struct RandomChainSpec {
    double n_base = 2.0;
    double delta = 0.1;
    int N = 9;
    std::uint64_t master_seed = 20260101;
    std::vector<double> grid = uniform_grid(0.5, 2.0, 5e-3);
    bool antithetic = false;

    void validate() const {
        if (!(n_base > 0)) throw ConfigError("random: n_base must be positive");
        if (!(delta >= 0 && delta < 1)) throw ConfigError("random: delta must lie in [0, 1)");
        if (N < 1) throw ConfigError("random: N must be >= 1");
        if (grid.size() < 3) throw ConfigError("random: grid needs at least three points");
        if (!std::is_sorted(grid.begin(), grid.end())) throw ConfigError("random: grid must be increasing");
    }
};

/// Relative branching deviations u_l in [-1, 1], l = 1..N.
inline std::vector<double> sample_unit_deviations(std::uint64_t master_seed, std::uint64_t sample_id, int N) {
    std::mt19937_64 rng(sample_seed(master_seed, sample_id));
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> u(static_cast<std::size_t>(N));
    for (auto &x : u) x = dist(rng);
    return u;
}

/// Scaled chain with hoppings sqrt(n_l / n) = sqrt(1 + Delta_l); gamma0 and
/// gammaN are left at zero and set per grid point.
inline ChainSpec sample_chain(const RandomChainSpec &spec, std::uint64_t sample_id) {
    const bool mirrored = spec.antithetic && (sample_id & 1U);
    const auto u = sample_unit_deviations(spec.master_seed, spec.antithetic ? sample_id & ~std::uint64_t{1} : sample_id,
                                          spec.N);
    ChainSpec c;
    c.N = spec.N;
    for (double x : u) c.hoppings.push_back(std::sqrt(1.0 + spec.delta * (mirrored ? -x : x)));
    return c;
}

/// Eigenvalues only, sorted by (Re, Im). Used inside the sweeps.
inline std::vector<cplx> chain_eigenvalues(const ChainSpec &chain, double gamma_tilde) {
    const CMatrix h = chain.with_gamma(gamma_tilde).matrix();
    Eigen::ComplexEigenSolver<CMatrix> solver(h, false);
    if (solver.info() != Eigen::Success) throw NumericalError("chain_eigenvalues: eigensolver failed");
    std::vector<cplx> v(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(v.begin(), v.end(), complex_less);
    return v;
}

/// Flags for eigenvalues on the imaginary axis (mirror-partner test).
inline std::vector<bool> on_imaginary_axis(const std::vector<cplx> &values) {
    std::vector<bool> on(values.size(), false);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const cplx mirror = -std::conj(values[i]);
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < values.size(); ++j)
            if (j != i) nearest = std::min(nearest, std::abs(mirror - values[j]));
        on[i] = 2.0 * std::abs(values[i].real()) < nearest;
    }
    return on;
}

inline int imaginary_axis_count(const std::vector<cplx> &values) {
    const auto on = on_imaginary_axis(values);
    return static_cast<int>(std::count(on.begin(), on.end(), true));
}

struct ExceptionalPointResult {
    double gamma_ep = 0.0;
    cplx energy;          ///< midpoint of the coalescing pair
    double pair_gap = 0.0; ///< |E_1 - E_2| just below gamma_ep
};

struct EPSearchOptions {
    double width_tol = 1e-12;
    double gap_tol = 1e-7;
};

/// Off-axis mirror pair closest to the imaginary axis.
inline std::pair<cplx, cplx> closest_mirror_pair(const std::vector<cplx> &values) {
    const auto on = on_imaginary_axis(values);
    std::size_t best = values.size();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (on[i] || values[i].real() < 0) continue;
        if (best == values.size() || values[i].real() < values[best].real()) best = i;
    }
    if (best == values.size()) throw NumericalError("closest_mirror_pair: no off-axis eigenvalue");
    const cplx e = values[best];
    const cplx mirror = -std::conj(e);
    const auto partner = *std::min_element(values.begin(), values.end(), [&](const cplx &a, const cplx &b) {
        return std::abs(a - mirror) < std::abs(b - mirror);
    });
    return {e, partner};
}

/// Coalescence on the imaginary axis inside [lo, hi] (scanned with the given
/// grid restricted to the bracket).
inline ExceptionalPointResult find_exceptional_point(const ChainSpec &chain, double lo, double hi,
                                                     const std::vector<double> &grid,
                                                     const EPSearchOptions &opt = {}) {
    std::vector<double> pts;
    pts.push_back(lo);
    for (double g : grid)
        if (g > lo && g < hi) pts.push_back(g);
    pts.push_back(hi);

    int prev = imaginary_axis_count(chain_eigenvalues(chain, pts.front()));
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const int cur = imaginary_axis_count(chain_eigenvalues(chain, pts[i]));
        if (cur >= prev + 2) {
            double a = pts[i - 1], b = pts[i];
            auto below = closest_mirror_pair(chain_eigenvalues(chain, a));
            while (b - a > opt.width_tol && std::abs(below.first - below.second) > opt.gap_tol) {
                const double mid = 0.5 * (a + b);
                const auto vals = chain_eigenvalues(chain, mid);
                if (imaginary_axis_count(vals) >= prev + 2) {
                    b = mid;
                } else {
                    a = mid;
                    below = closest_mirror_pair(vals);
                }
            }
            ExceptionalPointResult r;
            // a pair already closer than gap_tol sits within ~gap^2 of the EP
            r.gamma_ep = std::abs(below.first - below.second) <= opt.gap_tol ? a : 0.5 * (a + b);
            r.energy = 0.5 * (below.first + below.second);
            r.pair_gap = std::abs(below.first - below.second);
            return r;
        }
        prev = cur;
    }
    throw NumericalError("find_exceptional_point: no coalescence in bracket [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
}

/// Real determinant of the chain at gamma (continuant recursion); it is
/// a polynomial in gamma^2 for gamma0 = gammaN = gamma.
inline double chain_determinant(const ChainSpec &chain, double gamma) {
    const CMatrix h = chain.with_gamma(gamma).matrix();
    cplx d_prev = 1.0, d = h(0, 0);
    for (int i = 1; i <= chain.N; ++i) {
        const cplx t = h(i, i - 1);
        const cplx next = h(i, i) * d - t * t * d_prev;
        d_prev = d;
        d = next;
    }
    return d.real();
}

/// gamma where an eigenvalue passes E = 0 (odd N only). Bisection on the
/// determinant over the first sign change in the grid restricted to
/// [lo, hi].
inline std::optional<double> find_zero_crossing(const ChainSpec &chain, double lo, double hi,
                                                const std::vector<double> &grid, double tol = 1e-13) {
    if (chain.N % 2 == 0) return std::nullopt;
    std::vector<double> pts{lo};
    for (double g : grid)
        if (g > lo && g < hi) pts.push_back(g);
    pts.push_back(hi);
    double d_prev = chain_determinant(chain, pts.front());
    if (d_prev == 0.0) return pts.front();
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double d = chain_determinant(chain, pts[i]);
        if (d == 0.0) return pts[i];
        if (std::signbit(d) != std::signbit(d_prev)) {
            double a = pts[i - 1], b = pts[i], da = d_prev;
            while (b - a > tol) {
                const double mid = 0.5 * (a + b);
                const double dm = chain_determinant(chain, mid);
                if (dm == 0.0) return mid;
                if (std::signbit(dm) == std::signbit(da)) {
                    a = mid;
                    da = dm;
                } else {
                    b = mid;
                }
            }
            return 0.5 * (a + b);
        }
        d_prev = d;
    }
    return std::nullopt;
}

/// gamma_zero^2 = prod_{l odd} t_l^2 / prod_{l even} t_l^2 for odd N.
inline std::optional<double> zero_crossing_closed_form(const ChainSpec &chain) {
    if (chain.N % 2 == 0) return std::nullopt;
    double num = 1.0, den = 1.0;
    for (int l = 1; l <= chain.N; ++l) {
        const double t2 = chain.hoppings[static_cast<std::size_t>(l - 1)] * chain.hoppings[static_cast<std::size_t>(l - 1)];
        (l % 2 ? num : den) *= t2;
    }
    return std::sqrt(num / den);
}

struct MaxCurrentResult {
    double gamma = 0.0;
    double current = 0.0;
    int state_id = -1; ///< index in the (Re, Im)-sorted spectrum
};

/// Largest average current over all unit right eigenvectors at gamma.
inline MaxCurrentResult max_current_at(const ChainSpec &chain, double gamma,
                                       CurrentWeighting weighting = CurrentWeighting::Unweighted) {
    const CMatrix h = chain.with_gamma(gamma).matrix();
    Eigen::ComplexEigenSolver<CMatrix> solver(h, true);
    if (solver.info() != Eigen::Success) throw NumericalError("max_current_at: eigensolver failed");
    const auto &vals = solver.eigenvalues();
    std::vector<int> order(static_cast<std::size_t>(vals.size()));
    for (int i = 0; i < vals.size(); ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return complex_less(vals(a), vals(b)); });
    MaxCurrentResult r;
    r.gamma = gamma;
    r.current = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < order.size(); ++s) {
        const CVector v = solver.eigenvectors().col(order[s]).normalized();
        const double j = current_profile(v, static_cast<int>(s), weighting, chain.hoppings).average;
        if (j > r.current) {
            r.current = j;
            r.state_id = static_cast<int>(s);
        }
    }
    return r;
}

/// Coarse argmax on the grid followed by golden-section refinement between
/// the neighbouring grid points.
inline MaxCurrentResult find_max_current(const ChainSpec &chain, const std::vector<double> &grid, double tol = 1e-6,
                                         CurrentWeighting weighting = CurrentWeighting::Unweighted) {
    if (grid.size() < 3) throw DomainError("find_max_current: grid needs at least three points");
    std::size_t best = 0;
    MaxCurrentResult best_r;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto r = max_current_at(chain, grid[i], weighting);
        if (i == 0 || r.current > best_r.current) {
            best = i;
            best_r = r;
        }
    }
    double a = grid[best == 0 ? 0 : best - 1];
    double b = grid[std::min(best + 1, grid.size() - 1)];
    const double g = (std::sqrt(5.0) - 1) / 2;
    double c = b - g * (b - a), d = a + g * (b - a);
    auto fc = max_current_at(chain, c, weighting), fd = max_current_at(chain, d, weighting);
    while (b - a > tol) {
        if (fc.current > fd.current) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = max_current_at(chain, c, weighting);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = max_current_at(chain, d, weighting);
        }
    }
    for (const auto &r : {fc, fd})
        if (r.current > best_r.current) best_r = r;
    return best_r;
}

// ---------------------------------------------------------------------------
// Samples and ensembles

struct SampleSummary {
    std::uint64_t sample_id = 0;
    double delta = 0.0;
    bool ok = false;
    std::string error;
    double gamma_ep = 0.0;
    double ep_energy_im = 0.0;
    int ep_side = 0; ///< sign of Im E at the coalescence
    std::optional<double> gamma_zero;
    double gamma_maxJ = 0.0;
    double maxJ = 0.0;
    int maxJ_state = -1;
};

inline SampleSummary analyze_sample(const RandomChainSpec &spec, std::uint64_t sample_id) {
    SampleSummary s;
    s.sample_id = sample_id;
    s.delta = spec.delta;
    try {
        const ChainSpec chain = sample_chain(spec, sample_id);
        const auto ep = find_exceptional_point(chain, spec.grid.front(), spec.grid.back(), spec.grid);
        s.gamma_ep = ep.gamma_ep;
        s.ep_energy_im = ep.energy.imag();
        s.ep_side = ep.energy.imag() > 0 ? 1 : (ep.energy.imag() < 0 ? -1 : 0);
        s.gamma_zero = find_zero_crossing(chain, spec.grid.front(), spec.grid.back(), spec.grid);
        const auto mj = find_max_current(chain, spec.grid);
        s.gamma_maxJ = mj.gamma;
        s.maxJ = mj.current;
        s.maxJ_state = mj.state_id;
        s.ok = true;
    } catch (const Error &e) {
        s.ok = false;
        s.error = e.what();
    }
    return s;
}

/// Samples 0..count-1, computed on `threads` workers; the result is indexed
/// by sample id and does not depend on the worker count.
inline std::vector<SampleSummary> run_samples(const RandomChainSpec &spec, std::size_t count, unsigned threads = 1) {
    spec.validate();
    std::vector<SampleSummary> out(count);
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) out[i] = analyze_sample(spec, i);
    };
    if (threads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
        for (auto &t : pool) t.join();
    }
    return out;
}

struct MeanStd {
    double mean = 0.0;
    double std = 0.0; ///< sample spread (n-1), not an error of the mean
    std::size_t count = 0;
};

inline MeanStd mean_std(const std::vector<double> &x) {
    MeanStd m;
    m.count = x.size();
    if (x.empty()) return m;
    double s = 0.0;
    for (double v : x) s += v;
    m.mean = s / static_cast<double>(x.size());
    if (x.size() > 1) {
        double q = 0.0;
        for (double v : x) q += (v - m.mean) * (v - m.mean);
        m.std = std::sqrt(q / static_cast<double>(x.size() - 1));
    }
    return m;
}

struct EnsembleStats {
    double delta = 0.0;
    std::size_t samples = 0;
    std::size_t excluded = 0;
    MeanStd gamma_ep, gamma_zero, gamma_maxJ;
};

inline EnsembleStats summarize(double delta, const std::vector<SampleSummary> &samples) {
    EnsembleStats st;
    st.delta = delta;
    st.samples = samples.size();
    std::vector<double> ep, zero, mj;
    for (const auto &s : samples) {
        if (!s.ok) {
            ++st.excluded;
            continue;
        }
        ep.push_back(s.gamma_ep);
        if (s.gamma_zero) zero.push_back(*s.gamma_zero);
        mj.push_back(s.gamma_maxJ);
    }
    st.gamma_ep = mean_std(ep);
    st.gamma_zero = mean_std(zero);
    st.gamma_maxJ = mean_std(mj);
    return st;
}

/// One EnsembleStats per delta; the per-sample rows are appended to
/// `all_samples` when given.
inline std::vector<EnsembleStats> ensemble_landmarks(RandomChainSpec spec, std::size_t count,
                                                     const std::vector<double> &delta_grid, unsigned threads = 1,
                                                     std::vector<SampleSummary> *all_samples = nullptr) {
    if (count < 2) throw DomainError("ensemble_landmarks: need at least two samples");
    std::vector<EnsembleStats> out;
    for (double d : delta_grid) {
        spec.delta = d;
        const auto samples = run_samples(spec, count, threads);
        out.push_back(summarize(d, samples));
        if (all_samples) all_samples->insert(all_samples->end(), samples.begin(), samples.end());
    }
    return out;
}

/// sample_id,delta,ok,gamma_ep,E_ep_im,ep_side,gamma_zero,gamma_maxJ,maxJ,maxJ_state
inline void write_sample_table(std::ostream &os, const std::vector<SampleSummary> &samples) {
    CsvWriter csv(os, {"sample_id", "delta", "ok", "gamma_ep", "E_ep_im", "ep_side", "gamma_zero", "gamma_maxJ",
                       "maxJ", "maxJ_state"});
    for (const auto &s : samples) {
        if (s.ok) {
            csv.row(static_cast<std::int64_t>(s.sample_id), s.delta, true, std::optional<double>(s.gamma_ep),
                    std::optional<double>(s.ep_energy_im), s.ep_side, s.gamma_zero,
                    std::optional<double>(s.gamma_maxJ), std::optional<double>(s.maxJ), s.maxJ_state);
        } else {
            const std::optional<double> none;
            csv.row(static_cast<std::int64_t>(s.sample_id), s.delta, false, none, none, 0, none, none, none, -1);
        }
    }
}

/// delta,samples,excluded,gamma_ep_mean,gamma_ep_std,gamma_zero_mean,gamma_zero_std,gamma_maxJ_mean,gamma_maxJ_std
inline void write_ensemble_table(std::ostream &os, const std::vector<EnsembleStats> &stats) {
    CsvWriter csv(os, {"delta", "samples", "excluded", "gamma_ep_mean", "gamma_ep_std", "gamma_zero_mean",
                       "gamma_zero_std", "gamma_maxJ_mean", "gamma_maxJ_std"});
    for (const auto &s : stats) {
        const auto opt = [](const MeanStd &m, double v) { return m.count ? std::optional<double>(v) : std::nullopt; };
        csv.row(s.delta, static_cast<std::int64_t>(s.samples), static_cast<std::int64_t>(s.excluded),
                opt(s.gamma_ep, s.gamma_ep.mean), opt(s.gamma_ep, s.gamma_ep.std),
                opt(s.gamma_zero, s.gamma_zero.mean), opt(s.gamma_zero, s.gamma_zero.std),
                opt(s.gamma_maxJ, s.gamma_maxJ.mean), opt(s.gamma_maxJ, s.gamma_maxJ.std));
    }
}

} // namespace bethe
