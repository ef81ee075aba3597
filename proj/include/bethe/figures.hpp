// Copyright 2026 The bethe-transport Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file figures.hpp
 * @brief Data generators for fig4 .. fig16: one CSV table, one or more SVG
 *        previews and a legend describing the colour conventions.
 *
 * Colours: blue = real part, red = imaginary part for spectra and wave
 * numbers; blue/orange/green = exceptional point / zero crossing / current
 * maximum for the ensemble figures.
 */

#pragma once

#include "bethe/chain.hpp"
#include "bethe/csv.hpp"
#include "bethe/localized.hpp"
#include "bethe/random.hpp"
#include "bethe/svg.hpp"
#include "bethe/transport.hpp"
#include "bethe/types.hpp"

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace bethe {

struct FigureOptions {
    std::uint64_t seed = 20260101;
    unsigned threads = 1;
    std::size_t samples = 100;   ///< per delta, ensemble figures only
    std::uint64_t sample_id = 0; ///< single-sample figures
};

struct FigureData {
    std::string name;
    std::string csv;
    std::vector<svg::Plot> plots;
    nlohmann::json legend;
};

namespace figures {

inline std::vector<std::string> names() {
    return {"fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11", "fig12", "fig13", "fig14", "fig15", "fig16"};
}

inline nlohmann::json spectrum_legend() {
    return {{"blue", "real part"}, {"red", "imaginary part"}, {"marker", "one point per eigenvalue or root"}};
}

inline svg::Series markers(std::string label, const char *color) {
    svg::Series s;
    s.label = std::move(label);
    s.color = color;
    s.line = false;
    s.markers = true;
    return s;
}

/// Eigenvalues of the three-site branch block vs gammaN for n_{N-1} = n_N = n.
inline FigureData fig4() {
    FigureData f{"fig4", {}, {}, spectrum_legend()};
    std::ostringstream os;
    CsvWriter csv(os, {"n", "gammaN", "branch", "E_re", "E_im"});
    for (int n : {2, 5, 8, 11}) {
        svg::Plot p{"three-site branch block, n = " + std::to_string(n), "gamma_N", "E", {}};
        auto re = markers("Re E", svg::kBlue), im = markers("Im E", svg::kRed);
        for (int i = 0; i <= 200; ++i) {
            const double g = 0.05 * i;
            const BranchSubHamiltonian b{1, {std::sqrt(double(n)), std::sqrt(double(n))}, g};
            const auto vals = eigenvalues_of(eig_dense(b.matrix()));
            for (std::size_t k = 0; k < vals.size(); ++k) {
                csv.row(n, g, static_cast<std::int64_t>(k), vals[k].real(), vals[k].imag());
                re.x.push_back(g);
                re.y.push_back(vals[k].real());
                im.x.push_back(g);
                im.y.push_back(vals[k].imag());
            }
        }
        p.series = {re, im};
        f.plots.push_back(p);
    }
    f.csv = os.str();
    return f;
}

/// f(k) = -sin((N+2)k)/sin(Nk) on (0, pi), clipped at |f| <= 20.
inline FigureData fig5() {
    FigureData f{"fig5", {}, {}, {{"blue", "f(k)"}, {"clip", "|f| > 20 omitted near the poles"}}};
    std::ostringstream os;
    CsvWriter csv(os, {"N", "k", "f"});
    for (int N = 1; N <= 6; ++N) {
        svg::Plot p{"secular function, N = " + std::to_string(N), "k", "f(k)", {}};
        auto s = markers("", svg::kBlue);
        for (int i = 1; i < 1200; ++i) {
            const double k = kPi * i / 1200.0;
            const double v = secular_f(N, k);
            if (!std::isfinite(v) || std::abs(v) > 20) continue;
            csv.row(N, k, v);
            s.x.push_back(k);
            s.y.push_back(v);
        }
        p.series = {s};
        f.plots.push_back(p);
    }
    f.csv = os.str();
    return f;
}

inline std::vector<double> gamma_grid_avoiding_ep(int N, double lo, double hi, double step) {
    std::vector<double> g;
    for (double x : uniform_grid(lo, hi, step))
        if (std::abs(x - exceptional_point(N)) > 1e-6) g.push_back(x);
    return g;
}

/// Secular roots (fig6: wave numbers, fig7: energies) for N = 1..6.
inline FigureData secular_figure(const std::string &name, bool energies) {
    FigureData f{name, {}, {}, spectrum_legend()};
    f.legend["note"] = "imaginary parts are stored unshifted";
    std::ostringstream os;
    CsvWriter csv(os, {"N", "gamma_tilde", "k_re", "k_im", "E_re", "E_im", "phase"});
    for (int N = 1; N <= 6; ++N) {
        svg::Plot p{(energies ? "scaled energies, N = " : "wave numbers, N = ") + std::to_string(N), "gamma_tilde",
                    energies ? "E" : "k", {}};
        auto re = markers(energies ? "Re E" : "Re k", svg::kBlue), im = markers(energies ? "Im E" : "Im k", svg::kRed);
        for (double gt : gamma_grid_avoiding_ep(N, 0.0, 3.0, 0.01)) {
            for (const auto &r : solve_secular(N, gt)) {
                const cplx e = r.energy();
                csv.row(N, gt, r.k.real(), r.k.imag(), e.real(), e.imag(), to_string(r.phase));
                const cplx v = energies ? e : r.k;
                re.x.push_back(gt);
                re.y.push_back(v.real());
                im.x.push_back(gt);
                im.y.push_back(v.imag());
            }
        }
        p.series = {re, im};
        f.plots.push_back(p);
    }
    f.csv = os.str();
    return f;
}

/// Indices of the two roots with the smallest |E| away from the zero mode.
inline std::vector<std::size_t> coalescing_pair(const std::vector<SecularRoot> &roots) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < roots.size(); ++i)
        if (roots[i].phase != Phase::ZeroMode) idx.push_back(i);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(roots[a].energy()) < std::abs(roots[b].energy());
    });
    if (idx.size() > 2) idx.resize(2);
    return idx;
}

/// N = 9 eigenfunctions at gamma_tilde = 0.8 .. 1.2.
inline FigureData fig8() {
    const int N = 9;
    FigureData f{"fig8", {}, {}, {{"blue", "|psi(l)| of all states"}, {"red", "the pair that coalesces at gamma_tilde = 1"}}};
    std::ostringstream os;
    CsvWriter csv(os, {"gamma_tilde", "state_id", "phase", "coalescing", "l", "psi_re", "psi_im", "psi_abs"});
    for (double gt : {0.8, 0.9, 1.0, 1.1, 1.2}) {
        const auto roots = solve_secular(N, gt);
        const auto pair = coalescing_pair(roots);
        svg::Plot p{"eigenfunctions, N = 9, gamma_tilde = " + svg::detail::num(gt), "l", "|psi(l)|", {}};
        svg::Plot lp{"coalescing pair (log), N = 9, gamma_tilde = " + svg::detail::num(gt), "l", "ln |psi(l)|", {}};
        for (std::size_t s = 0; s < roots.size(); ++s) {
            const bool special = std::find(pair.begin(), pair.end(), s) != pair.end();
            const auto fn = eigenfunction(roots[s], N, gt);
            svg::Series line;
            line.color = special ? svg::kRed : svg::kBlue;
            line.markers = true;
            svg::Series logline = line;
            for (int l = 0; l <= N; ++l) {
                const cplx v = fn.values(l);
                csv.row(gt, static_cast<std::int64_t>(s), to_string(roots[s].phase), special, l, v.real(), v.imag(),
                        std::abs(v));
                line.x.push_back(l);
                line.y.push_back(std::abs(v));
                logline.x.push_back(l);
                logline.y.push_back(std::log(std::max(std::abs(v), 1e-300)));
            }
            p.series.push_back(line);
            if (special) lp.series.push_back(logline);
        }
        f.plots.push_back(p);
        f.plots.push_back(lp);
    }
    f.csv = os.str();
    return f;
}

/// Average current of every extended state, N = 1..6.
inline FigureData fig9() {
    FigureData f{"fig9", {}, {}, {{"blue", "PT-unbroken or zero mode"}, {"red", "PT-broken"}}};
    std::ostringstream os;
    CsvWriter csv(os, {"N", "gamma_tilde", "state_id", "phase", "J_av"});
    for (int N = 1; N <= 6; ++N) {
        svg::Plot p{"average current, N = " + std::to_string(N), "gamma_tilde", "J_av", {}};
        auto ub = markers("unbroken", svg::kBlue), br = markers("broken", svg::kRed);
        for (const auto &s : current_sweep(N, gamma_grid_avoiding_ep(N, 0.01, 3.0, 0.01))) {
            csv.row(N, s.gamma_tilde, s.state_id, to_string(s.phase), s.profile.average);
            auto &dst = (s.phase == Phase::PTBrokenPlus || s.phase == Phase::PTBrokenMinus) ? br : ub;
            dst.x.push_back(s.gamma_tilde);
            dst.y.push_back(s.profile.average);
        }
        p.series = {ub, br};
        f.plots.push_back(p);
    }
    f.csv = os.str();
    return f;
}

/// N = 9 current profiles J(l).
inline FigureData fig10() {
    const int N = 9;
    FigureData f{"fig10", {}, {}, {{"blue", "J(l) of all states"}, {"red", "the coalescing pair"}}};
    std::ostringstream os;
    CsvWriter csv(os, {"gamma_tilde", "state_id", "phase", "coalescing", "l", "J"});
    for (double gt : {0.8, 0.9, 1.0, 1.1, 1.2}) {
        const auto roots = solve_secular(N, gt);
        const auto pair = coalescing_pair(roots);
        svg::Plot p{"current profiles, N = 9, gamma_tilde = " + svg::detail::num(gt), "l", "J(l)", {}};
        for (std::size_t s = 0; s < roots.size(); ++s) {
            const bool special = std::find(pair.begin(), pair.end(), s) != pair.end();
            const auto prof = current_profile(eigenfunction(roots[s], N, gt).values, static_cast<int>(s));
            svg::Series line;
            line.color = special ? svg::kRed : svg::kBlue;
            line.markers = true;
            for (std::size_t l = 0; l < prof.J.size(); ++l) {
                csv.row(gt, static_cast<std::int64_t>(s), to_string(roots[s].phase), special,
                        static_cast<std::int64_t>(l), prof.J[l]);
                line.x.push_back(static_cast<double>(l));
                line.y.push_back(prof.J[l]);
            }
            p.series.push_back(line);
        }
        f.plots.push_back(p);
    }
    f.csv = os.str();
    return f;
}

inline nlohmann::json sample_landmarks(const RandomChainSpec &spec, std::uint64_t id) {
    const auto s = analyze_sample(spec, id);
    nlohmann::json j{{"N", spec.N}, {"delta", spec.delta}, {"seed", spec.master_seed}, {"sample_id", id},
                     {"hoppings", sample_chain(spec, id).hoppings}, {"ok", s.ok}};
    if (s.ok) {
        j["gamma_ep"] = s.gamma_ep;
        j["E_ep_im"] = s.ep_energy_im;
        j["gamma_maxJ"] = s.gamma_maxJ;
        j["maxJ"] = s.maxJ;
        if (s.gamma_zero) j["gamma_zero"] = *s.gamma_zero;
    } else {
        j["error"] = s.error;
    }
    return j;
}

/// Spectrum of one random sample along the default grid (fig11 odd, fig14 even).
inline FigureData sample_spectrum_figure(const std::string &name, int N, const FigureOptions &opt) {
    RandomChainSpec spec;
    spec.N = N;
    spec.delta = 0.1;
    spec.master_seed = opt.seed;
    FigureData f{name, {}, {}, spectrum_legend()};
    f.legend["landmarks"] = sample_landmarks(spec, opt.sample_id);
    const ChainSpec chain = sample_chain(spec, opt.sample_id);
    std::ostringstream os;
    CsvWriter csv(os, {"gamma_tilde", "index", "E_re", "E_im"});
    svg::Plot p{"random sample spectrum, N = " + std::to_string(N) + ", delta = 0.1", "gamma_tilde", "E", {}};
    auto re = markers("Re E", svg::kBlue), im = markers("Im E", svg::kRed);
    for (double gt : spec.grid) {
        const auto vals = chain_eigenvalues(chain, gt);
        for (std::size_t k = 0; k < vals.size(); ++k) {
            csv.row(gt, static_cast<std::int64_t>(k), vals[k].real(), vals[k].imag());
            re.x.push_back(gt);
            re.y.push_back(vals[k].real());
            im.x.push_back(gt);
            im.y.push_back(vals[k].imag());
        }
    }
    p.series = {re, im};
    f.plots.push_back(p);
    f.csv = os.str();
    return f;
}

/// Average current of every eigenstate of one random sample (fig12, fig15).
inline FigureData sample_current_figure(const std::string &name, int N, const FigureOptions &opt) {
    RandomChainSpec spec;
    spec.N = N;
    spec.delta = 0.1;
    spec.master_seed = opt.seed;
    FigureData f{name, {}, {}, {{"blue", "J_av of every right eigenvector"}}};
    f.legend["landmarks"] = sample_landmarks(spec, opt.sample_id);
    const ChainSpec chain = sample_chain(spec, opt.sample_id);
    std::ostringstream os;
    CsvWriter csv(os, {"gamma_tilde", "index", "E_re", "E_im", "J_av"});
    svg::Plot p{"random sample current, N = " + std::to_string(N) + ", delta = 0.1", "gamma_tilde", "J_av", {}};
    auto s = markers("", svg::kBlue);
    for (double gt : spec.grid) {
        const CMatrix h = chain.with_gamma(gt).matrix();
        Eigen::ComplexEigenSolver<CMatrix> solver(h, true);
        std::vector<int> order(static_cast<std::size_t>(h.rows()));
        for (int i = 0; i < h.rows(); ++i) order[static_cast<std::size_t>(i)] = i;
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return complex_less(solver.eigenvalues()(a), solver.eigenvalues()(b)); });
        for (std::size_t k = 0; k < order.size(); ++k) {
            const cplx e = solver.eigenvalues()(order[k]);
            const double j = current_profile(solver.eigenvectors().col(order[k]).normalized()).average;
            csv.row(gt, static_cast<std::int64_t>(k), e.real(), e.imag(), j);
            s.x.push_back(gt);
            s.y.push_back(j);
        }
    }
    p.series = {s};
    f.plots.push_back(p);
    f.csv = os.str();
    return f;
}

inline std::vector<double> default_delta_grid() {
    std::vector<double> d;
    for (int i = 1; i <= 10; ++i) d.push_back(0.02 * i);
    return d;
}

/// Landmark means and spreads over delta (fig13 odd N = 9, fig16 even N = 8).
inline FigureData ensemble_figure(const std::string &name, int N, const FigureOptions &opt) {
    RandomChainSpec spec;
    spec.N = N;
    spec.master_seed = opt.seed;
    spec.antithetic = true;
    FigureData f{name, {}, {}, {{"blue", "gamma_tilde at the exceptional point"}, {"orange", "gamma_tilde at E = 0 (odd N)"},
                                {"green", "gamma_tilde at the current maximum"},
                                {"bars", "standard deviation of the sample distribution, not an error bar"}}};
    f.legend["samples_per_delta"] = opt.samples;
    f.legend["seed"] = opt.seed;
    f.legend["antithetic_pairs"] = true;
    const auto stats = ensemble_landmarks(spec, opt.samples, default_delta_grid(), opt.threads);
    std::ostringstream os;
    write_ensemble_table(os, stats);
    svg::Plot p{"landmarks vs delta, N = " + std::to_string(N), "delta", "gamma_tilde", {}};
    svg::Series ep, zero, mj;
    ep.label = "exceptional point";
    ep.color = svg::kBlue;
    zero.label = "zero crossing";
    zero.color = svg::kOrange;
    mj.label = "current maximum";
    mj.color = svg::kGreen;
    for (auto *s : {&ep, &zero, &mj}) s->markers = true;
    for (const auto &st : stats) {
        ep.x.push_back(st.delta);
        ep.y.push_back(st.gamma_ep.mean);
        ep.yerr.push_back(st.gamma_ep.std);
        if (st.gamma_zero.count) {
            zero.x.push_back(st.delta);
            zero.y.push_back(st.gamma_zero.mean);
            zero.yerr.push_back(st.gamma_zero.std);
        }
        mj.x.push_back(st.delta);
        mj.y.push_back(st.gamma_maxJ.mean);
        mj.yerr.push_back(st.gamma_maxJ.std);
    }
    p.series = {ep};
    if (!zero.x.empty()) p.series.push_back(zero);
    p.series.push_back(mj);
    f.plots.push_back(p);
    f.csv = os.str();
    return f;
}

inline FigureData make(const std::string &name, const FigureOptions &opt = {}) {
    if (name == "fig4") return fig4();
    if (name == "fig5") return fig5();
    if (name == "fig6") return secular_figure("fig6", false);
    if (name == "fig7") return secular_figure("fig7", true);
    if (name == "fig8") return fig8();
    if (name == "fig9") return fig9();
    if (name == "fig10") return fig10();
    if (name == "fig11") return sample_spectrum_figure("fig11", 9, opt);
    if (name == "fig12") return sample_current_figure("fig12", 9, opt);
    if (name == "fig13") return ensemble_figure("fig13", 9, opt);
    if (name == "fig14") return sample_spectrum_figure("fig14", 8, opt);
    if (name == "fig15") return sample_current_figure("fig15", 8, opt);
    if (name == "fig16") return ensemble_figure("fig16", 8, opt);
    throw ConfigError("unknown figure '" + name + "' (expected fig4 .. fig16)");
}

} // namespace figures
} // namespace bethe
