// Copyright 2026 The bethe-transport Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file scattering.hpp
 * @brief Transfer-matrix transmission through a two-site gain/loss dot
 *        (-i gamma, +i gamma) embedded in ideal leads.
 *
 * Site n maps (psi_n, psi_{n-1}) to (psi_{n+1}, psi_n) with
 * M_n = ((V_n - E, -1), (1, 0)). Plane waves on the leads are written in the
 * basis Q = ((1, 1), (e^{-ik}, e^{ik})), k in (0, pi), E = -2 cos k.
 */

#pragma once

#include "bethe/csv.hpp"
#include "bethe/types.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <ostream>
#include <vector>

namespace bethe {

using TransferMatrix2 = Eigen::Matrix2cd;

inline TransferMatrix2 site_transfer(cplx V, double E) {
    TransferMatrix2 m;
    m << V - E, -1.0, 1.0, 0.0;
    return m;
}

inline double wave_number(double E) {
    if (!(std::abs(E) < 2.0)) throw DomainError("wave_number: |E| must be < 2");
    return std::acos(-E / 2.0);
}

struct ScatterConfig {
    double gamma = 0.0;
    double energy = 0.0;
    int lead_length = 1; ///< ideal sites on each side of the dot
    double edge_margin = 1e-6;

    void validate() const {
        if (!std::isfinite(gamma)) throw DomainError("scatter: gamma must be finite");
        if (!(std::abs(energy) < 2.0 - edge_margin)) {
            throw DomainError("scatter: |E| must stay below 2 by the edge margin (Q is singular at k = 0, pi)");
        }
        if (lead_length < 0) throw DomainError("scatter: lead_length must be >= 0");
    }
};

inline TransferMatrix2 lead_basis(double k) {
    TransferMatrix2 q;
    q << 1.0, 1.0, std::exp(cplx{0.0, -k}), std::exp(cplx{0.0, k});
    return q;
}

/// Product of all site matrices, rightmost lead site first in the product.
inline TransferMatrix2 total_site_product(const ScatterConfig &cfg) {
    std::vector<cplx> potentials(static_cast<std::size_t>(cfg.lead_length), 0.0);
    potentials.push_back(cplx{0.0, -cfg.gamma});
    potentials.push_back(cplx{0.0, cfg.gamma});
    potentials.insert(potentials.end(), static_cast<std::size_t>(cfg.lead_length), 0.0);
    TransferMatrix2 m = TransferMatrix2::Identity();
    for (const cplx &v : potentials) m = site_transfer(v, cfg.energy) * m;
    return m;
}

inline TransferMatrix2 scattering_matrix(const ScatterConfig &cfg) {
    cfg.validate();
    const TransferMatrix2 q = lead_basis(wave_number(cfg.energy));
    return q.inverse() * total_site_product(cfg) * q;
}

/// T = 1 / |M_22|^2 in the plane-wave basis; not clamped to 1.
inline double transmission(const ScatterConfig &cfg) {
    const cplx m22 = scattering_matrix(cfg)(1, 1);
    return 1.0 / std::norm(m22);
}

/// [(1 - gamma^2/2)^2 + (gamma^2 / (2 tan k))^2]^{-1}
inline double transmission_closed_form(double E, double gamma) {
    const double k = wave_number(E);
    const double g2 = gamma * gamma;
    const double a = 1.0 - g2 / 2.0;
    const double b = g2 / (2.0 * std::tan(k));
    return 1.0 / (a * a + b * b);
}

/// E,gamma,T,T_closed_form
inline void write_scatter_table(std::ostream &os, const std::vector<double> &energies,
                                const std::vector<double> &gammas, int lead_length = 1) {
    CsvWriter csv(os, {"E", "gamma", "T", "T_closed_form"});
    for (double g : gammas) {
        for (double e : energies) {
            ScatterConfig cfg{g, e, lead_length};
            csv.row(e, g, transmission(cfg), transmission_closed_form(e, g));
        }
    }
}

/// points energies in [e_min, e_max], each pulled inside (-2, 2) by margin.
inline std::vector<double> energy_grid(double e_min, double e_max, int points, double margin = 1e-6) {
    if (points < 1) throw DomainError("energy_grid: points must be >= 1");
    if (!(e_max >= e_min)) throw DomainError("energy_grid: e_max < e_min");
    const double lo = std::max(e_min, -2.0 + margin), hi = std::min(e_max, 2.0 - margin);
    if (lo > hi) throw DomainError("energy_grid: empty range inside (-2, 2)");
    std::vector<double> g;
    for (int i = 0; i < points; ++i) g.push_back(points == 1 ? lo : lo + (hi - lo) * i / (points - 1));
    return g;
}

} // namespace bethe
