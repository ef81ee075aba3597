// Copyright 2026 The bethe-transport Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file verify.hpp
 * @brief Cross-check of the analytic eigenbasis (localized families plus
 *        extended chain states) against the dense oracle for one tree.
 */

#pragma once

#include "bethe/chain.hpp"
#include "bethe/lattice.hpp"
#include "bethe/localized.hpp"
#include "bethe/spectral.hpp"
#include "bethe/types.hpp"

#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace bethe {

struct VerifyTolerances {
    double eigenvalue = 1e-8;   ///< max matched distance analytic vs oracle
    double residual = 1e-9;     ///< ||H v - E v|| for unit analytic vectors
    double symmetry = 1e-8;     ///< mirror partner distance about the imaginary axis
    double im_nonneg = 1e-12;   ///< localized eigenvalues: Im E >= -this
    double independence = 1e-8; ///< smallest singular value of the analytic basis
    std::int64_t svd_cap = 1500;
};

struct VerifyCheck {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct VerifyReport {
    TreeSpec spec;
    std::int64_t n_tot = 0;
    std::int64_t localized = 0;
    std::vector<VerifyCheck> checks;

    bool pass() const {
        for (const auto &c : checks)
            if (!c.pass) return false;
        return true;
    }

    const VerifyCheck *first_failure() const {
        for (const auto &c : checks)
            if (!c.pass) return &c;
        return nullptr;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["N"] = spec.N;
        j["branching"] = spec.branching;
        j["gamma0"] = spec.gamma0;
        j["gammaN"] = spec.gammaN;
        j["n_tot"] = n_tot;
        j["localized_states"] = localized;
        j["pass"] = pass();
        for (const auto &c : checks) {
            j["checks"].push_back(
                {{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"threshold", c.threshold}, {"detail", c.detail}});
        }
        return j;
    }
};

struct AnalyticEigenbasis {
    std::vector<cplx> values;
    std::vector<CVector> vectors; ///< unit norm, full tree dimension
    std::vector<bool> localized;
};

inline AnalyticEigenbasis analytic_eigenbasis(const TreeSpec &spec, const TreeIndex &index, const EigOptions &opt = {}) {
    AnalyticEigenbasis b;
    for (const auto &s : all_localized(spec, index, opt)) {
        b.values.push_back(s.value());
        b.vectors.push_back(s.full_vector(index.size()));
        b.localized.push_back(true);
    }
    for (const auto &p : extended_states(spec, index, opt)) {
        b.values.push_back(p.value);
        b.vectors.push_back(p.vector.normalized());
        b.localized.push_back(false);
    }
    return b;
}

inline VerifyReport verify_tree(const TreeSpec &spec, const VerifyTolerances &tol = {}, const EigOptions &opt = {}) {
    spec.validate_structure();
    VerifyReport rep;
    rep.spec = spec;
    rep.n_tot = spec.total_sites();
    if (rep.n_tot > opt.dense_cap) {
        throw SizeError("verify: n_tot = " + std::to_string(rep.n_tot) + " exceeds the dense cap " +
                        std::to_string(opt.dense_cap));
    }
    rep.localized = localized_count(spec);
    const auto add = [&rep](std::string name, bool pass, double value, double threshold, std::string detail = {}) {
        rep.checks.push_back({std::move(name), pass, value, threshold, std::move(detail)});
    };

    add("counting_identity", rep.localized + spec.N + 1 == rep.n_tot, static_cast<double>(rep.localized + spec.N + 1),
        static_cast<double>(rep.n_tot), "localized + (N+1) vs n_tot");

    const TreeIndex index(spec);
    const auto h = assemble_hamiltonian(spec, index);
    add("transpose_symmetric", h.is_transpose_symmetric(), 0.0, 0.0);

    const auto oracle = eig_dense(h, opt);
    const auto oracle_values = eigenvalues_of(oracle);
    const auto basis = analytic_eigenbasis(spec, index, opt);

    if (basis.values.size() != oracle_values.size()) {
        add("eigenvalue_match", false, static_cast<double>(basis.values.size()),
            static_cast<double>(oracle_values.size()), "analytic state count differs from n_tot");
    } else {
        const auto m = match_multisets(basis.values, oracle_values);
        add("eigenvalue_match", m.max_distance <= tol.eigenvalue, m.max_distance, tol.eigenvalue);
    }

    double worst = 0.0;
    for (std::size_t i = 0; i < basis.vectors.size(); ++i) {
        worst = std::max(worst, (h.multiply(basis.vectors[i]) - basis.values[i] * basis.vectors[i]).norm());
    }
    add("analytic_residual", worst <= tol.residual, worst, tol.residual);

    std::vector<cplx> loc;
    for (std::size_t i = 0; i < basis.values.size(); ++i)
        if (basis.localized[i]) loc.push_back(basis.values[i]);
    const auto im = check_im_nonneg(loc, tol.im_nonneg);
    add("localized_im_nonnegative", im.pass, im.worst, tol.im_nonneg);

    const auto sym = check_spectrum_symmetry(oracle_values, tol.symmetry);
    add("imaginary_axis_symmetry", sym.pass, sym.worst, tol.symmetry);

    if (rep.n_tot <= tol.svd_cap) {
        CMatrix v(rep.n_tot, static_cast<Eigen::Index>(basis.vectors.size()));
        for (std::size_t i = 0; i < basis.vectors.size(); ++i) v.col(static_cast<Eigen::Index>(i)) = basis.vectors[i];
        Eigen::BDCSVD<CMatrix> svd(v);
        const double smin = svd.singularValues().size() ? svd.singularValues().minCoeff() : 0.0;
        add("basis_independence", smin >= tol.independence, smin, tol.independence, "smallest singular value");
    }
    return rep;
}

} // namespace bethe
