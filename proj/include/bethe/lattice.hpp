// Copyright 2026 The bethe-transport Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file lattice.hpp
 * @brief Finite Cayley tree: site indexing and sparse assembly of the
 *        non-Hermitian tight-binding Hamiltonian and link current operators.
 *
 * Sites are ordered breadth-first: generation 0 (the origin) first, then
 * generation 1, and so on. Inside a generation the ids follow the
 * lexicographic order of the site paths, so every parent's children occupy
 * a contiguous id range. All hoppings are -1 (unit of energy); the origin
 * carries the drain potential -i*gamma0, every generation-N site carries the
 * source potential +i*gammaN.
 */

#pragma once

#include "bethe/types.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace bethe {

inline constexpr std::int64_t kDefaultSiteCap = 1'000'000;

struct TreeSpec {
    int N = 1;                  ///< number of generations
    std::vector<int> branching; ///< n_1 .. n_N
    double gamma0 = 0.0;        ///< drain strength on the origin
    double gammaN = 0.0;        ///< source strength on each peripheral site

    /// Structural checks only (N, branching). The index and the Hamiltonian
    /// can be built for gamma = 0, which is the Hermitian limit.
    void validate_structure() const {
        if (N < 1) throw ConfigError("TreeSpec: N must be >= 1, got " + std::to_string(N));
        if (static_cast<int>(branching.size()) != N) {
            throw ConfigError("TreeSpec: branching has " + std::to_string(branching.size()) +
                              " entries, expected N = " + std::to_string(N));
        }
        for (std::size_t l = 0; l < branching.size(); ++l) {
            if (branching[l] < 1) {
                throw ConfigError("TreeSpec: branching[" + std::to_string(l + 1) +
                                  "] must be >= 1, got " + std::to_string(branching[l]));
            }
        }
    }

    /// Full validation including gamma0 > 0 and gammaN > 0.
    void validate() const {
        validate_structure();
        if (!(gamma0 > 0.0)) throw ConfigError("TreeSpec: gamma0 must be > 0");
        if (!(gammaN > 0.0)) throw ConfigError("TreeSpec: gammaN must be > 0");
    }

    /// n_l for 1 <= l <= N (1-based generation).
    int n(int generation) const { return branching.at(static_cast<std::size_t>(generation - 1)); }

    /// n_tot_l for 0 <= l <= N. Saturates at int64 max on overflow.
    std::int64_t sites_in_generation(int generation) const {
        std::int64_t total = 1;
        for (int m = 1; m <= generation; ++m) {
            if (total > std::numeric_limits<std::int64_t>::max() / n(m)) {
                return std::numeric_limits<std::int64_t>::max();
            }
            total *= n(m);
        }
        return total;
    }

    /// n_tot = sum over generations. Saturates on overflow.
    std::int64_t total_sites() const {
        std::int64_t total = 0;
        for (int l = 0; l <= N; ++l) {
            const std::int64_t g = sites_in_generation(l);
            if (total > std::numeric_limits<std::int64_t>::max() - g) {
                return std::numeric_limits<std::int64_t>::max();
            }
            total += g;
        }
        return total;
    }

    bool uniform_branching() const {
        return std::all_of(branching.begin(), branching.end(),
                           [&](int v) { return v == branching.front(); });
    }
};

/// 1-based child indices from the origin; the empty path is the origin.
using SitePath = std::vector<int>;

inline std::string to_string(const SitePath &path) {
    std::ostringstream os;
    os << '[';
    if (path.empty()) os << 0;
    for (std::size_t m = 0; m < path.size(); ++m) os << (m ? "," : "") << path[m];
    os << ']';
    return os.str();
}

/// Bijection between site paths and dense ids in [0, n_tot).
class TreeIndex {
  public:
    TreeIndex() = default;

    TreeIndex(const TreeSpec &spec, std::int64_t site_cap = kDefaultSiteCap) {
        spec.validate_structure();
        const std::int64_t total = spec.total_sites();
        if (total > site_cap) {
            throw SizeError("tree has " + std::to_string(total) + " sites, above the cap of " +
                            std::to_string(site_cap));
        }
        branching_ = spec.branching;
        offsets_.reserve(static_cast<std::size_t>(spec.N) + 2);
        std::int64_t offset = 0;
        for (int l = 0; l <= spec.N; ++l) {
            offsets_.push_back(offset);
            offset += spec.sites_in_generation(l);
        }
        offsets_.push_back(offset);
    }

    int generations() const { return static_cast<int>(branching_.size()); }
    std::int64_t size() const { return offsets_.back(); }
    std::int64_t generation_offset(int l) const { return offsets_.at(static_cast<std::size_t>(l)); }
    std::int64_t generation_size(int l) const {
        return offsets_.at(static_cast<std::size_t>(l) + 1) - offsets_.at(static_cast<std::size_t>(l));
    }
    const std::vector<std::int64_t> &generation_offsets() const { return offsets_; }
    int branching(int l) const { return branching_.at(static_cast<std::size_t>(l - 1)); }

    int generation_of(std::int64_t id) const {
        check_id(id);
        const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), id);
        return static_cast<int>(it - offsets_.begin()) - 1;
    }

    std::int64_t id(const SitePath &path) const {
        const int g = static_cast<int>(path.size());
        if (g > generations()) throw DomainError("site path " + to_string(path) + " is too deep");
        std::int64_t local = 0;
        for (int m = 0; m < g; ++m) {
            const int nu = path[static_cast<std::size_t>(m)];
            if (nu < 1 || nu > branching(m + 1)) {
                throw DomainError("site path " + to_string(path) + " has an out-of-range index");
            }
            local = local * branching(m + 1) + (nu - 1);
        }
        return offsets_[static_cast<std::size_t>(g)] + local;
    }

    SitePath path(std::int64_t id) const {
        const int g = generation_of(id);
        std::int64_t local = id - offsets_[static_cast<std::size_t>(g)];
        SitePath p(static_cast<std::size_t>(g));
        for (int m = g; m >= 1; --m) {
            p[static_cast<std::size_t>(m - 1)] = static_cast<int>(local % branching(m)) + 1;
            local /= branching(m);
        }
        return p;
    }

    /// Parent id; the origin has no parent.
    std::int64_t parent(std::int64_t id) const {
        const int g = generation_of(id);
        if (g == 0) throw DomainError("the origin has no parent");
        const std::int64_t local = id - offsets_[static_cast<std::size_t>(g)];
        return offsets_[static_cast<std::size_t>(g) - 1] + local / branching(g);
    }

    /// Id of the first child; children are contiguous, count = n_{g+1}.
    std::int64_t first_child(std::int64_t id) const {
        const int g = generation_of(id);
        if (g == generations()) throw DomainError("peripheral sites have no children");
        const std::int64_t local = id - offsets_[static_cast<std::size_t>(g)];
        return offsets_[static_cast<std::size_t>(g) + 1] + local * branching(g + 1);
    }

  private:
    void check_id(std::int64_t id) const {
        if (id < 0 || id >= size()) throw DomainError("site id " + std::to_string(id) + " out of range");
    }

    std::vector<int> branching_;
    std::vector<std::int64_t> offsets_;
};

inline TreeIndex build_index(const TreeSpec &spec, std::int64_t site_cap = kDefaultSiteCap) {
    return TreeIndex(spec, site_cap);
}

struct Triplet {
    std::int64_t row;
    std::int64_t col;
    cplx value;
};

/// Coordinate-format complex matrix. add() accumulates; finalize() sorts by
/// (row, col), sums duplicates and drops exact zeros.
class SparseComplexMatrix {
  public:
    SparseComplexMatrix() = default;
    explicit SparseComplexMatrix(std::int64_t dimension) : dim_(dimension) {}

    std::int64_t dimension() const { return dim_; }
    const std::vector<Triplet> &entries() const { return entries_; }
    std::size_t nonzeros() const { return entries_.size(); }

    void add(std::int64_t row, std::int64_t col, cplx value) {
        if (row < 0 || row >= dim_ || col < 0 || col >= dim_) {
            throw DomainError("matrix entry (" + std::to_string(row) + "," + std::to_string(col) +
                              ") outside dimension " + std::to_string(dim_));
        }
        entries_.push_back({row, col, value});
        finalized_ = false;
    }

    void finalize() {
        std::sort(entries_.begin(), entries_.end(), [](const Triplet &a, const Triplet &b) {
            return std::tie(a.row, a.col) < std::tie(b.row, b.col);
        });
        std::vector<Triplet> merged;
        merged.reserve(entries_.size());
        for (const auto &t : entries_) {
            if (!merged.empty() && merged.back().row == t.row && merged.back().col == t.col) {
                merged.back().value += t.value;
            } else {
                merged.push_back(t);
            }
        }
        std::erase_if(merged, [](const Triplet &t) { return t.value == cplx{}; });
        entries_ = std::move(merged);
        finalized_ = true;
    }

    bool finalized() const { return finalized_; }

    /// Value at (row, col); zero if absent. Requires a finalized matrix.
    cplx at(std::int64_t row, std::int64_t col) const {
        const auto it = std::lower_bound(entries_.begin(), entries_.end(), std::make_pair(row, col),
                                         [](const Triplet &t, const std::pair<std::int64_t, std::int64_t> &k) {
                                             return std::tie(t.row, t.col) < std::tie(k.first, k.second);
                                         });
        if (it != entries_.end() && it->row == row && it->col == col) return it->value;
        return {};
    }

    CMatrix to_dense() const {
        CMatrix m = CMatrix::Zero(dim_, dim_);
        for (const auto &t : entries_) m(t.row, t.col) += t.value;
        return m;
    }

    CVector multiply(const CVector &x) const {
        if (x.size() != dim_) throw DomainError("vector length does not match matrix dimension");
        CVector y = CVector::Zero(dim_);
        for (const auto &t : entries_) y(t.row) += t.value * x(t.col);
        return y;
    }

    /// <x|M|x> with the Hermitian-conjugate bra.
    cplx expectation(const CVector &x) const { return x.dot(multiply(x)); }

    bool is_transpose_symmetric() const {
        for (const auto &t : entries_) {
            if (at(t.col, t.row) != t.value) return false;
        }
        return true;
    }

    bool is_hermitian() const {
        for (const auto &t : entries_) {
            if (at(t.col, t.row) != std::conj(t.value)) return false;
        }
        return true;
    }

    /// One "row col re im" line per stored entry, preceded by a header
    /// comment carrying the dimension.
    void write_coordinate(std::ostream &os) const {
        os << "# dimension " << dim_ << " nonzeros " << entries_.size() << "\n";
        os.precision(17);
        for (const auto &t : entries_) {
            os << t.row << ' ' << t.col << ' ' << t.value.real() << ' ' << t.value.imag() << '\n';
        }
    }

  private:
    std::int64_t dim_ = 0;
    std::vector<Triplet> entries_;
    bool finalized_ = false;
};

/// Total Hamiltonian: -1 on every parent-child link (both directions),
/// -i*gamma0 on the origin, +i*gammaN on every peripheral site.
inline SparseComplexMatrix assemble_hamiltonian(const TreeSpec &spec, const TreeIndex &index) {
    if (index.size() != spec.total_sites() || index.generations() != spec.N) {
        throw DomainError("tree index was not built from this TreeSpec");
    }
    SparseComplexMatrix h(index.size());
    h.add(0, 0, cplx{0.0, -spec.gamma0});
    for (std::int64_t id = 1; id < index.size(); ++id) {
        const std::int64_t p = index.parent(id);
        h.add(p, id, -1.0);
        h.add(id, p, -1.0);
    }
    const std::int64_t first_leaf = index.generation_offset(spec.N);
    for (std::int64_t id = first_leaf; id < index.size(); ++id) h.add(id, id, cplx{0.0, spec.gammaN});
    h.finalize();
    return h;
}

/// Current on one link, positive when flowing from child to parent (toward
/// the origin): entry (parent, child) = +i, entry (child, parent) = -i, so
/// that <psi|J|psi> = -2 Im[psi(child) conj(psi(parent))].
inline SparseComplexMatrix link_current_operator(const SitePath &parent, const SitePath &child,
                                                 const TreeIndex &index) {
    const bool adjacent = child.size() == parent.size() + 1 &&
                          std::equal(parent.begin(), parent.end(), child.begin());
    if (!adjacent) {
        throw DomainError("sites " + to_string(parent) + " and " + to_string(child) +
                          " are not parent and child");
    }
    const std::int64_t p = index.id(parent);
    const std::int64_t c = index.id(child);
    SparseComplexMatrix j(index.size());
    j.add(p, c, kI);
    j.add(c, p, -kI);
    j.finalize();
    return j;
}

} // namespace bethe
