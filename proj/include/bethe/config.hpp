// Copyright 2026 The bethe-transport Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file config.hpp
 * @brief TOML-style run configuration (a small subset: [section] headers,
 *        key = value with numbers, booleans, quoted strings and flat numeric
 *        arrays, '#' comments).
 */

#pragma once

#include "bethe/lattice.hpp"
#include "bethe/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace bethe {

using ConfigValue = std::variant<double, bool, std::string, std::vector<double>>;

class ConfigTable {
  public:
    static ConfigTable parse(std::istream &in, const std::string &source = "<config>") {
        ConfigTable t;
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::string s = trim(strip_comment(line));
            if (s.empty()) continue;
            const auto where = source + ":" + std::to_string(lineno);
            if (s.front() == '[') {
                if (s.back() != ']' || s.size() < 3) throw ConfigError(where + ": malformed section header");
                section = trim(s.substr(1, s.size() - 2));
                continue;
            }
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
            const std::string key = trim(s.substr(0, eq));
            if (key.empty()) throw ConfigError(where + ": empty key");
            const std::string full = section.empty() ? key : section + "." + key;
            if (t.values_.count(full)) throw ConfigError(where + ": duplicate key '" + full + "'");
            t.values_[full] = parse_value(trim(s.substr(eq + 1)), where);
        }
        return t;
    }

    static ConfigTable parse_string(const std::string &text) {
        std::istringstream in(text);
        return parse(in);
    }

    static ConfigTable load(const std::string &path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file '" + path + "'");
        return parse(in, path);
    }

    bool has(const std::string &key) const { return values_.count(key) > 0; }
    const std::map<std::string, ConfigValue> &values() const { return values_; }
    void set(const std::string &key, ConfigValue v) { values_[key] = std::move(v); }

    std::optional<double> number(const std::string &key) const { return get<double>(key, "a number"); }
    std::optional<bool> boolean(const std::string &key) const { return get<bool>(key, "a boolean"); }
    std::optional<std::string> string(const std::string &key) const { return get<std::string>(key, "a string"); }

    std::optional<std::vector<double>> array(const std::string &key) const {
        return get<std::vector<double>>(key, "an array");
    }

    std::optional<std::int64_t> integer(const std::string &key) const {
        const auto d = number(key);
        if (!d) return std::nullopt;
        if (*d != std::floor(*d) || std::abs(*d) > 9.0e15) throw ConfigError("'" + key + "' must be an integer");
        return static_cast<std::int64_t>(*d);
    }

    /// Keys not in `known`, for reporting typos.
    std::vector<std::string> unknown_keys(const std::vector<std::string> &known) const {
        std::vector<std::string> out;
        for (const auto &[k, v] : values_)
            if (std::find(known.begin(), known.end(), k) == known.end()) out.push_back(k);
        return out;
    }

  private:
    template <typename T> std::optional<T> get(const std::string &key, const char *what) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        if (const auto *v = std::get_if<T>(&it->second)) return *v;
        throw ConfigError("'" + key + "' must be " + what);
    }

    static std::string strip_comment(const std::string &s) {
        bool quoted = false;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '"') quoted = !quoted;
            if (s[i] == '#' && !quoted) return s.substr(0, i);
        }
        return s;
    }

    static std::string trim(const std::string &s) {
        std::size_t a = 0, b = s.size();
        while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
        while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
        return s.substr(a, b - a);
    }

    static double parse_number(const std::string &s, const std::string &where) {
        std::size_t used = 0;
        double d = 0.0;
        try {
            d = std::stod(s, &used);
        } catch (const std::exception &) {
            throw ConfigError(where + ": cannot parse '" + s + "' as a number");
        }
        if (used != s.size() || !std::isfinite(d)) throw ConfigError(where + ": cannot parse '" + s + "' as a number");
        return d;
    }

    static ConfigValue parse_value(const std::string &s, const std::string &where) {
        if (s.empty()) throw ConfigError(where + ": missing value");
        if (s == "true") return true;
        if (s == "false") return false;
        if (s.front() == '"') {
            if (s.size() < 2 || s.back() != '"') throw ConfigError(where + ": unterminated string");
            return s.substr(1, s.size() - 2);
        }
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError(where + ": unterminated array");
            std::vector<double> out;
            std::stringstream body(s.substr(1, s.size() - 2));
            std::string item;
            while (std::getline(body, item, ',')) {
                item = trim(item);
                if (item.empty()) continue;
                out.push_back(parse_number(item, where));
            }
            return out;
        }
        return parse_number(s, where);
    }

    std::map<std::string, ConfigValue> values_;
};

/// [tree] N, branching, gamma (sets both), gamma0, gammaN. A scalar
/// branching means the same n in every generation.
inline TreeSpec tree_from_config(const ConfigTable &t) {
    TreeSpec spec;
    const auto N = t.integer("tree.N");
    if (!N) throw ConfigError("missing tree.N");
    if (*N < 1 || *N > 64) throw ConfigError("tree.N must be in [1, 64]");
    spec.N = static_cast<int>(*N);
    if (t.has("tree.branching")) {
        if (const auto *arr = std::get_if<std::vector<double>>(&t.values().at("tree.branching"))) {
            for (double b : *arr) {
                if (b != std::floor(b)) throw ConfigError("tree.branching entries must be integers");
                spec.branching.push_back(static_cast<int>(b));
            }
        } else {
            const auto n = t.integer("tree.branching");
            spec.branching.assign(static_cast<std::size_t>(spec.N), static_cast<int>(*n));
        }
    } else {
        throw ConfigError("missing tree.branching");
    }
    const auto g = t.number("tree.gamma");
    spec.gamma0 = t.number("tree.gamma0").value_or(g.value_or(-1.0));
    spec.gammaN = t.number("tree.gammaN").value_or(g.value_or(-1.0));
    if (spec.gamma0 < 0 && spec.gammaN < 0) throw ConfigError("missing tree.gamma (or tree.gamma0 / tree.gammaN)");
    try {
        spec.validate();
    } catch (const DomainError &e) {
        throw ConfigError(e.what());
    }
    return spec;
}

inline const std::vector<std::string> &known_config_keys() {
    static const std::vector<std::string> keys{
        "tree.N", "tree.branching", "tree.gamma", "tree.gamma0", "tree.gammaN",
        "run.seed", "run.threads", "run.tol_residual", "run.plot", "run.out",
        "chain.N", "chain.gamma_tilde", "chain.gt_min", "chain.gt_max", "chain.gt_step",
        "random.n_base", "random.delta", "random.N", "random.samples", "random.grid_min", "random.grid_max",
        "random.grid_step", "random.deltas", "random.antithetic",
        "scatter.gamma", "scatter.gammas", "scatter.e_min", "scatter.e_max", "scatter.points", "scatter.lead_length"};
    return keys;
}

} // namespace bethe
