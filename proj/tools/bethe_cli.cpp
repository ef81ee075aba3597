// Copyright 2026 The bethe-transport Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Exit codes: 0 pass, 1 check failure or numerical
// error, 2 configuration error.

#include "bethe/chain.hpp"
#include "bethe/config.hpp"
#include "bethe/figures.hpp"
#include "bethe/localized.hpp"
#include "bethe/random.hpp"
#include "bethe/scattering.hpp"
#include "bethe/svg.hpp"
#include "bethe/transport.hpp"
#include "bethe/verify.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bethe;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct Global {
    std::string config_path;
    std::string out = "bethe_out";
    std::uint64_t seed = 20260101;
    unsigned threads = 1;
    double tol_residual = 1e-9;
    bool plot = true;
};

struct TreeFlags {
    int N = 0;
    std::vector<int> branching;
    double gamma = -1, gamma0 = -1, gammaN = -1;
};

struct GridFlags {
    int N = 9;
    double gt_min = 0.01, gt_max = 3.0, gt_step = 0.01;
};

struct RandomFlags {
    double n_base = 2.0;
    std::vector<double> deltas{0.1};
    int N = 9;
    std::size_t samples = 100;
    bool antithetic = false;
};

struct ScatterFlags {
    std::vector<double> gammas{1.0};
    double e_min = -1.99, e_max = 1.99;
    int points = 101;
    int lead_length = 1;
};

class Run {
  public:
    Run(std::string command, const Global &g, std::vector<std::string> argv)
        : command_(std::move(command)), g_(g), argv_(std::move(argv)), start_(std::chrono::steady_clock::now()) {
        fs::create_directories(g_.out);
    }

    fs::path path(const std::string &file) const { return fs::path(g_.out) / file; }

    void write(const std::string &file, const std::string &content) {
        std::ofstream os(path(file), std::ios::binary);
        if (!os) throw Error("cannot write " + path(file).string());
        os << content;
        outputs_.push_back(file);
    }

    void plot(const std::string &stem, const std::vector<svg::Plot> &plots) {
        if (!g_.plot) return;
        for (std::size_t i = 0; i < plots.size(); ++i) {
            std::ostringstream os;
            svg::render(os, plots[i]);
            write(plots.size() == 1 ? stem + ".svg" : stem + "_" + std::to_string(i + 1) + ".svg", os.str());
        }
    }

    json &config() { return config_; }

    int finish(int code, const std::string &status) {
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        json m{{"command", command_}, {"argv", argv_}, {"version", BETHE_VERSION}, {"seed", g_.seed},
               {"threads", g_.threads}, {"config", config_}, {"outputs", outputs_}, {"exit_code", code},
               {"status", status}, {"wall_time_s", wall}};
        std::ofstream os(path("manifest.json"));
        os << m.dump(2) << '\n';
        return code;
    }

  private:
    std::string command_;
    Global g_;
    std::vector<std::string> argv_;
    std::chrono::steady_clock::time_point start_;
    json config_ = json::object();
    std::vector<std::string> outputs_;
};

json table_to_json(const ConfigTable &t) {
    json j = json::object();
    for (const auto &[k, v] : t.values()) std::visit([&](const auto &x) { j[k] = x; }, v);
    return j;
}

/// Tree from the config file with command-line overrides.
TreeSpec resolve_tree(const ConfigTable &file, const TreeFlags &f) {
    ConfigTable t = file;
    if (f.N > 0) t.set("tree.N", double(f.N));
    if (!f.branching.empty()) t.set("tree.branching", std::vector<double>(f.branching.begin(), f.branching.end()));
    if (f.gamma >= 0) t.set("tree.gamma", f.gamma);
    if (f.gamma0 >= 0) t.set("tree.gamma0", f.gamma0);
    if (f.gammaN >= 0) t.set("tree.gammaN", f.gammaN);
    return tree_from_config(t);
}

json tree_json(const TreeSpec &s) {
    return {{"N", s.N}, {"branching", s.branching}, {"gamma0", s.gamma0}, {"gammaN", s.gammaN}};
}

template <typename T> T pick(const CLI::Option *opt, T flag, std::optional<T> file) {
    if (opt && opt->count()) return flag;
    return file ? *file : flag;
}

std::vector<double> pick_list(const CLI::Option *opt, std::vector<double> flag, std::optional<std::vector<double>> file,
                              std::optional<double> scalar) {
    if (opt && opt->count()) return flag;
    if (file) return *file;
    if (scalar) return {*scalar};
    return flag;
}

std::string csv_of(const std::function<void(std::ostream &)> &fn) {
    std::ostringstream os;
    fn(os);
    return os.str();
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Transport and exceptional points on a tree lattice with source and drain"};
    app.require_subcommand(1);
    app.set_version_flag("--version", BETHE_VERSION);

    Global g;
    app.add_option("--config", g.config_path, "TOML-style run configuration")->check(CLI::ExistingFile);
    auto *out_opt = app.add_option("--out", g.out, "output directory");
    auto *seed_opt = app.add_option("--seed", g.seed, "master seed for random sampling");
    auto *threads_opt = app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
    auto *tol_opt = app.add_option("--tol-residual", g.tol_residual, "residual tolerance for verify");
    auto *plot_opt = app.add_flag("--plot,!--no-plot", g.plot, "write SVG previews (default on)");

    TreeFlags tree;
    const auto add_tree = [&tree](CLI::App *sub) {
        sub->add_option("--N", tree.N, "generations");
        sub->add_option("--branching", tree.branching, "n_1 .. n_N")->delimiter(',');
        sub->add_option("--gamma", tree.gamma, "gamma0 = gammaN");
        sub->add_option("--gamma0", tree.gamma0, "drain strength");
        sub->add_option("--gammaN", tree.gammaN, "source strength");
    };
    auto *verify = app.add_subcommand("verify", "cross-check the analytic eigenbasis against the dense oracle");
    add_tree(verify);
    auto *spectrum = app.add_subcommand("spectrum", "dense spectrum and Hamiltonian of a tree");
    add_tree(spectrum);

    GridFlags grid;
    CLI::Option *grid_opts[4] = {};
    const auto add_grid = [&](CLI::App *sub) {
        grid_opts[0] = sub->add_option("--N", grid.N, "chain length parameter");
        grid_opts[1] = sub->add_option("--gt-min", grid.gt_min, "first gamma_tilde");
        grid_opts[2] = sub->add_option("--gt-max", grid.gt_max, "last gamma_tilde");
        grid_opts[3] = sub->add_option("--gt-step", grid.gt_step, "gamma_tilde step");
    };
    auto *chain = app.add_subcommand("chain", "secular roots of the scaled uniform chain");
    add_grid(chain);
    GridFlags grid_current = grid;
    auto *current = app.add_subcommand("current", "current expectations of the extended states");
    CLI::Option *cur_opts[4] = {};
    cur_opts[0] = current->add_option("--N", grid_current.N, "chain length parameter");
    cur_opts[1] = current->add_option("--gt-min", grid_current.gt_min, "first gamma_tilde");
    cur_opts[2] = current->add_option("--gt-max", grid_current.gt_max, "last gamma_tilde");
    cur_opts[3] = current->add_option("--gt-step", grid_current.gt_step, "gamma_tilde step");

    RandomFlags rnd;
    auto *ens = app.add_subcommand("random-ensemble", "landmarks of random-branching chains");
    auto *nb_opt = ens->add_option("--n-base", rnd.n_base, "base branching n");
    auto *delta_opt = ens->add_option("--delta", rnd.deltas, "randomness half-width(s)")->delimiter(',');
    auto *rn_opt = ens->add_option("--N", rnd.N, "generations");
    auto *samples_opt = ens->add_option("--samples", rnd.samples, "samples per delta");
    auto *anti_opt = ens->add_flag("--antithetic", rnd.antithetic, "pair each sample with its sign-flipped draws");

    ScatterFlags sc;
    auto *scatter = app.add_subcommand("scatter", "transmission through the two-site gain/loss dot");
    auto *g_opt = scatter->add_option("--gamma", sc.gammas, "gamma value(s)")->delimiter(',');
    auto *emin_opt = scatter->add_option("--e-min", sc.e_min, "lowest energy");
    auto *emax_opt = scatter->add_option("--e-max", sc.e_max, "highest energy");
    auto *pts_opt = scatter->add_option("--points", sc.points, "energy points");
    auto *lead_opt = scatter->add_option("--lead-length", sc.lead_length, "ideal sites per lead");

    std::string fig_name;
    FigureOptions fig_opt;
    auto *figure = app.add_subcommand("figure", "data and SVG for one figure (fig4 .. fig16, or all)");
    figure->add_option("name", fig_name, "figure name")->required();
    auto *fig_samples_opt = figure->add_option("--samples", fig_opt.samples, "samples per delta (ensemble figures)");
    figure->add_option("--sample-id", fig_opt.sample_id, "sample shown in single-sample figures");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitConfig;
    }

    std::vector<std::string> args(argv, argv + argc);
    ConfigTable file;
    try {
        if (!g.config_path.empty()) {
            file = ConfigTable::load(g.config_path);
            const auto unknown = file.unknown_keys(known_config_keys());
            if (!unknown.empty()) throw ConfigError("unknown config key '" + unknown.front() + "'");
        }
        g.out = pick<std::string>(out_opt, g.out, file.string("run.out"));
        if (!seed_opt->count() && file.integer("run.seed")) g.seed = static_cast<std::uint64_t>(*file.integer("run.seed"));
        if (!threads_opt->count() && file.integer("run.threads")) g.threads = static_cast<unsigned>(*file.integer("run.threads"));
        g.tol_residual = pick<double>(tol_opt, g.tol_residual, file.number("run.tol_residual"));
        g.plot = pick<bool>(plot_opt, g.plot, file.boolean("run.plot"));
        if (g.threads < 1) throw ConfigError("threads must be >= 1");
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    CLI::App *sub = app.get_subcommands().front();
    std::unique_ptr<Run> run;
    try {
        run = std::make_unique<Run>(sub->get_name(), g, args);
        run->config()["file"] = table_to_json(file);

        if (sub == verify) {
            const TreeSpec spec = resolve_tree(file, tree);
            run->config()["tree"] = tree_json(spec);
            VerifyTolerances tol;
            tol.residual = g.tol_residual;
            const auto report = verify_tree(spec, tol);
            run->write("verify_report.json", report.to_json().dump(2) + "\n");
            const TreeIndex index(spec);
            run->write("localized_inventory.csv",
                       csv_of([&](std::ostream &os) { write_localized_inventory(os, all_localized(spec, index)); }));
            if (const auto *bad = report.first_failure()) {
                std::cerr << "verify: check '" << bad->name << "' failed (value " << bad->value << ", threshold "
                          << bad->threshold << ")\n";
                return run->finish(kExitFail, "fail: " + bad->name);
            }
            std::cout << "verify: all " << report.checks.size() << " checks passed (n_tot = " << report.n_tot << ")\n";
            return run->finish(kExitPass, "pass");
        }

        if (sub == spectrum) {
            const TreeSpec spec = resolve_tree(file, tree);
            run->config()["tree"] = tree_json(spec);
            const TreeIndex index(spec);
            const auto h = assemble_hamiltonian(spec, index);
            std::ostringstream ham;
            h.write_coordinate(ham);
            run->write("hamiltonian.txt", ham.str());
            const auto pairs = eig_dense(h);
            run->write("spectrum.csv", csv_of([&](std::ostream &os) {
                           CsvWriter csv(os, {"index", "E_re", "E_im", "residual"});
                           for (std::size_t i = 0; i < pairs.size(); ++i)
                               csv.row(static_cast<std::int64_t>(i), pairs[i].value.real(), pairs[i].value.imag(),
                                       pairs[i].residual);
                       }));
            svg::Plot p{"spectrum", "Re E", "Im E", {}};
            auto s = figures::markers("", svg::kBlue);
            for (const auto &e : pairs) {
                s.x.push_back(e.value.real());
                s.y.push_back(e.value.imag());
            }
            p.series = {s};
            run->plot("spectrum", {p});
            return run->finish(kExitPass, "pass");
        }

        if (sub == chain || sub == current) {
            GridFlags gf = sub == chain ? grid : grid_current;
            CLI::Option **opts = sub == chain ? grid_opts : cur_opts;
            gf.N = static_cast<int>(pick<std::int64_t>(opts[0], gf.N, file.integer("chain.N")));
            gf.gt_min = pick<double>(opts[1], gf.gt_min, file.number("chain.gt_min"));
            gf.gt_max = pick<double>(opts[2], gf.gt_max, file.number("chain.gt_max"));
            gf.gt_step = pick<double>(opts[3], gf.gt_step, file.number("chain.gt_step"));
            if (gf.N < 1) throw ConfigError("chain N must be >= 1");
            run->config()["chain"] = {{"N", gf.N}, {"gt_min", gf.gt_min}, {"gt_max", gf.gt_max}, {"gt_step", gf.gt_step}};
            std::vector<double> gts;
            for (double x : uniform_grid(gf.gt_min, gf.gt_max, gf.gt_step))
                if (std::abs(x - exceptional_point(gf.N)) > 1e-6) gts.push_back(x);
            if (sub == chain) {
                run->write("secular_roots.csv", csv_of([&](std::ostream &os) { write_secular_table(os, gf.N, gts); }));
            } else {
                const auto sweep = current_sweep(gf.N, gts);
                run->write("current_sweep.csv", csv_of([&](std::ostream &os) { write_current_sweep(os, sweep); }));
                run->write("current_profiles.csv", csv_of([&](std::ostream &os) { write_current_profiles(os, sweep); }));
            }
            return run->finish(kExitPass, "pass");
        }

        if (sub == ens) {
            RandomChainSpec spec;
            spec.n_base = pick<double>(nb_opt, rnd.n_base, file.number("random.n_base"));
            spec.N = static_cast<int>(pick<std::int64_t>(rn_opt, rnd.N, file.integer("random.N")));
            spec.master_seed = g.seed;
            spec.antithetic = pick<bool>(anti_opt, rnd.antithetic, file.boolean("random.antithetic"));
            const auto deltas = pick_list(delta_opt, rnd.deltas, file.array("random.deltas"), file.number("random.delta"));
            const auto samples = static_cast<std::size_t>(
                pick<std::int64_t>(samples_opt, static_cast<std::int64_t>(rnd.samples), file.integer("random.samples")));
            spec.grid = uniform_grid(file.number("random.grid_min").value_or(0.5),
                                     file.number("random.grid_max").value_or(2.0),
                                     file.number("random.grid_step").value_or(5e-3));
            spec.validate();
            for (double d : deltas)
                if (!(d >= 0 && d < 1)) throw ConfigError("delta must lie in [0, 1)");
            if (samples < 2) throw ConfigError("samples must be >= 2");
            run->config()["random"] = {{"n_base", spec.n_base}, {"N", spec.N},         {"deltas", deltas},
                                       {"samples", samples},    {"grid_size", spec.grid.size()}, {"antithetic", spec.antithetic}};
            std::vector<SampleSummary> rows;
            const auto stats = ensemble_landmarks(spec, samples, deltas, g.threads, &rows);
            run->write("samples.csv", csv_of([&](std::ostream &os) { write_sample_table(os, rows); }));
            run->write("ensemble.csv", csv_of([&](std::ostream &os) { write_ensemble_table(os, stats); }));
            std::size_t excluded = 0;
            for (const auto &s : stats) excluded += s.excluded;
            std::cout << "random-ensemble: " << rows.size() << " samples, " << excluded << " excluded\n";
            return run->finish(kExitPass, "pass");
        }

        if (sub == scatter) {
            const auto gammas = pick_list(g_opt, sc.gammas, file.array("scatter.gammas"), file.number("scatter.gamma"));
            const double e_min = pick<double>(emin_opt, sc.e_min, file.number("scatter.e_min"));
            const double e_max = pick<double>(emax_opt, sc.e_max, file.number("scatter.e_max"));
            const int points = static_cast<int>(pick<std::int64_t>(pts_opt, sc.points, file.integer("scatter.points")));
            const int lead = static_cast<int>(pick<std::int64_t>(lead_opt, sc.lead_length, file.integer("scatter.lead_length")));
            run->config()["scatter"] = {{"gammas", gammas}, {"e_min", e_min}, {"e_max", e_max}, {"points", points},
                                        {"lead_length", lead}};
            const auto energies = energy_grid(e_min, e_max, points);
            run->write("scatter.csv", csv_of([&](std::ostream &os) { write_scatter_table(os, energies, gammas, lead); }));
            svg::Plot p{"transmission", "E", "T", {}};
            const char *colors[] = {svg::kBlue, svg::kRed, svg::kGreen, svg::kOrange, svg::kGray};
            for (std::size_t i = 0; i < gammas.size(); ++i) {
                svg::Series s;
                s.label = "gamma = " + svg::detail::num(gammas[i]);
                s.color = colors[i % 5];
                for (double e : energies) {
                    s.x.push_back(e);
                    s.y.push_back(transmission({gammas[i], e, lead}));
                }
                p.series.push_back(s);
            }
            run->plot("scatter", {p});
            return run->finish(kExitPass, "pass");
        }

        if (sub == figure) {
            fig_opt.seed = g.seed;
            fig_opt.threads = g.threads;
            if (!fig_samples_opt->count() && file.integer("random.samples"))
                fig_opt.samples = static_cast<std::size_t>(*file.integer("random.samples"));
            const auto names = fig_name == "all" ? figures::names() : std::vector<std::string>{fig_name};
            run->config()["figure"] = {{"names", names}, {"samples", fig_opt.samples}, {"sample_id", fig_opt.sample_id}};
            for (const auto &name : names) {
                const auto data = figures::make(name, fig_opt);
                run->write(name + ".csv", data.csv);
                run->write(name + "_legend.json", data.legend.dump(2) + "\n");
                run->plot(name, data.plots);
            }
            return run->finish(kExitPass, "pass");
        }
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return run ? run->finish(kExitConfig, std::string("config error: ") + e.what()) : kExitConfig;
    } catch (const DomainError &e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return run ? run->finish(kExitConfig, std::string("invalid input: ") + e.what()) : kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return run ? run->finish(kExitFail, std::string("error: ") + e.what()) : kExitFail;
    }
    return kExitFail;
}
