#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "convexity/expansion.hpp"
#include "convexity/graph.hpp"
#include "convexity/graphlets.hpp"
#include "convexity/io.hpp"
#include "convexity/measures.hpp"
#include "convexity/random_models.hpp"
#include "convexity/report.hpp"
#include "convexity/stats.hpp"

namespace convexity::cli {

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string command;
    std::string input;
    std::string format = "edgelist"; // edgelist | pajek-arcs
    int runs = 100;
    int steps = 0;
    std::uint64_t seed = 42;
    std::string seed_mode = "uniform-random"; // uniform-random | most-central
    std::vector<double> c_values{1.0, 1.1};
    double core_threshold = 0.9;
    int checkpoint = 15;
    std::string null_model = "none"; // none | er | rewire | both
    std::string out_dir = "out";
    bool json = false;
    long long sample = 0; // graphlets: sample size for 4-node instances, 0 = exact
    std::vector<long long> prior_n;
    std::vector<double> prior_k;
};

namespace detail {

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return Rng::stream(seed, tag).next_u64();
}

inline std::string hex64(std::uint64_t x) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

inline std::string format_c(double c) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", c);
    return buf;
}

inline std::string config_string(const Options& o, std::uint64_t input_digest) {
    std::string s = "command=" + o.command + ";input_digest=" + hex64(input_digest) +
                    ";format=" + o.format + ";runs=" + std::to_string(o.runs) +
                    ";steps=" + std::to_string(o.steps) + ";seed=" + std::to_string(o.seed) +
                    ";seed_mode=" + o.seed_mode + ";c=";
    for (std::size_t i = 0; i < o.c_values.size(); ++i)
        s += (i ? "," : "") + format_c(o.c_values[i]);
    s += ";core_threshold=" + convexity::detail::format_double(o.core_threshold) +
         ";checkpoint=" + std::to_string(o.checkpoint) + ";null=" + o.null_model +
         ";sample=" + std::to_string(o.sample);
    for (std::size_t i = 0; i < o.prior_n.size(); ++i)
        s += ";pair=" + std::to_string(o.prior_n[i]) + ":" +
             convexity::detail::format_double(o.prior_k[i]);
    return s;
}

inline void stamp_meta(Table& t, const Options& o, std::uint64_t input_digest) {
    t.add_meta("command", o.command);
    t.add_meta("fingerprint", hex64(fnv1a64(config_string(o, input_digest))));
    t.add_meta("input_digest", hex64(input_digest));
    t.add_meta("rng_seed", std::to_string(o.seed));
    t.add_meta("runs", std::to_string(o.runs));
    t.add_meta("seed_mode", o.seed_mode);
}

inline SeedMode seed_mode_of(const Options& o) {
    if (o.seed_mode == "uniform-random") return SeedMode::UniformRandom;
    if (o.seed_mode == "most-central") return SeedMode::MostCentral;
    throw usage_error("unknown seed mode: " + o.seed_mode);
}

inline InputFormat format_of(const Options& o) {
    if (o.format == "edgelist") return InputFormat::EdgeList;
    if (o.format == "pajek-arcs") return InputFormat::PajekArcs;
    throw usage_error("unknown input format: " + o.format);
}

struct LoadedInput {
    IngestResult res;
    std::uint64_t digest = 0;
};

inline LoadedInput load_input(const Options& o, std::ostream& out) {
    if (o.input.empty()) throw usage_error(o.command + " requires --input");
    LoadedInput li;
    li.digest = fnv1a64_file(o.input);
    li.res = ingest(o.input, format_of(o));
    out << li.res.summary() << "\n";
    if (li.res.graph.node_count() < 3)
        throw std::runtime_error("graph too small: need at least 3 nodes");
    return li;
}

inline std::filesystem::path emit(const Table& t, const Options& o, std::ostream& out,
                                  const nlohmann::json* extra = nullptr) {
    std::filesystem::path path =
        std::filesystem::path(o.out_dir) / (o.command + (o.json ? ".json" : ".csv"));
    if (o.json) {
        nlohmann::json j = to_json(t);
        if (extra)
            for (auto it = extra->begin(); it != extra->end(); ++it) j[it.key()] = it.value();
        write_atomic(path, j.dump(2) + "\n");
    } else {
        write_atomic(path, to_csv(t));
    }
    out << "wrote " << path.string() << "\n";
    return path;
}

inline ExpansionConfig expansion_config(const Options& o, std::uint64_t tag) {
    ExpansionConfig cfg;
    cfg.runs = o.runs;
    cfg.max_steps = o.steps;
    cfg.seed_mode = seed_mode_of(o);
    cfg.rng_seed = derive_seed(o.seed, tag);
    cfg.record_membership_at = o.checkpoint;
    return cfg;
}

struct NullModels {
    std::optional<Graph> rewired;
    std::optional<Graph> er;
};

inline NullModels make_null_models(const Graph& g, const Options& o) {
    NullModels nm;
    bool want_rewire = o.null_model == "rewire" || o.null_model == "both";
    bool want_er = o.null_model == "er" || o.null_model == "both";
    if (!want_rewire && !want_er && o.null_model != "none")
        throw usage_error("unknown null model: " + o.null_model);
    if (want_rewire) {
        Rng rng(derive_seed(o.seed, 2));
        nm.rewired = rewire_preserving_degrees(g, rng);
    }
    if (want_er) {
        Rng rng(derive_seed(o.seed, 4));
        nm.er = gen_er_connected(g.node_count(), g.edge_count(), rng);
    }
    return nm;
}

inline Cell opt_cell(std::optional<double> v) {
    return v ? Cell(*v) : Cell(std::monostate{});
}

// ---- subcommands ----------------------------------------------------------

inline void cmd_stats(const Options& o, std::ostream& out) {
    auto li = load_input(o, out);
    auto st = graph_stats(li.res.graph);
    Table t;
    stamp_meta(t, o, li.digest);
    t.columns = {"n", "m", "avg_degree", "avg_clustering", "avg_geodesic", "mu"};
    t.rows.push_back({Cell(st.n), Cell(st.m), Cell(st.avg_degree), Cell(st.avg_clustering),
                      Cell(st.avg_geodesic), Cell(static_cast<long long>(st.mu))});
    emit(t, o, out);
}

inline void cmd_expand(const Options& o, std::ostream& out) {
    auto li = load_input(o, out);
    const Graph& g = li.res.graph;
    auto nm = make_null_models(g, o);

    Table t;
    stamp_meta(t, o, li.digest);
    t.columns = {"source", "t",      "t_rescaled", "mean_s", "s_lo",
                 "s_hi",   "mean_d", "d_lo",       "d_hi",   "runs"};

    auto add_source = [&](const std::string& name, const Graph& src, std::uint64_t tag,
                          double scale) {
        auto [traces, freq] = expand_ensemble(src, expansion_config(o, tag));
        (void)freq;
        auto curve = aggregate_curves(traces);
        for (std::size_t i = 0; i < curve.mean_s.size(); ++i) {
            double tt = static_cast<double>(i);
            t.rows.push_back({Cell(name), Cell(static_cast<long long>(i)), Cell(tt / scale),
                              Cell(curve.mean_s[i]), Cell(curve.lo_s[i]), Cell(curve.hi_s[i]),
                              Cell(curve.mean_d[i]), Cell(curve.lo_d[i]), Cell(curve.hi_d[i]),
                              Cell(static_cast<long long>(curve.runs_at[i]))});
        }
    };

    // networks rescale by their measured mean distance, generated graphs by
    // the analytic ln n / ln <k>
    auto st = graph_stats(g);
    add_source("network", g, 1, st.avg_geodesic);
    double analytic = local_convexity_threshold(g.node_count(), st.avg_degree);
    if (nm.rewired) add_source("rewired", *nm.rewired, 3, analytic);
    if (nm.er) add_source("er", *nm.er, 5, analytic);
    emit(t, o, out);
}

inline void cmd_measures(const Options& o, std::ostream& out) {
    auto li = load_input(o, out);
    const Graph& g = li.res.graph;
    auto nm = make_null_models(g, o);

    struct SourceMeasures {
        ConvexityMeasures m;
        bool present = false;
    };
    auto run_source = [&](const Graph& src, std::uint64_t tag) {
        auto [traces, freq] = expand_ensemble(src, expansion_config(o, tag));
        (void)freq;
        auto curve = aggregate_curves(traces);
        SourceMeasures sm;
        sm.m = compute_measures(traces, curve, src.node_count(), o.c_values);
        sm.present = true;
        return sm;
    };

    SourceMeasures network = run_source(g, 1);
    SourceMeasures rewired, er;
    if (nm.rewired) rewired = run_source(*nm.rewired, 3);
    if (nm.er) er = run_source(*nm.er, 5);

    CensusOptions copt;
    copt.mode = o.sample > 0 ? CensusMode::Sampled : CensusMode::Exact;
    copt.sample_size = o.sample;
    copt.rng_seed = derive_seed(o.seed, 6);
    auto cens = census(g, copt);
    auto probs = convex_probabilities(cens);

    auto st = graph_stats(g);
    std::optional<double> prior, threshold, expansion_s;
    if (g.node_count() >= 5 && st.avg_degree < g.node_count() - 1)
        prior = prior_overall(g.node_count(), st.avg_degree);
    if (st.avg_degree > 1.0) {
        threshold = local_convexity_threshold(g.node_count(), st.avg_degree);
        try {
            expansion_s = expansion_threshold(g.node_count(), st.avg_degree);
        } catch (const std::exception&) {
        }
    }

    Table t;
    stamp_meta(t, o, li.digest);
    std::vector<Cell> row;
    t.columns = {"n", "m", "avg_degree", "avg_geodesic"};
    row.insert(row.end(), {Cell(st.n), Cell(st.m), Cell(st.avg_degree), Cell(st.avg_geodesic)});
    auto push_triplet = [&](const std::string& base,
                            const std::function<Cell(const SourceMeasures&)>& get) {
        t.columns.push_back(base);
        row.push_back(network.present ? get(network) : Cell(std::monostate{}));
        t.columns.push_back(base + "_rewired");
        row.push_back(rewired.present ? get(rewired) : Cell(std::monostate{}));
        t.columns.push_back(base + "_er");
        row.push_back(er.present ? get(er) : Cell(std::monostate{}));
    };
    for (std::size_t ci = 0; ci < o.c_values.size(); ++ci)
        push_triplet("x_" + format_c(o.c_values[ci]), [ci](const SourceMeasures& sm) {
            return Cell(sm.m.x_c[ci].second);
        });
    push_triplet("l_1",
                 [](const SourceMeasures& sm) { return Cell(static_cast<long long>(sm.m.l_1)); });
    push_triplet("l_t",
                 [](const SourceMeasures& sm) { return Cell(static_cast<long long>(sm.m.l_t)); });
    push_triplet("t_prime_mean", [](const SourceMeasures& sm) {
        return std::isnan(sm.m.t_prime_mean) ? Cell(std::monostate{}) : Cell(sm.m.t_prime_mean);
    });
    t.columns.insert(t.columns.end(),
                     {"p_convex", "p_prior", "local_threshold", "expansion_threshold"});
    row.push_back(opt_cell(probs.overall));
    row.push_back(opt_cell(prior));
    row.push_back(opt_cell(threshold));
    row.push_back(opt_cell(expansion_s));
    t.rows.push_back(std::move(row));
    emit(t, o, out);
}

inline void cmd_graphlets(const Options& o, std::ostream& out) {
    auto li = load_input(o, out);
    const Graph& g = li.res.graph;
    CensusOptions copt;
    copt.mode = o.sample > 0 ? CensusMode::Sampled : CensusMode::Exact;
    copt.sample_size = o.sample;
    copt.rng_seed = derive_seed(o.seed, 6);
    auto cens = census(g, copt);
    auto probs = convex_probabilities(cens);

    long long n = g.node_count();
    double avg_degree = 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(n);
    double p = avg_degree / static_cast<double>(n - 1);
    std::optional<std::array<double, 9>> priors;
    std::optional<std::array<double, 9>> expected;
    if (n >= 5 && p > 0.0 && p < 1.0) {
        priors = prior_graphlet_convexity(n, p);
        expected = expected_graphlet_counts(n, p);
    }

    Table t;
    stamp_meta(t, o, li.digest);
    t.add_meta("mode", cens.mode == CensusMode::Exact ? "exact" : "sampled");
    t.add_meta("sample_size", std::to_string(cens.sample_size));
    if (probs.overall) t.add_meta("p_overall", convexity::detail::format_double(*probs.overall));
    if (priors) {
        double num = 0, den = 0;
        for (int i = 1; i < 9; ++i) {
            num += (*expected)[i] * (*priors)[i];
            den += (*expected)[i];
        }
        t.add_meta("p_overall_prior", convexity::detail::format_double(num / den));
    }
    t.columns = {"class", "size",     "edges",   "g",      "c",
                 "p",     "p_stderr", "g_prior", "p_prior"};
    for (int i = 0; i < 9; ++i) {
        const auto& cls = kGraphletClasses[i];
        bool sampled_class = cens.mode == CensusMode::Sampled && i >= 3 && !cls.clique;
        Cell c_cell = sampled_class && cens.sampled[i] == 0 && cens.induced[i] > 0
                          ? Cell(std::monostate{})
                          : Cell(cens.convex[i]);
        Cell se_cell(std::monostate{});
        if (sampled_class && cens.sampled[i] > 0 && probs.per_class[i]) {
            double f = *probs.per_class[i];
            se_cell = Cell(std::sqrt(f * (1 - f) / static_cast<double>(cens.sampled[i])));
        }
        t.rows.push_back({Cell("G" + std::to_string(i)), Cell(static_cast<long long>(cls.size)),
                          Cell(static_cast<long long>(cls.edges)), Cell(cens.induced[i]), c_cell,
                          opt_cell(probs.per_class[i]), se_cell,
                          expected ? Cell((*expected)[i]) : Cell(std::monostate{}),
                          priors ? Cell((*priors)[i]) : Cell(std::monostate{})});
    }
    emit(t, o, out);
}

inline void cmd_core(const Options& o, std::ostream& out) {
    auto li = load_input(o, out);
    const Graph& g = li.res.graph;
    auto [traces, freq] = expand_ensemble(g, expansion_config(o, 1));
    (void)traces;
    auto part = detect_c_core(freq, o.core_threshold);
    auto dens = partition_densities(g, part);
    auto cmp = compare_with_kcore(g, part);

    Table t;
    stamp_meta(t, o, li.digest);
    t.add_meta("checkpoint_step", std::to_string(o.checkpoint));
    t.add_meta("core_threshold", convexity::detail::format_double(o.core_threshold));
    t.add_meta("core_size", std::to_string(part.core.size()));
    t.add_meta("periphery_size", std::to_string(part.periphery.size()));
    auto permille = [](std::optional<double> v) {
        return v ? convexity::detail::format_double(*v * 1000.0) : std::string("undefined");
    };
    t.add_meta("density_core_core_permille", permille(dens.core_core));
    t.add_meta("density_core_periphery_permille", permille(dens.core_periphery));
    t.add_meta("density_periphery_periphery_permille", permille(dens.periphery_periphery));
    t.columns = {"k", "kcore_size", "intersection", "share_of_ccore", "share_of_kcore",
                 "jaccard"};
    for (const auto& row : cmp.rows)
        t.rows.push_back({Cell(static_cast<long long>(row.k)), Cell(row.kcore_size),
                          Cell(row.intersection), Cell(row.share_of_ccore),
                          Cell(row.share_of_kcore), Cell(row.jaccard)});

    nlohmann::json extra;
    extra["core_nodes"] = nlohmann::json::array();
    for (NodeId v : part.core.sorted_members()) extra["core_nodes"].push_back(g.label(v));
    emit(t, o, out, &extra);
}

inline void cmd_priors(const Options& o, std::ostream& out) {
    if (o.prior_n.empty() || o.prior_n.size() != o.prior_k.size())
        throw usage_error("priors requires matching --n and --k lists");
    Table t;
    stamp_meta(t, o, 0);
    t.columns = {"n", "k", "p", "p_prior", "local_threshold", "expansion_threshold"};
    for (int i = 0; i < 9; ++i) t.columns.push_back("ptilde_" + std::to_string(i));
    for (std::size_t i = 0; i < o.prior_n.size(); ++i) {
        long long n = o.prior_n[i];
        double k = o.prior_k[i];
        if (n < 5 || k <= 1.0 || k >= static_cast<double>(n - 1))
            throw usage_error("priors requires n >= 5 and 1 < k < n-1");
        double p = k / static_cast<double>(n - 1);
        std::vector<Cell> row{Cell(n), Cell(k), Cell(p), Cell(prior_overall(n, k)),
                              Cell(local_convexity_threshold(n, k))};
        try {
            row.push_back(Cell(expansion_threshold(n, k)));
        } catch (const std::exception&) {
            row.push_back(Cell(std::monostate{}));
        }
        auto priors = prior_graphlet_convexity(n, p);
        for (double v : priors) row.push_back(Cell(v));
        t.rows.push_back(std::move(row));
    }
    emit(t, o, out);
}

} // namespace detail

/// Parse arguments and run one subcommand. Returns the process exit code:
/// 0 on success, 1 on usage errors, 2 on data errors.
inline int run(std::vector<std::string> args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    Options o;
    CLI::App app{"graph convexity analysis"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* cmd, bool needs_input) {
        if (needs_input) {
            cmd->add_option("--input", o.input, "edge list file");
            cmd->add_option("--format", o.format, "edgelist | pajek-arcs");
        }
        cmd->add_option("--runs", o.runs, "ensemble size")->check(CLI::PositiveNumber);
        cmd->add_option("--steps", o.steps, "max expansion steps (0 = n-1)")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--seed", o.seed, "rng seed");
        cmd->add_option("--seed-mode", o.seed_mode, "uniform-random | most-central");
        cmd->add_option("--c", o.c_values, "c values for the growth measure");
        cmd->add_option("--core-threshold", o.core_threshold, "membership share for the core")
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--checkpoint", o.checkpoint, "membership recording step")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--null", o.null_model, "none | er | rewire | both");
        cmd->add_option("--out", o.out_dir, "output directory");
        cmd->add_flag("--json", o.json, "emit JSON instead of CSV");
        cmd->add_option("--sample", o.sample, "4-node census sample size (0 = exact)")
            ->check(CLI::NonNegativeNumber);
    };

    add_common(app.add_subcommand("stats", "basic graph statistics"), true);
    add_common(app.add_subcommand("expand", "convex growth curves"), true);
    add_common(app.add_subcommand("measures", "growth and census measures"), true);
    add_common(app.add_subcommand("graphlets", "census of 2..4-node subgraphs"), true);
    add_common(app.add_subcommand("core", "core-periphery split from growth"), true);
    auto* priors = app.add_subcommand("priors", "analytic values from n and <k>");
    priors->add_option("--n", o.prior_n, "node counts");
    priors->add_option("--k", o.prior_k, "average degrees");
    add_common(priors, false);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1; // normalize every parse failure to a usage error
    }

    o.command = app.get_subcommands().front()->get_name();
    try {
        if (o.command == "stats")
            detail::cmd_stats(o, out);
        else if (o.command == "expand")
            detail::cmd_expand(o, out);
        else if (o.command == "measures")
            detail::cmd_measures(o, out);
        else if (o.command == "graphlets")
            detail::cmd_graphlets(o, out);
        else if (o.command == "core")
            detail::cmd_core(o, out);
        else if (o.command == "priors")
            detail::cmd_priors(o, out);
    } catch (const usage_error& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

} // namespace convexity::cli
