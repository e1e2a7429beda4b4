#include "consist/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "consist/evaluate.hpp"
#include "consist/ingest.hpp"
#include "consist/manifest.hpp"
#include "consist/pipeline.hpp"
#include "consist/svg.hpp"

namespace consist::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct DatasetArgs {
    std::string dataset = "csv";  // ml100k | ml1m | csv
    std::string input;
    bool csv_header = false;
};

void add_dataset_flags(CLI::App* cmd, DatasetArgs& args) {
    cmd->add_option("--dataset", args.dataset, "Dataset kind: ml100k, ml1m, or csv")
        ->check(CLI::IsMember({"ml100k", "ml1m", "csv"}));
    cmd->add_option("--input", args.input,
                    "Data file; defaults to $RS_DATA_DIR/<dataset layout> for ml100k/ml1m");
    cmd->add_flag("--csv-header", args.csv_header, "Skip a header line in csv input");
}

fs::path resolve_input(const DatasetArgs& args) {
    if (!args.input.empty()) return args.input;
    const char* root = std::getenv("RS_DATA_DIR");
    if (root == nullptr) {
        throw ValidationError("no --input given and RS_DATA_DIR is unset");
    }
    if (args.dataset == "ml100k") return fs::path(root) / "ml-100k" / "u.data";
    if (args.dataset == "ml1m") return fs::path(root) / "ml-1m" / "ratings.dat";
    throw ValidationError("csv dataset requires --input");
}

LoadedRatings load_dataset(const DatasetArgs& args) {
    const fs::path path = resolve_input(args);
    if (args.dataset == "ml100k") return load_movielens_100k(path);
    if (args.dataset == "ml1m") return load_movielens_1m(path);
    return load_csv(path, args.csv_header);
}

Mode parse_mode(const std::string& name) {
    if (name == "plain") return Mode::plain;
    if (name == "sc") return Mode::sc;
    if (name == "uc") return Mode::uc;
    throw ValidationError("unknown mode '" + name + "'");
}

FillPolicy parse_fill(const std::string& name) {
    if (name == "item_mean") return FillPolicy::item_mean;
    if (name == "user_mean") return FillPolicy::user_mean;
    if (name == "global_mean") return FillPolicy::global_mean;
    throw ValidationError("unknown fill policy '" + name + "'");
}

// "5:50:5" inclusive range or "5,10,25" list.
std::vector<std::size_t> parse_ks(const std::string& spec) {
    auto parse_count = [&](const std::string& tok) {
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(tok, &pos);
        } catch (const std::exception&) {
            throw ValidationError("bad k value '" + tok + "' in '" + spec + "'");
        }
        if (pos != tok.size() || v == 0) {
            throw ValidationError("bad k value '" + tok + "' in '" + spec + "'");
        }
        return static_cast<std::size_t>(v);
    };
    std::vector<std::size_t> ks;
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::size_t pos = 0;
        while (true) {
            const std::size_t next = spec.find(':', pos);
            parts.push_back(spec.substr(pos, next - pos));
            if (next == std::string::npos) break;
            pos = next + 1;
        }
        if (parts.size() != 3) throw ValidationError("range must be start:stop:step");
        const std::size_t start = parse_count(parts[0]);
        const std::size_t stop = parse_count(parts[1]);
        const std::size_t step = parse_count(parts[2]);
        if (stop < start) throw ValidationError("range stop below start in '" + spec + "'");
        for (std::size_t k = start; k <= stop; k += step) ks.push_back(k);
        return ks;
    }
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = spec.find(',', pos);
        ks.push_back(parse_count(spec.substr(pos, next - pos)));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return ks;
}

// "off", "auto" (dataset range), or "min:max".
std::optional<RatingRange> parse_clamp(const std::string& spec, const RatingsMatrix& m) {
    if (spec == "off") return std::nullopt;
    if (spec == "auto") return m.rating_range();
    const std::size_t colon = spec.find(':');
    if (colon == std::string::npos) {
        throw ValidationError("clamp must be off, auto, or min:max");
    }
    try {
        RatingRange range{std::stod(spec.substr(0, colon)), std::stod(spec.substr(colon + 1))};
        if (!(range.min < range.max)) throw ValidationError("clamp needs min < max");
        return range;
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception&) {
        throw ValidationError("bad clamp '" + spec + "'");
    }
}

ordered_json clamp_json(const std::optional<RatingRange>& clamp) {
    if (!clamp) return "off";
    return ordered_json::array({clamp->min, clamp->max});
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("failed writing " + path.string());
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_dense_csv(const DenseMatrix& d, const fs::path& path) {
    std::string out;
    for (std::size_t i = 0; i < d.rows(); ++i) {
        for (std::size_t j = 0; j < d.cols(); ++j) {
            if (j > 0) out += ',';
            out += format_value(d(i, j));
        }
        out += '\n';
    }
    write_text(path, out);
}

RunManifest make_manifest(const std::string& command, const ordered_json& config,
                          std::uint64_t seed, const RatingsMatrix& dataset) {
    RunManifest manifest;
    manifest.command = command;
    manifest.resolved_config = config.dump();
    manifest.seed = seed;
    manifest.dataset_entries = dataset.n_observed();
    manifest.dataset_checksum = dataset_checksum(dataset);
    return manifest;
}

struct CanonicalizeArgs {
    DatasetArgs data;
    std::string mode = "sc";
    double tol = 1e-10;
    std::size_t max_iter = 10'000;
    std::string out_dir = "out";
};

int run_canonicalize(const CanonicalizeArgs& args) {
    const LoadedRatings loaded = load_dataset(args.data);
    const CanonicalOptions opts{args.tol, args.max_iter};
    fs::create_directories(args.out_dir);
    const fs::path dir(args.out_dir);

    std::string vectors_csv = "axis,id,value\n";
    std::size_t iterations = 0;
    double residual = 0.0;
    if (args.mode == "sc") {
        const auto result = sc_canonicalize(loaded.matrix, opts);
        write_dense_csv(result.canonical, dir / "canonical.csv");
        for (std::size_t i = 0; i < result.transform.row_shift.size(); ++i) {
            vectors_csv += "row," + loaded.ids.user_ids[i] + ',' +
                           format_value(result.transform.row_shift[i]) + '\n';
        }
        for (std::size_t j = 0; j < result.transform.col_shift.size(); ++j) {
            vectors_csv += "col," + loaded.ids.item_ids[j] + ',' +
                           format_value(result.transform.col_shift[j]) + '\n';
        }
        write_text(dir / "shifts.csv", vectors_csv);
        iterations = result.iterations;
        residual = result.residual;
    } else {
        const auto result = uc_canonicalize(loaded.matrix, opts);
        write_dense_csv(result.canonical, dir / "canonical.csv");
        for (std::size_t i = 0; i < result.transform.row_scale.size(); ++i) {
            vectors_csv += "row," + loaded.ids.user_ids[i] + ',' +
                           format_value(result.transform.row_scale[i]) + '\n';
        }
        for (std::size_t j = 0; j < result.transform.col_scale.size(); ++j) {
            vectors_csv += "col," + loaded.ids.item_ids[j] + ',' +
                           format_value(result.transform.col_scale[j]) + '\n';
        }
        write_text(dir / "scales.csv", vectors_csv);
        iterations = result.iterations;
        residual = result.residual;
    }

    ordered_json diag;
    diag["mode"] = args.mode;
    diag["iterations"] = iterations;
    diag["residual"] = residual;
    write_text(dir / "diagnostics.json", diag.dump(2) + "\n");

    ordered_json config;
    config["mode"] = args.mode;
    config["tol"] = args.tol;
    config["max_iter"] = args.max_iter;
    config["dataset"] = args.data.dataset;
    write_manifest(make_manifest("canonicalize", config, 0, loaded.matrix),
                   dir / "manifest.json");
    std::printf("canonicalize: %s converged in %zu iterations, residual %.3g\n",
                args.mode.c_str(), iterations, residual);
    return 0;
}

struct CompleteArgs {
    DatasetArgs data;
    std::string mode = "plain";
    std::size_t k = 25;
    std::string fill = "item_mean";
    std::string clamp = "auto";
    std::size_t refine = 0;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
};

int run_complete(const CompleteArgs& args) {
    const LoadedRatings loaded = load_dataset(args.data);
    PipelineConfig cfg;
    cfg.mode = parse_mode(args.mode);
    cfg.k = args.k;
    cfg.fill_policy = parse_fill(args.fill);
    cfg.clamp = parse_clamp(args.clamp, loaded.matrix);
    cfg.refine_iters = args.refine;
    cfg.seed = args.seed;

    const Prediction pred = complete_svd(loaded.matrix, cfg);
    fs::create_directories(args.out_dir);
    const fs::path dir(args.out_dir);
    write_dense_csv(pred.full, dir / "predictions.csv");

    ordered_json config;
    config["mode"] = args.mode;
    config["k"] = args.k;
    config["fill"] = args.fill;
    config["clamp"] = clamp_json(cfg.clamp);
    config["refine"] = args.refine;
    config["dataset"] = args.data.dataset;
    write_manifest(make_manifest("complete", config, args.seed, loaded.matrix),
                   dir / "manifest.json");
    if (pred.diagnostics.canonicalized) {
        std::printf("complete: mode=%s k=%zu canonical iterations=%zu residual=%.3g\n",
                    args.mode.c_str(), args.k, pred.diagnostics.canonical_iterations,
                    pred.diagnostics.canonical_residual);
    } else {
        std::printf("complete: mode=%s k=%zu\n", args.mode.c_str(), args.k);
    }
    return 0;
}

struct SweepArgs {
    DatasetArgs data;
    std::string ks = "5:50:5";
    std::string modes = "plain,sc,uc";
    double ratio = 0.8;
    std::string clamp = "auto";
    std::size_t refine = 0;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
};

int run_sweep(const SweepArgs& args) {
    const LoadedRatings loaded = load_dataset(args.data);
    const std::vector<std::size_t> ks = parse_ks(args.ks);

    std::vector<Mode> modes;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = args.modes.find(',', pos);
        modes.push_back(parse_mode(args.modes.substr(pos, next - pos)));
        if (next == std::string::npos) break;
        pos = next + 1;
    }

    PipelineConfig cfg;
    cfg.clamp = parse_clamp(args.clamp, loaded.matrix);
    cfg.refine_iters = args.refine;
    cfg.seed = args.seed;

    const SweepReport report = sweep(loaded.matrix, ks, modes, cfg, args.ratio);

    fs::create_directories(args.out_dir);
    const fs::path dir(args.out_dir);
    write_text(dir / "sweep.csv", sweep_csv(report));

    const char* colors[] = {"#d62728", "#1f77b4", "#2ca02c"};
    auto make_chart = [&](bool use_rmse) {
        std::vector<SvgSeries> series;
        for (Mode mode : {Mode::plain, Mode::sc, Mode::uc}) {
            SvgSeries s;
            s.label = to_string(mode);
            s.color = colors[static_cast<int>(mode)];
            for (const auto& r : report.reports) {
                if (r.mode != mode) continue;
                s.points.emplace_back(static_cast<double>(r.k), use_rmse ? r.rmse : r.mae);
            }
            if (!s.points.empty()) series.push_back(std::move(s));
        }
        const std::string metric = use_rmse ? "RMSE" : "MAE";
        return render_line_chart(metric + " vs k", "k (retained singular values)", metric,
                                 series);
    };
    write_text(dir / "rmse.svg", make_chart(true));
    write_text(dir / "mae.svg", make_chart(false));

    ordered_json config;
    config["ks"] = ks;
    config["modes"] = args.modes;
    config["ratio"] = args.ratio;
    config["clamp"] = clamp_json(cfg.clamp);
    config["refine"] = args.refine;
    config["dataset"] = args.data.dataset;
    write_manifest(make_manifest("sweep", config, args.seed, loaded.matrix),
                   dir / "manifest.json");

    for (const auto& a : report.argmins) {
        std::printf("sweep: mode=%-5s best rmse %.6f at k=%zu, best mae %.6f at k=%zu\n",
                    to_string(a.mode), a.rmse, a.k_rmse, a.mae, a.k_mae);
    }
    return 0;
}

struct AttackArgs {
    DatasetArgs data;
    std::string user;
    std::optional<double> scale;
    std::optional<double> shift;
    std::string mode = "uc";
    std::size_t k = 25;
    std::size_t top_n = 10;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
};

int run_attack(const AttackArgs& args) {
    if (args.scale.has_value() == args.shift.has_value()) {
        throw ValidationError("exactly one of --scale and --shift is required");
    }
    const LoadedRatings loaded = load_dataset(args.data);
    const auto user = find_user(loaded.ids, args.user);
    if (!user) throw ValidationError("unknown user '" + args.user + "'");

    PipelineConfig cfg;
    cfg.mode = parse_mode(args.mode);
    cfg.k = args.k;
    cfg.seed = args.seed;
    cfg.clamp = std::nullopt;  // attack semantics require raw predictions

    AttackTransform transform;
    if (args.scale) {
        transform = {AttackTransform::Kind::scale, *args.scale};
    } else {
        transform = {AttackTransform::Kind::shift, *args.shift};
    }
    const AttackReport report =
        attack(loaded.matrix, *user, transform, cfg, AttackOptions{args.top_n});

    ordered_json j;
    j["attacked_user"] = args.user;
    j["transform"] = {{"kind", args.scale ? "scale" : "shift"}, {"value", transform.value}};
    j["mode"] = args.mode;
    j["k"] = args.k;
    j["max_abs_delta_others"] = report.max_abs_delta_others;
    j["topn_changes"] = report.topn_changes;
    j["top_n"] = args.top_n;

    fs::create_directories(args.out_dir);
    const fs::path dir(args.out_dir);
    write_text(dir / "attack.json", j.dump(2) + "\n");

    ordered_json config;
    config["user"] = args.user;
    config["transform"] = j["transform"];
    config["mode"] = args.mode;
    config["k"] = args.k;
    config["top_n"] = args.top_n;
    config["dataset"] = args.data.dataset;
    write_manifest(make_manifest("attack", config, args.seed, loaded.matrix),
                   dir / "manifest.json");

    std::printf("attack summary\n");
    std::printf("  %-22s %s\n", "user", args.user.c_str());
    std::printf("  %-22s %s %.6g\n", "transform", args.scale ? "scale" : "shift",
                transform.value);
    std::printf("  %-22s %s\n", "mode", args.mode.c_str());
    std::printf("  %-22s %zu\n", "k", args.k);
    std::printf("  %-22s %.6g\n", "max |delta| others", report.max_abs_delta_others);
    std::printf("  %-22s %zu\n", "top-N lists changed", report.topn_changes);
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Consistency-constrained matrix completion toolkit"};
    app.require_subcommand(1);

    CanonicalizeArgs canon_args;
    CLI::App* canon = app.add_subcommand("canonicalize",
                                         "Write the canonical form and transform vectors");
    add_dataset_flags(canon, canon_args.data);
    canon->add_option("--mode", canon_args.mode, "sc or uc")
        ->check(CLI::IsMember({"sc", "uc"}));
    canon->add_option("--tol", canon_args.tol, "Constraint tolerance");
    canon->add_option("--max-iter", canon_args.max_iter, "Iteration cap");
    canon->add_option("--out-dir", canon_args.out_dir, "Output directory");

    CompleteArgs complete_args;
    CLI::App* completec = app.add_subcommand("complete", "Predict every missing rating");
    add_dataset_flags(completec, complete_args.data);
    completec->add_option("--mode", complete_args.mode, "plain, sc, or uc");
    completec->add_option("--k", complete_args.k, "Retained singular values");
    completec->add_option("--fill", complete_args.fill,
                          "Plain-mode fill: item_mean, user_mean, global_mean");
    completec->add_option("--clamp", complete_args.clamp, "off, auto, or min:max");
    completec->add_option("--refine", complete_args.refine, "Refinement iterations");
    completec->add_option("--seed", complete_args.seed, "RNG seed");
    completec->add_option("--out-dir", complete_args.out_dir, "Output directory");

    SweepArgs sweep_args;
    CLI::App* sweepc = app.add_subcommand("sweep", "RMSE/MAE over k for each mode");
    add_dataset_flags(sweepc, sweep_args.data);
    sweepc->add_option("--ks", sweep_args.ks, "k values: start:stop:step or comma list");
    sweepc->add_option("--modes", sweep_args.modes, "Comma list from plain,sc,uc");
    sweepc->add_option("--ratio", sweep_args.ratio, "Train fraction");
    sweepc->add_option("--clamp", sweep_args.clamp, "off, auto, or min:max");
    sweepc->add_option("--refine", sweep_args.refine, "Refinement iterations");
    sweepc->add_option("--seed", sweep_args.seed, "RNG seed");
    sweepc->add_option("--out-dir", sweep_args.out_dir, "Output directory");

    AttackArgs attack_args;
    CLI::App* attackc = app.add_subcommand("attack",
                                           "Rescale or shift one user and measure the blast radius");
    add_dataset_flags(attackc, attack_args.data);
    attackc->add_option("--user", attack_args.user, "Original user id")->required();
    double scale_value = 0.0, shift_value = 0.0;
    CLI::Option* scale_opt = attackc->add_option("--scale", scale_value, "Scale factor");
    CLI::Option* shift_opt = attackc->add_option("--shift", shift_value, "Shift delta");
    attackc->add_option("--mode", attack_args.mode, "plain, sc, or uc");
    attackc->add_option("--k", attack_args.k, "Retained singular values");
    attackc->add_option("--top-n", attack_args.top_n, "Length of ranked lists compared");
    attackc->add_option("--seed", attack_args.seed, "RNG seed");
    attackc->add_option("--out-dir", attack_args.out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (canon->parsed()) return run_canonicalize(canon_args);
        if (completec->parsed()) return run_complete(complete_args);
        if (sweepc->parsed()) return run_sweep(sweep_args);
        if (attackc->parsed()) {
            if (scale_opt->count() > 0) attack_args.scale = scale_value;
            if (shift_opt->count() > 0) attack_args.shift = shift_value;
            return run_attack(attack_args);
        }
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}

}  // namespace consist::cli
