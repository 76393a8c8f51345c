#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flgc/errors.hpp"
#include "flgc/runner.hpp"

namespace {

// "0.1,0.2,0.5", "log:lo:hi:n", "lin:lo:hi:n"; single values may use the
// exponent shorthand "2^-16".
std::vector<double> parse_double_spec(const std::string& spec, const std::string& flag) {
    auto parse_one = [&](const std::string& tok) {
        if (tok.rfind("2^", 0) == 0) {
            char* end = nullptr;
            const double e = std::strtod(tok.c_str() + 2, &end);
            if (end == tok.c_str() + 2 || *end != '\0')
                throw flgc::ConfigError(flag + ": bad exponent in '" + tok + "'");
            return std::pow(2.0, e);
        }
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0')
            throw flgc::ConfigError(flag + ": cannot parse '" + tok + "'");
        return v;
    };

    std::vector<std::string> toks;
    std::string cur;
    for (char c : spec + ",") {
        if (c == ',') {
            if (!cur.empty()) toks.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    if (toks.empty()) throw flgc::ConfigError(flag + ": empty value");

    if (toks.size() == 1 &&
        (toks[0].rfind("log:", 0) == 0 || toks[0].rfind("lin:", 0) == 0)) {
        const bool log_spaced = toks[0][1] == 'o';
        std::vector<std::string> parts;
        std::string p;
        for (char c : toks[0].substr(4) + ":") {
            if (c == ':') {
                parts.push_back(p);
                p.clear();
            } else {
                p += c;
            }
        }
        if (parts.size() != 3) throw flgc::ConfigError(flag + ": expected lo:hi:n after prefix");
        const double lo = parse_one(parts[0]), hi = parse_one(parts[1]);
        const long n = std::strtol(parts[2].c_str(), nullptr, 10);
        if (n < 2) throw flgc::ConfigError(flag + ": need at least 2 grid points");
        if (log_spaced && (lo <= 0.0 || hi <= 0.0))
            throw flgc::ConfigError(flag + ": log spacing needs positive endpoints");
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(n));
        for (long i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(n - 1);
            out.push_back(log_spaced ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
        }
        return out;
    }

    std::vector<double> out;
    out.reserve(toks.size());
    for (const std::string& t : toks) out.push_back(parse_one(t));
    return out;
}

// "0,1,2,5" or inclusive range "2:15".
std::vector<int> parse_int_spec(const std::string& spec, const std::string& flag) {
    auto parse_one = [&](const std::string& tok) {
        char* end = nullptr;
        const long v = std::strtol(tok.c_str(), &end, 10);
        if (end == tok.c_str() || *end != '\0')
            throw flgc::ConfigError(flag + ": cannot parse '" + tok + "'");
        return static_cast<int>(v);
    };
    if (spec.find(':') != std::string::npos && spec.find(',') == std::string::npos) {
        const auto colon = spec.find(':');
        const int lo = parse_one(spec.substr(0, colon));
        const int hi = parse_one(spec.substr(colon + 1));
        if (hi < lo) throw flgc::ConfigError(flag + ": descending range " + spec);
        std::vector<int> out;
        for (int v = lo; v <= hi; ++v) out.push_back(v);
        return out;
    }
    std::vector<int> out;
    std::string cur;
    for (char c : spec + ",") {
        if (c == ',') {
            if (!cur.empty()) out.push_back(parse_one(cur));
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    if (out.empty()) throw flgc::ConfigError(flag + ": empty value");
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw flgc::ConfigError("cannot write " + path.string());
    out << content;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flgc — closed-form graph learning (classification, clustering, sweeps)"};
    app.get_formatter()->column_width(26);

    std::string task, scale = "minmax", noise = "both", out_dir = "out";
    std::string grid_lambda, grid_alpha, grid_steps, intensity;
    bool no_header = false, dump_affinity = false;
    flgc::RunConfig cfg;

    app.add_option("--task", task, "classify | cluster | sweep | robustness")
        ->required()
        ->check(CLI::IsMember({"classify", "cluster", "sweep", "robustness"}));
    app.add_option("--features", cfg.features_path, "CSV feature file")->required();
    app.add_option("--labels-col", cfg.label_column,
                   "label column: header name or index (negative from end); '' = none");
    app.add_flag("--no-header", no_header, "feature file has no header row");
    app.add_option("--name", cfg.dataset_name, "dataset name for records (default: file stem)");
    app.add_option("--scale", scale, "feature scaling: minmax | none")
        ->check(CLI::IsMember({"minmax", "none"}));
    app.add_option("--knn", cfg.knn_k, "k for the k-NN graph; 0 = floor(N/(5*classes))");
    app.add_option("--edge-list", cfg.edge_list_path, "edge list file (u v [w] per line)");
    app.add_option("--nodes", cfg.node_count, "node count for --edge-list");
    app.add_option("--lambda", cfg.lambda, "ridge strength");
    app.add_option("--alpha", cfg.alpha, "initial-residual weight in [0,1]");
    app.add_option("--steps", cfg.steps, "propagation steps K");
    app.add_option("--grid-lambda", grid_lambda, "lambda grid: list, log:lo:hi:n, lin:lo:hi:n");
    app.add_option("--grid-alpha", grid_alpha, "alpha grid: list or lin:lo:hi:n");
    app.add_option("--grid-steps", grid_steps, "K grid: list or lo:hi");
    app.add_option("--fraction", cfg.labeled_fraction, "labeled fraction per class");
    app.add_option("--per-class-min", cfg.per_class_min, "minimum labeled nodes per class");
    app.add_option("--split-file", cfg.split_file,
                   "JSON with fixed {labeled, validation, test} ids");
    app.add_option("--repeats", cfg.repeats, "number of repeated splits (0 = task default)");
    app.add_option("--seed", cfg.seed, "base RNG seed");
    app.add_option("--clusters", cfg.clusters, "cluster count (0 = class count)");
    app.add_option("--noise", noise, "robustness noise: gaussian | saltpepper | both")
        ->check(CLI::IsMember({"gaussian", "saltpepper", "both"}));
    app.add_option("--intensity", intensity, "noise intensities, e.g. 0.01,0.05,0.1,0.2");
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--dump-affinity", dump_affinity, "also write the affinity matrix (cluster)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        cfg.has_header = !no_header;
        cfg.scaling = scale == "minmax" ? flgc::Scaling::minmax : flgc::Scaling::none;
        if (noise == "gaussian") cfg.noise = flgc::NoiseKind::gaussian;
        else if (noise == "saltpepper") cfg.noise = flgc::NoiseKind::salt_pepper;
        else cfg.noise = flgc::NoiseKind::none;  // robustness runs both kinds
        if (!grid_lambda.empty()) cfg.grid_lambdas = parse_double_spec(grid_lambda, "--grid-lambda");
        if (!grid_alpha.empty()) cfg.grid_alphas = parse_double_spec(grid_alpha, "--grid-alpha");
        if (!grid_steps.empty()) cfg.grid_steps = parse_int_spec(grid_steps, "--grid-steps");
        if (!intensity.empty()) cfg.intensities = parse_double_spec(intensity, "--intensity");
        if (!cfg.edge_list_path.empty() && cfg.node_count <= 0)
            throw flgc::ConfigError("--edge-list requires --nodes");

        const std::filesystem::path out_path(out_dir);
        std::filesystem::create_directories(out_path);

        if (task == "classify") {
            cfg.task = flgc::TaskKind::classify;
            const flgc::ClassifyOutput out = flgc::run_classify(cfg);
            write_file(out_path / "records.jsonl", out.records_jsonl());
            write_file(out_path / "records.csv", out.records_csv());
            std::printf("classify %s: %zu run(s), lambda=%g alpha=%g K=%d\n", out.dataset.c_str(),
                        out.runs.size(), out.chosen.lambda, out.chosen.alpha, out.chosen.steps);
            if (out.tuned)
                std::printf("  mean validation accuracy %.4f\n", out.chosen.validation_accuracy);
            std::printf("  test accuracy %.4f +/- %.4f\n", out.mean_test_accuracy,
                        out.std_test_accuracy);
        } else if (task == "cluster") {
            cfg.task = flgc::TaskKind::cluster;
            const flgc::ClusterOutput out = flgc::run_cluster(cfg);
            write_file(out_path / "records.jsonl", out.records_jsonl());
            write_file(out_path / "assignments.csv", out.assignment_csv());
            if (dump_affinity) write_file(out_path / "affinity.csv", out.affinity_csv());
            std::printf("cluster %s: C=%d lambda=%g alpha=%g K=%d\n", out.dataset.c_str(),
                        out.clusters, out.lambda, out.alpha, out.steps);
            if (out.scored) std::printf("  ACC %.4f  NMI %.4f\n", out.acc, out.nmi);
        } else if (task == "sweep") {
            cfg.task = flgc::TaskKind::sweep;
            const flgc::SweepOutput out = flgc::run_sweep(cfg);
            write_file(out_path / "records.jsonl", out.records_jsonl());
            write_file(out_path / "sweep.csv", out.csv());
            std::printf("sweep %s: %zu cell(s), lambda=%g, %d run(s) each\n", out.dataset.c_str(),
                        out.rows.size(), out.lambda, out.repeats);
        } else {
            cfg.task = flgc::TaskKind::robustness;
            const flgc::RobustnessOutput out = flgc::run_robustness(cfg);
            write_file(out_path / "records.jsonl", out.records_jsonl());
            write_file(out_path / "robustness.csv", out.csv());
            std::printf("robustness %s: %zu cell(s)\n", out.dataset.c_str(), out.rows.size());
            for (const flgc::RobustnessRow& r : out.rows)
                std::printf("  %-11s %5.3g  ACC %.4f +/- %.4f  NMI %.4f +/- %.4f\n",
                            flgc::to_string(r.noise), r.intensity, r.mean_acc, r.std_acc,
                            r.mean_nmi, r.std_nmi);
        }
        return 0;
    } catch (const flgc::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const flgc::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected failure: %s\n", e.what());
        return 3;
    }
}
