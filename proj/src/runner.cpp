#include "flgc/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "flgc/clustering.hpp"
#include "flgc/data_io.hpp"
#include "flgc/errors.hpp"
#include "flgc/metrics.hpp"
#include "flgc/rng.hpp"

namespace flgc {

using json = nlohmann::ordered_json;

const char* to_string(TaskKind task) {
    switch (task) {
        case TaskKind::classify: return "classify";
        case TaskKind::cluster: return "cluster";
        case TaskKind::sweep: return "sweep";
        case TaskKind::robustness: return "robustness";
    }
    return "?";
}

const char* to_string(Scaling scaling) {
    return scaling == Scaling::minmax ? "minmax" : "none";
}

const char* to_string(NoiseKind noise) {
    switch (noise) {
        case NoiseKind::none: return "none";
        case NoiseKind::gaussian: return "gaussian";
        case NoiseKind::salt_pepper: return "salt_pepper";
    }
    return "?";
}

namespace {

struct Prepared {
    Dataset dataset;
    DenseMatrix x;  // features after the configured scaling
    PropagationMatrix p;
    std::string graph_desc;
    int knn_k = 0;  // resolved value; 0 when an edge list was used
};

int resolve_knn_k(const RunConfig& config, std::size_t n, int class_count) {
    if (config.knn_k > 0) return config.knn_k;
    if (class_count < 1)
        throw ConfigError("auto k-NN needs a class count (labels or --clusters)");
    int k = static_cast<int>(n / (5 * static_cast<std::size_t>(class_count)));
    k = std::max(k, 1);
    k = std::min<int>(k, static_cast<int>(n) - 1);
    return k;
}

// Class count that drives the auto-k heuristic and (for cluster tasks) the
// segmentation.
int effective_cluster_count(const RunConfig& config, const Dataset& ds) {
    if (config.clusters > 0) return config.clusters;
    if (ds.has_labels()) return ds.class_count;
    throw ConfigError("cluster count unavailable: dataset has no labels and --clusters not set");
}

Prepared prepare(const RunConfig& config, bool build_graph = true) {
    if (config.features_path.empty()) throw ConfigError("no feature file given");
    Prepared out;
    out.dataset =
        load_csv(config.features_path, config.label_column, config.has_header, config.dataset_name);
    out.x = config.scaling == Scaling::minmax ? minmax_scale(out.dataset.features)
                                              : out.dataset.features;
    if (!build_graph) return out;

    if (!config.edge_list_path.empty()) {
        if (config.node_count != static_cast<int>(out.x.rows()))
            throw ConfigError("--nodes (" + std::to_string(config.node_count) +
                              ") disagrees with feature rows (" + std::to_string(out.x.rows()) +
                              ")");
        out.p = renormalize(load_edge_list(config.edge_list_path, config.node_count).adjacency);
        out.graph_desc = "edge_list";
    } else {
        out.knn_k = resolve_knn_k(config, out.x.rows(), effective_cluster_count(config, out.dataset));
        out.p = renormalize(knn_graph(out.x, out.knn_k));
        out.graph_desc = "knn:" + std::to_string(out.knn_k);
    }
    return out;
}

int default_repeats(const RunConfig& config) {
    if (config.repeats > 0) return config.repeats;
    if (config.task == TaskKind::robustness) return 5;
    return config.edge_list_path.empty() ? 30 : 20;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v, double mean) {
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(v.size()));
}

// Stratified 20% carve of the labeled set for validation (at least one node
// per class, and never a whole class).
struct Carve {
    LabeledSplit train;
    std::vector<int> validation_ids;
    std::vector<int> validation_labels;
};

Carve carve_validation(const LabeledSplit& labeled, std::uint64_t seed) {
    std::vector<std::vector<int>> by_class(static_cast<std::size_t>(labeled.class_count));
    for (std::size_t i = 0; i < labeled.labeled_ids.size(); ++i)
        by_class[static_cast<std::size_t>(labeled.labels[i])].push_back(labeled.labeled_ids[i]);

    Rng rng(seed);
    std::vector<char> to_validation;
    Carve out;
    out.train.class_count = labeled.class_count;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        std::vector<int>& ids = by_class[c];
        if (ids.empty()) continue;
        std::size_t take = static_cast<std::size_t>(
            std::ceil(0.2 * static_cast<double>(ids.size())));
        take = std::max<std::size_t>(take, 1);
        take = std::min(take, ids.size() - 1);  // keep at least one training node
        if (ids.size() == 1) take = 0;
        rng.shuffle(ids);
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (i < take) {
                out.validation_ids.push_back(ids[i]);
                out.validation_labels.push_back(static_cast<int>(c));
            } else {
                out.train.labeled_ids.push_back(ids[i]);
                out.train.labels.push_back(static_cast<int>(c));
            }
        }
    }
    if (out.validation_ids.empty())
        throw DegenerateInput("grid search: labeled set too small to carve validation nodes");
    return out;
}

std::vector<int> labels_at(const Dataset& ds, const std::vector<int>& ids) {
    std::vector<int> out;
    out.reserve(ids.size());
    for (int id : ids) {
        if (id < 0 || static_cast<std::size_t>(id) >= ds.labels.size())
            throw IndexOutOfRange("node id " + std::to_string(id) + " outside dataset");
        out.push_back(ds.labels[static_cast<std::size_t>(id)]);
    }
    return out;
}

LabeledSplit split_from_ids(const Dataset& ds, const std::vector<int>& ids) {
    LabeledSplit s;
    s.labeled_ids = ids;
    s.labels = labels_at(ds, ids);
    s.class_count = ds.class_count;
    return s;
}

GridSpec effective_grid(const RunConfig& config) {
    GridSpec g;
    g.lambdas = config.grid_lambdas.empty() ? std::vector<double>{config.lambda}
                                            : config.grid_lambdas;
    g.alphas = config.grid_alphas.empty() ? std::vector<double>{config.alpha} : config.grid_alphas;
    g.step_counts =
        config.grid_steps.empty() ? std::vector<int>{config.steps} : config.grid_steps;
    return g;
}

std::string format_csv_double(double v, int decimals = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string format_csv_param(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// classify

ClassifyOutput run_classify(const RunConfig& config) {
    const Prepared prep = prepare(config);
    if (!prep.dataset.has_labels()) throw ConfigError("classify: dataset has no labels");
    const bool tuned = !config.grid_lambdas.empty() || !config.grid_alphas.empty() ||
                       !config.grid_steps.empty();

    ClassifyOutput out;
    out.dataset = prep.dataset.name;
    out.scaling = config.scaling;
    out.graph = prep.graph_desc;
    out.seed = config.seed;
    out.tuned = tuned;

    if (!config.split_file.empty()) {
        // Fixed ids: one run, validation straight from the file.
        const FileSplit fs = load_split_file(config.split_file);
        const LabeledSplit train = split_from_ids(prep.dataset, fs.labeled);
        GridCell chosen{config.lambda, config.alpha, config.steps, -1.0};
        if (tuned) {
            if (fs.validation.empty())
                throw ConfigError("classify: grid search needs validation ids in the split file");
            const GridSearchResult gs =
                grid_search(prep.p, prep.x, train, fs.validation,
                            labels_at(prep.dataset, fs.validation), effective_grid(config));
            chosen = gs.best;
        }
        const DenseMatrix h =
            propagate(prep.p, prep.x, PropagationConfig{chosen.steps, chosen.alpha});
        const ClassifierWeights w = fit(h, train, chosen.lambda);
        const std::vector<int> pred = predict(select_rows(h, fs.test), w);
        const double acc = accuracy(pred, labels_at(prep.dataset, fs.test));

        out.chosen = chosen;
        out.runs.push_back(
            ClassifyRunRecord{0, config.seed, chosen.validation_accuracy, acc});
        out.mean_test_accuracy = acc;
        out.std_test_accuracy = 0.0;
        return out;
    }

    const int repeats = default_repeats(config);
    const SplitSpec base_spec{config.labeled_fraction, config.per_class_min, 0};

    std::vector<StratifiedSplit> splits;
    splits.reserve(static_cast<std::size_t>(repeats));
    for (int r = 0; r < repeats; ++r) {
        SplitSpec spec = base_spec;
        spec.seed = derive_seed(config.seed, static_cast<std::uint64_t>(r));
        splits.push_back(stratified_split(prep.dataset, spec));
    }

    GridCell chosen{config.lambda, config.alpha, config.steps, -1.0};
    std::vector<GridSearchResult> tables;
    std::size_t chosen_index = 0;
    if (tuned) {
        // Average each cell's validation accuracy over the repeats, then pick
        // a single cell for every run. A per-run pick would chase noise: at
        // desk scale the carved validation sets hold only a few nodes each.
        tables.reserve(static_cast<std::size_t>(repeats));
        const GridSpec grid = effective_grid(config);
        for (int r = 0; r < repeats; ++r) {
            const Carve carve = carve_validation(
                splits[static_cast<std::size_t>(r)].labeled,
                derive_seed(config.seed, static_cast<std::uint64_t>(r), 1));
            tables.push_back(grid_search(prep.p, prep.x, carve.train, carve.validation_ids,
                                         carve.validation_labels, grid));
        }
        const std::size_t cells = tables.front().table.size();
        bool have_best = false;
        GridCell best;
        for (std::size_t c = 0; c < cells; ++c) {
            GridCell cell = tables.front().table[c];
            double sum = 0.0;
            for (const GridSearchResult& t : tables) sum += t.table[c].validation_accuracy;
            cell.validation_accuracy = sum / static_cast<double>(repeats);
            if (!have_best || cell_improves(cell, best)) {
                best = cell;
                chosen_index = c;
                have_best = true;
            }
        }
        chosen = best;
    }
    out.chosen = chosen;

    // The embedding depends only on the chosen cell, not the split: propagate
    // once, refit per split on its full labeled set.
    const DenseMatrix h = propagate(prep.p, prep.x, PropagationConfig{chosen.steps, chosen.alpha});
    std::vector<double> accs;
    accs.reserve(static_cast<std::size_t>(repeats));
    for (int r = 0; r < repeats; ++r) {
        const StratifiedSplit& split = splits[static_cast<std::size_t>(r)];
        const ClassifierWeights w = fit(h, split.labeled, chosen.lambda);
        const std::vector<int> pred = predict(select_rows(h, split.unlabeled_ids), w);
        const double acc = accuracy(pred, labels_at(prep.dataset, split.unlabeled_ids));
        accs.push_back(acc);
        ClassifyRunRecord rec;
        rec.run = r;
        rec.split_seed = derive_seed(config.seed, static_cast<std::uint64_t>(r));
        rec.validation_accuracy =
            tuned ? tables[static_cast<std::size_t>(r)].table[chosen_index].validation_accuracy
                  : -1.0;
        rec.test_accuracy = acc;
        out.runs.push_back(rec);
    }
    out.mean_test_accuracy = mean_of(accs);
    out.std_test_accuracy = std_of(accs, out.mean_test_accuracy);
    return out;
}

std::string ClassifyOutput::records_jsonl() const {
    std::ostringstream os;
    for (const ClassifyRunRecord& r : runs) {
        json line;
        line["task"] = "classify";
        line["dataset"] = dataset;
        line["scale"] = to_string(scaling);
        line["graph"] = graph;
        line["seed"] = seed;
        line["run"] = r.run;
        line["split_seed"] = r.split_seed;
        line["lambda"] = chosen.lambda;
        line["alpha"] = chosen.alpha;
        line["steps"] = chosen.steps;
        if (r.validation_accuracy >= 0.0) line["val_acc"] = r.validation_accuracy;
        line["test_acc"] = r.test_accuracy;
        os << line.dump() << "\n";
    }
    json s;
    s["task"] = "classify";
    s["dataset"] = dataset;
    s["scale"] = to_string(scaling);
    s["graph"] = graph;
    s["seed"] = seed;
    s["summary"] = true;
    s["runs"] = runs.size();
    s["tuned"] = tuned;
    s["lambda"] = chosen.lambda;
    s["alpha"] = chosen.alpha;
    s["steps"] = chosen.steps;
    if (tuned) s["mean_val_acc"] = chosen.validation_accuracy;
    s["mean_test_acc"] = mean_test_accuracy;
    s["std_test_acc"] = std_test_accuracy;
    os << s.dump() << "\n";
    return os.str();
}

std::string ClassifyOutput::records_csv() const {
    std::ostringstream os;
    os << "run,split_seed,lambda,alpha,steps,val_acc,test_acc\n";
    for (const ClassifyRunRecord& r : runs) {
        os << r.run << "," << r.split_seed << "," << format_csv_param(chosen.lambda) << ","
           << format_csv_param(chosen.alpha) << "," << chosen.steps << ",";
        if (r.validation_accuracy >= 0.0) os << format_csv_double(r.validation_accuracy);
        os << "," << format_csv_double(r.test_accuracy) << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// cluster

ClusterOutput run_cluster(const RunConfig& config) {
    const Prepared prep = prepare(config);
    const int clusters = effective_cluster_count(config, prep.dataset);

    ClusterOutput out;
    out.dataset = prep.dataset.name;
    out.scaling = config.scaling;
    out.graph = prep.graph_desc;
    out.seed = config.seed;
    out.lambda = config.lambda;
    out.alpha = config.alpha;
    out.steps = config.steps;
    out.clusters = clusters;

    const DenseMatrix h = propagate(prep.p, prep.x, PropagationConfig{config.steps, config.alpha});
    const AffinityCoefficients coeffs = fit_coefficients(h, prep.x, config.lambda);
    out.affinity = build_affinity(coeffs.z);
    const ClusterAssignment assignment = spectral_segment(out.affinity, clusters, config.seed);
    out.assignment = assignment.labels;

    if (prep.dataset.has_labels()) {
        out.scored = true;
        out.acc = clustering_accuracy(out.assignment, prep.dataset.labels);
        out.nmi = normalized_mutual_information(out.assignment, prep.dataset.labels);
    }
    return out;
}

std::string ClusterOutput::records_jsonl() const {
    json line;
    line["task"] = "cluster";
    line["dataset"] = dataset;
    line["scale"] = to_string(scaling);
    line["graph"] = graph;
    line["seed"] = seed;
    line["lambda"] = lambda;
    line["alpha"] = alpha;
    line["steps"] = steps;
    line["clusters"] = clusters;
    if (scored) {
        line["acc"] = acc;
        line["nmi"] = nmi;
    }
    return line.dump() + "\n";
}

std::string ClusterOutput::assignment_csv() const {
    std::ostringstream os;
    os << "node_id,cluster_id\n";
    for (std::size_t i = 0; i < assignment.size(); ++i) os << i << "," << assignment[i] << "\n";
    return os.str();
}

std::string ClusterOutput::affinity_csv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < affinity.rows(); ++i) {
        const double* row = affinity.row_ptr(i);
        for (std::size_t j = 0; j < affinity.cols(); ++j) {
            if (j) os << ",";
            os << format_csv_param(row[j]);
        }
        os << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// sweep

SweepOutput run_sweep(const RunConfig& config) {
    const Prepared prep = prepare(config);
    if (!prep.dataset.has_labels()) throw ConfigError("sweep: dataset has no labels");
    if (config.grid_alphas.empty() || config.grid_steps.empty())
        throw EmptyGrid("sweep: needs --grid-alpha and --grid-steps");

    const int repeats = default_repeats(config);
    SweepOutput out;
    out.dataset = prep.dataset.name;
    out.scaling = config.scaling;
    out.graph = prep.graph_desc;
    out.seed = config.seed;
    out.lambda = config.lambda;
    out.repeats = repeats;

    std::vector<StratifiedSplit> splits;
    splits.reserve(static_cast<std::size_t>(repeats));
    for (int r = 0; r < repeats; ++r) {
        SplitSpec spec{config.labeled_fraction, config.per_class_min,
                       derive_seed(config.seed, static_cast<std::uint64_t>(r))};
        splits.push_back(stratified_split(prep.dataset, spec));
    }

    std::vector<int> ks = config.grid_steps;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    using clock = std::chrono::steady_clock;
    for (double alpha : config.grid_alphas) {
        validate(PropagationConfig{ks.front(), alpha});
        DenseMatrix h = prep.x;
        DenseMatrix scratch(h.rows(), h.cols());
        int done = 0;
        double propagation_seconds = 0.0;
        for (int k : ks) {
            const auto t0 = clock::now();
            propagate_steps(prep.p, h, scratch, prep.x, alpha, k - done);
            done = k;
            propagation_seconds += std::chrono::duration<double>(clock::now() - t0).count();

            const auto t1 = clock::now();
            std::vector<double> accs;
            accs.reserve(static_cast<std::size_t>(repeats));
            for (const StratifiedSplit& split : splits) {
                const ClassifierWeights w = fit(h, split.labeled, config.lambda);
                const std::vector<int> pred = predict(select_rows(h, split.unlabeled_ids), w);
                accs.push_back(accuracy(pred, labels_at(prep.dataset, split.unlabeled_ids)));
            }
            const double fit_seconds = std::chrono::duration<double>(clock::now() - t1).count();

            SweepRow row;
            row.alpha = alpha;
            row.steps = k;
            row.mean_accuracy = mean_of(accs);
            row.std_accuracy = std_of(accs, row.mean_accuracy);
            row.seconds = propagation_seconds + fit_seconds;
            out.rows.push_back(row);
        }
    }
    return out;
}

std::string SweepOutput::records_jsonl() const {
    std::ostringstream os;
    for (const SweepRow& r : rows) {
        json line;
        line["task"] = "sweep";
        line["dataset"] = dataset;
        line["scale"] = to_string(scaling);
        line["graph"] = graph;
        line["seed"] = seed;
        line["lambda"] = lambda;
        line["alpha"] = r.alpha;
        line["steps"] = r.steps;
        line["runs"] = repeats;
        line["mean_acc"] = r.mean_accuracy;
        line["std_acc"] = r.std_accuracy;
        os << line.dump() << "\n";
    }
    return os.str();
}

std::string SweepOutput::csv() const {
    std::ostringstream os;
    os << "alpha,steps,mean_acc,std_acc,seconds\n";
    for (const SweepRow& r : rows)
        os << format_csv_param(r.alpha) << "," << r.steps << ","
           << format_csv_double(r.mean_accuracy) << "," << format_csv_double(r.std_accuracy) << ","
           << format_csv_double(r.seconds) << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// robustness

RobustnessOutput run_robustness(const RunConfig& config) {
    const Prepared prep = prepare(config, /*build_graph=*/false);
    if (!prep.dataset.has_labels()) throw ConfigError("robustness: dataset has no labels");
    const int clusters = effective_cluster_count(config, prep.dataset);
    const std::vector<double> intensities =
        config.intensities.empty() ? std::vector<double>{0.01, 0.05, 0.1, 0.2}
                                   : config.intensities;
    std::vector<NoiseKind> kinds;
    if (config.noise == NoiseKind::none)
        kinds = {NoiseKind::gaussian, NoiseKind::salt_pepper};
    else
        kinds = {config.noise};

    const int repeats = default_repeats(config);
    RobustnessOutput out;
    out.dataset = prep.dataset.name;
    out.scaling = config.scaling;
    out.seed = config.seed;
    out.lambda = config.lambda;
    out.alpha = config.alpha;
    out.steps = config.steps;
    out.clusters = clusters;

    std::uint64_t cell = 0;
    for (NoiseKind kind : kinds) {
        for (double intensity : intensities) {
            std::vector<double> accs, nmis;
            for (int r = 0; r < repeats; ++r) {
                const std::uint64_t noise_seed =
                    derive_seed(config.seed, cell, static_cast<std::uint64_t>(r));
                const std::uint64_t kmeans_seed =
                    derive_seed(config.seed, cell, 0x10000ULL + static_cast<std::uint64_t>(r));
                const DenseMatrix noisy =
                    kind == NoiseKind::gaussian
                        ? add_gaussian_noise(prep.x, intensity, noise_seed)
                        : add_salt_pepper(prep.x, intensity, noise_seed);

                PropagationMatrix p;
                if (!config.edge_list_path.empty()) {
                    if (config.node_count != static_cast<int>(noisy.rows()))
                        throw ConfigError("--nodes disagrees with feature rows");
                    p = renormalize(
                        load_edge_list(config.edge_list_path, config.node_count).adjacency);
                } else {
                    const int k = resolve_knn_k(config, noisy.rows(), clusters);
                    p = renormalize(knn_graph(noisy, k));
                }
                const ClusterAssignment assignment =
                    cluster(p, noisy, PropagationConfig{config.steps, config.alpha}, config.lambda,
                            clusters, kmeans_seed);
                accs.push_back(clustering_accuracy(assignment.labels, prep.dataset.labels));
                nmis.push_back(
                    normalized_mutual_information(assignment.labels, prep.dataset.labels));
            }
            RobustnessRow row;
            row.noise = kind;
            row.intensity = intensity;
            row.mean_acc = mean_of(accs);
            row.std_acc = std_of(accs, row.mean_acc);
            row.mean_nmi = mean_of(nmis);
            row.std_nmi = std_of(nmis, row.mean_nmi);
            row.runs = repeats;
            out.rows.push_back(row);
            ++cell;
        }
    }
    return out;
}

std::string RobustnessOutput::records_jsonl() const {
    std::ostringstream os;
    for (const RobustnessRow& r : rows) {
        json line;
        line["task"] = "robustness";
        line["dataset"] = dataset;
        line["scale"] = to_string(scaling);
        line["seed"] = seed;
        line["lambda"] = lambda;
        line["alpha"] = alpha;
        line["steps"] = steps;
        line["clusters"] = clusters;
        line["noise"] = to_string(r.noise);
        line["intensity"] = r.intensity;
        line["runs"] = r.runs;
        line["mean_acc"] = r.mean_acc;
        line["std_acc"] = r.std_acc;
        line["mean_nmi"] = r.mean_nmi;
        line["std_nmi"] = r.std_nmi;
        os << line.dump() << "\n";
    }
    return os.str();
}

std::string RobustnessOutput::csv() const {
    std::ostringstream os;
    os << "noise,intensity,runs,mean_acc,std_acc,mean_nmi,std_nmi\n";
    for (const RobustnessRow& r : rows)
        os << to_string(r.noise) << "," << format_csv_param(r.intensity) << "," << r.runs << ","
           << format_csv_double(r.mean_acc) << "," << format_csv_double(r.std_acc) << ","
           << format_csv_double(r.mean_nmi) << "," << format_csv_double(r.std_nmi) << "\n";
    return os.str();
}

}  // namespace flgc
