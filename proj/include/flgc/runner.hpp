#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flgc/semi_supervised.hpp"

namespace flgc {

enum class TaskKind { classify, cluster, sweep, robustness };
enum class Scaling { minmax, none };
enum class NoiseKind { none, gaussian, salt_pepper };

const char* to_string(TaskKind task);
const char* to_string(Scaling scaling);
const char* to_string(NoiseKind noise);

// Everything a run needs, resolved from CLI flags (or built directly in
// tests). Validation happens inside the run_* entry points.
struct RunConfig {
    TaskKind task = TaskKind::classify;

    std::string features_path;
    std::string label_column = "-1";  // last column by default
    bool has_header = true;
    std::string dataset_name;  // empty: derived from the file name
    Scaling scaling = Scaling::minmax;

    // Graph source: k-NN on the (scaled) features unless an edge list is given.
    int knn_k = 0;  // 0 = auto: floor(N / (5 * class count)), at least 1
    std::string edge_list_path;
    int node_count = 0;  // required alongside edge_list_path

    double lambda = 1.0;
    double alpha = 0.0;
    int steps = 2;

    // Non-empty grids switch classify into tuned mode; sweep requires
    // grid_alphas/grid_steps.
    std::vector<double> grid_lambdas;
    std::vector<double> grid_alphas;
    std::vector<int> grid_steps;

    double labeled_fraction = 0.1;
    int per_class_min = 1;
    std::string split_file;  // fixed ids instead of stratified sampling
    int repeats = 0;         // 0 = task default (classify/sweep: 30 kNN, 20 edge list; robustness: 5)
    std::uint64_t seed = 0;

    int clusters = 0;  // 0 = class count from the labels
    NoiseKind noise = NoiseKind::none;
    std::vector<double> intensities;
};

// --- classify ---------------------------------------------------------------

struct ClassifyRunRecord {
    int run = 0;
    std::uint64_t split_seed = 0;
    double validation_accuracy = -1.0;  // negative = not tuned, omitted from records
    double test_accuracy = 0.0;
};

struct ClassifyOutput {
    std::string dataset;
    Scaling scaling = Scaling::minmax;
    std::string graph;  // "knn:<k>" or "edge_list"
    std::uint64_t seed = 0;
    bool tuned = false;
    GridCell chosen;  // chosen.validation_accuracy = mean validation accuracy when tuned
    std::vector<ClassifyRunRecord> runs;
    double mean_test_accuracy = 0.0;
    double std_test_accuracy = 0.0;

    std::string records_jsonl() const;  // one line per run + one summary line
    std::string records_csv() const;
};

ClassifyOutput run_classify(const RunConfig& config);

// --- cluster ----------------------------------------------------------------

struct ClusterOutput {
    std::string dataset;
    Scaling scaling = Scaling::minmax;
    std::string graph;
    std::uint64_t seed = 0;
    double lambda = 0.0;
    double alpha = 0.0;
    int steps = 0;
    int clusters = 0;
    std::vector<int> assignment;
    bool scored = false;  // labels were available
    double acc = 0.0;
    double nmi = 0.0;
    DenseMatrix affinity;  // populated for dump/debug use

    std::string records_jsonl() const;
    std::string assignment_csv() const;
    std::string affinity_csv() const;
};

ClusterOutput run_cluster(const RunConfig& config);

// --- sweep ------------------------------------------------------------------

struct SweepRow {
    double alpha = 0.0;
    int steps = 0;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;
    double seconds = 0.0;  // cumulative propagation for this alpha up to K, plus fits
};

struct SweepOutput {
    std::string dataset;
    Scaling scaling = Scaling::minmax;
    std::string graph;
    std::uint64_t seed = 0;
    double lambda = 0.0;
    int repeats = 0;
    std::vector<SweepRow> rows;

    std::string records_jsonl() const;  // deterministic: no timing fields
    std::string csv() const;            // includes the timing column
};

SweepOutput run_sweep(const RunConfig& config);

// --- robustness -------------------------------------------------------------

struct RobustnessRow {
    NoiseKind noise = NoiseKind::none;
    double intensity = 0.0;
    double mean_acc = 0.0;
    double std_acc = 0.0;
    double mean_nmi = 0.0;
    double std_nmi = 0.0;
    int runs = 0;
};

struct RobustnessOutput {
    std::string dataset;
    Scaling scaling = Scaling::minmax;
    std::uint64_t seed = 0;
    double lambda = 0.0;
    double alpha = 0.0;
    int steps = 0;
    int clusters = 0;
    std::vector<RobustnessRow> rows;

    std::string records_jsonl() const;
    std::string csv() const;
};

RobustnessOutput run_robustness(const RunConfig& config);

}  // namespace flgc
