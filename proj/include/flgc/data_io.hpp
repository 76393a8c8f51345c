#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flgc/dense_matrix.hpp"
#include "flgc/semi_supervised.hpp"

namespace flgc {

struct Dataset {
    std::string name;
    DenseMatrix features;                  // N x D
    std::vector<int> labels;               // empty when the source had no label column
    std::vector<std::string> class_names;  // class id -> original label string
    int class_count = 0;

    bool has_labels() const { return !labels.empty(); }
};

// Comma-separated file, one row per node. `label_column` selects the label
// field: a header name, or an integer index (negative counts from the end),
// or "" for a purely numeric feature file. String labels map to class ids in
// first-appearance order.
Dataset load_csv(const std::string& path, const std::string& label_column, bool has_header,
                 const std::string& dataset_name = "");

// Per-column min-max scaling onto [0,1]; constant columns collapse to 0.
DenseMatrix minmax_scale(const DenseMatrix& features);

struct SplitSpec {
    double labeled_fraction = 0.1;
    int per_class_min = 1;
    std::uint64_t seed = 0;
};

struct StratifiedSplit {
    LabeledSplit labeled;
    std::vector<int> unlabeled_ids;  // ascending
};

// Per class, labels max(per_class_min, ceil(fraction * class_size)) nodes
// chosen uniformly without replacement. Throws ClassTooSmall when a class
// cannot supply that many.
StratifiedSplit stratified_split(const Dataset& dataset, const SplitSpec& spec);

// Additive N(0, sigma2) noise, then clipping to [0,1]. sigma2 == 0 returns
// the input untouched (no clipping), so intensity 0 always means "clean".
DenseMatrix add_gaussian_noise(const DenseMatrix& features, double sigma2, std::uint64_t seed);

// Each entry is independently corrupted with probability p; a corrupted entry
// becomes 0 or 1 with equal probability. p == 0 returns the input untouched.
DenseMatrix add_salt_pepper(const DenseMatrix& features, double probability, std::uint64_t seed);

struct FileSplit {
    std::vector<int> labeled;
    std::vector<int> validation;
    std::vector<int> test;
};

// JSON file {"labeled": [...], "validation": [...], "test": [...]}.
FileSplit load_split_file(const std::string& path);

}  // namespace flgc
