#pragma once

#include <cstddef>
#include <vector>

#include "flgc/dense_matrix.hpp"
#include "flgc/graph.hpp"
#include "flgc/propagation.hpp"

namespace flgc {

// The labeled portion of a node set: parallel arrays of node ids and class
// ids, plus the total number of classes.
struct LabeledSplit {
    std::vector<int> labeled_ids;
    std::vector<int> labels;
    int class_count = 0;
};

// Throws unless ids are distinct and in [0, node_count), labels match ids in
// length and lie in [0, class_count), and the split is non-empty.
void validate(const LabeledSplit& split, std::size_t node_count);

// N x C target matrix: one-hot rows for labeled nodes, all-zero rows
// elsewhere.
DenseMatrix build_targets(const LabeledSplit& split, std::size_t node_count);

struct ClassifierWeights {
    DenseMatrix weights;  // D x C
    double lambda = 0.0;
};

// Exact ridge solution of the masked least-squares problem: only labeled rows
// of the embedding enter the normal equations, so W = (H_L^T H_L + lambda I)^{-1} H_L^T Y_L.
ClassifierWeights fit(const DenseMatrix& embedding, const LabeledSplit& split, double lambda);

// Row-wise argmax of embedding * W; score ties resolve to the smaller class id.
std::vector<int> predict(const DenseMatrix& embedding, const ClassifierWeights& weights);

struct GridSpec {
    std::vector<double> lambdas;
    std::vector<double> alphas;
    std::vector<int> step_counts;
};

struct GridCell {
    double lambda = 0.0;
    double alpha = 0.0;
    int steps = 0;
    double validation_accuracy = 0.0;
};

struct GridSearchResult {
    GridCell best;
    std::vector<GridCell> table;  // one row per grid cell, fixed iteration order
};

// Evaluates every (lambda, alpha, steps) cell against the validation nodes.
// Embeddings are shared across lambda values and advanced incrementally in
// steps, so each (alpha, K) costs one propagation pass. Ties on validation
// accuracy prefer smaller K, then larger lambda, then smaller alpha.
GridSearchResult grid_search(const PropagationMatrix& p, const DenseMatrix& features,
                             const LabeledSplit& train, const std::vector<int>& validation_ids,
                             const std::vector<int>& validation_labels, const GridSpec& grid);

// Shared tie-break used wherever grid cells are compared.
bool cell_improves(const GridCell& candidate, const GridCell& incumbent);

}  // namespace flgc
