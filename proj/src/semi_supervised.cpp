#include "flgc/semi_supervised.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "flgc/errors.hpp"
#include "flgc/metrics.hpp"
#include "flgc/numerics.hpp"

namespace flgc {

void validate(const LabeledSplit& split, std::size_t node_count) {
    if (split.labeled_ids.empty()) throw EmptyInput("LabeledSplit: no labeled nodes");
    if (split.labeled_ids.size() != split.labels.size())
        throw LengthMismatch("LabeledSplit: " + std::to_string(split.labeled_ids.size()) +
                             " ids vs " + std::to_string(split.labels.size()) + " labels");
    if (split.class_count < 1) throw ConfigError("LabeledSplit: class_count must be >= 1");
    std::unordered_set<int> seen;
    for (std::size_t i = 0; i < split.labeled_ids.size(); ++i) {
        const int id = split.labeled_ids[i];
        if (id < 0 || static_cast<std::size_t>(id) >= node_count)
            throw IndexOutOfRange("LabeledSplit: node id " + std::to_string(id) + " outside 0.." +
                                  std::to_string(node_count - 1));
        if (!seen.insert(id).second)
            throw ConfigError("LabeledSplit: duplicate labeled id " + std::to_string(id));
        const int y = split.labels[i];
        if (y < 0 || y >= split.class_count)
            throw IndexOutOfRange("LabeledSplit: label " + std::to_string(y) + " outside 0.." +
                                  std::to_string(split.class_count - 1));
    }
}

DenseMatrix build_targets(const LabeledSplit& split, std::size_t node_count) {
    validate(split, node_count);
    DenseMatrix targets(node_count, static_cast<std::size_t>(split.class_count));
    for (std::size_t i = 0; i < split.labeled_ids.size(); ++i)
        targets(static_cast<std::size_t>(split.labeled_ids[i]),
                static_cast<std::size_t>(split.labels[i])) = 1.0;
    return targets;
}

ClassifierWeights fit(const DenseMatrix& embedding, const LabeledSplit& split, double lambda) {
    if (!std::isfinite(lambda) || lambda <= 0.0)
        throw InvalidLambda("fit: lambda must be positive and finite, got " +
                            std::to_string(lambda));
    validate(split, embedding.rows());

    const DenseMatrix h_l = select_rows(embedding, split.labeled_ids);
    const std::size_t d = embedding.cols();
    const std::size_t l = h_l.rows();
    const std::size_t c = static_cast<std::size_t>(split.class_count);

    if (d <= l) {
        DenseMatrix g = gram(h_l);  // H_L^T H_L
        add_to_diagonal(g, lambda);
        // H_L^T Y_L without materialising the one-hot block.
        DenseMatrix b(d, c);
        for (std::size_t r = 0; r < l; ++r) {
            const double* hr = h_l.row_ptr(r);
            const std::size_t cls = static_cast<std::size_t>(split.labels[r]);
            for (std::size_t j = 0; j < d; ++j) b(j, cls) += hr[j];
        }
        return ClassifierWeights{spd_solve(SpdSystem(std::move(g), std::move(b))), lambda};
    }

    // Wide embeddings: the ridge identity (H^T H + lambda I)^{-1} H^T =
    // H^T (H H^T + lambda I)^{-1} turns a D x D solve into an L x L one.
    DenseMatrix g = outer_gram(h_l);  // H_L H_L^T
    add_to_diagonal(g, lambda);
    DenseMatrix y(l, c);
    for (std::size_t r = 0; r < l; ++r) y(r, static_cast<std::size_t>(split.labels[r])) = 1.0;
    const DenseMatrix a = spd_solve(SpdSystem(std::move(g), std::move(y)));
    return ClassifierWeights{matmul_at_b(h_l, a), lambda};
}

std::vector<int> predict(const DenseMatrix& embedding, const ClassifierWeights& weights) {
    if (embedding.cols() != weights.weights.rows())
        throw ShapeMismatch("predict: embedding dimension " + std::to_string(embedding.cols()) +
                            " vs weight rows " + std::to_string(weights.weights.rows()));
    return argmax_rows(matmul(embedding, weights.weights));
}

bool cell_improves(const GridCell& candidate, const GridCell& incumbent) {
    if (candidate.validation_accuracy != incumbent.validation_accuracy)
        return candidate.validation_accuracy > incumbent.validation_accuracy;
    if (candidate.steps != incumbent.steps) return candidate.steps < incumbent.steps;
    if (candidate.lambda != incumbent.lambda) return candidate.lambda > incumbent.lambda;
    return candidate.alpha < incumbent.alpha;
}

GridSearchResult grid_search(const PropagationMatrix& p, const DenseMatrix& features,
                             const LabeledSplit& train, const std::vector<int>& validation_ids,
                             const std::vector<int>& validation_labels, const GridSpec& grid) {
    if (grid.lambdas.empty() || grid.alphas.empty() || grid.step_counts.empty())
        throw EmptyGrid("grid_search: every grid axis needs at least one value");
    if (validation_ids.empty()) throw EmptyInput("grid_search: no validation nodes");
    if (validation_ids.size() != validation_labels.size())
        throw LengthMismatch("grid_search: validation ids vs labels");
    for (double l : grid.lambdas)
        if (!std::isfinite(l) || l <= 0.0)
            throw InvalidLambda("grid_search: lambda grid contains " + std::to_string(l));
    if (features.rows() != static_cast<std::size_t>(p.node_count()))
        throw ShapeMismatch("grid_search: feature rows != node count");

    std::vector<int> ks = grid.step_counts;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    GridSearchResult result;
    bool have_best = false;
    // One running embedding per alpha, advanced through ascending K: each
    // (alpha, K) costs only the incremental propagation steps, and the lambda
    // loop reuses it outright.
    for (double alpha : grid.alphas) {
        validate(PropagationConfig{ks.front(), alpha});
        DenseMatrix h = features;
        DenseMatrix scratch(h.rows(), h.cols());
        int done = 0;
        for (int k : ks) {
            propagate_steps(p, h, scratch, features, alpha, k - done);
            done = k;
            const DenseMatrix h_val = select_rows(h, validation_ids);
            for (double lambda : grid.lambdas) {
                const ClassifierWeights w = fit(h, train, lambda);
                const std::vector<int> pred = predict(h_val, w);
                GridCell cell{lambda, alpha, k, accuracy(pred, validation_labels)};
                result.table.push_back(cell);
                if (!have_best || cell_improves(cell, result.best)) {
                    result.best = cell;
                    have_best = true;
                }
            }
        }
    }
    return result;
}

}  // namespace flgc
