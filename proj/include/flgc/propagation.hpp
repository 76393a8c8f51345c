#pragma once

#include <cstddef>
#include <vector>

#include "flgc/dense_matrix.hpp"
#include "flgc/graph.hpp"

namespace flgc {

// Multi-hop propagation settings. `steps` counts applications of the
// recursion H <- (1-alpha)*P*H + alpha*X starting from H = X, so alpha = 0
// yields exactly P^steps * X and steps = 0 returns the features untouched.
struct PropagationConfig {
    int steps = 2;
    double alpha = 0.0;
};

void validate(const PropagationConfig& config);

DenseMatrix propagate(const PropagationMatrix& p, const DenseMatrix& features,
                      const PropagationConfig& config);

struct CurvePoint {
    double alpha;
    int steps;
    DenseMatrix embedding;
};

// Embeddings for every (alpha, steps) combination. Each alpha advances one
// running state through ascending step counts, so the total work is
// max(steps) applications per alpha rather than sum(steps); the results are
// bitwise identical to calling propagate() per pair.
std::vector<CurvePoint> propagation_curve(const PropagationMatrix& p, const DenseMatrix& features,
                                          const std::vector<double>& alphas,
                                          const std::vector<int>& step_counts);

// Advances `h` by `count` further applications of the recursion, using
// `scratch` (same shape) as the swap buffer. Building-block for callers that
// walk one running state through ascending step counts instead of
// re-propagating from scratch; propagate() and propagation_curve() share it.
void propagate_steps(const PropagationMatrix& p, DenseMatrix& h, DenseMatrix& scratch,
                     const DenseMatrix& features, double alpha, int count);

// Number of P·H applications performed since process start (or last reset).
// Lets tests observe embedding-cache hits.
std::size_t propagation_step_count();
void reset_propagation_step_count();

}  // namespace flgc
