#pragma once

#include <cstdint>
#include <vector>

#include "flgc/dense_matrix.hpp"
#include "flgc/graph.hpp"
#include "flgc/propagation.hpp"

namespace flgc {

// Ridge self-expression coefficients: Z = (H H^T + lambda I)^{-1} H X^T,
// so row i of Z reconstructs node i's features from everyone's embeddings.
struct AffinityCoefficients {
    DenseMatrix z;  // N x N
    double lambda = 0.0;
};

AffinityCoefficients fit_coefficients(const DenseMatrix& embedding, const DenseMatrix& features,
                                      double lambda);

// Coefficients -> affinity: symmetrise magnitudes (|Z|+|Z^T|)/2, zero the
// diagonal, normalize each row by its max, then re-symmetrise by averaging.
// Result is symmetric with entries in [0,1] and zero diagonal.
DenseMatrix build_affinity(const DenseMatrix& z);

struct ClusterAssignment {
    std::vector<int> labels;  // size N, values in [0, cluster_count)
    int cluster_count = 0;
};

// Normalized spectral clustering on an affinity matrix: embed rows with the
// eigenvectors of L = I - D^{-1/2} A D^{-1/2} belonging to the smallest
// cluster_count eigenvalues (zero-degree nodes contribute identity rows),
// unit-normalize the embedding rows, k-means the result.
ClusterAssignment spectral_segment(const DenseMatrix& affinity, int cluster_count,
                                   std::uint64_t seed);

// Full unsupervised pipeline: propagate, fit coefficients, build affinity,
// segment.
ClusterAssignment cluster(const PropagationMatrix& p, const DenseMatrix& features,
                          const PropagationConfig& config, double lambda, int cluster_count,
                          std::uint64_t seed);

}  // namespace flgc
