#pragma once

#include <cstdint>
#include <vector>

#include "flgc/dense_matrix.hpp"

namespace flgc {

// A symmetric positive-definite linear system A·X = B. Symmetry is validated
// at construction (tolerance 1e-10 relative to the largest |entry|);
// positive-definiteness surfaces later as NotPositiveDefinite from spd_solve.
class SpdSystem {
  public:
    SpdSystem(DenseMatrix matrix, DenseMatrix rhs);

    const DenseMatrix& matrix() const { return matrix_; }
    const DenseMatrix& rhs() const { return rhs_; }

  private:
    DenseMatrix matrix_;
    DenseMatrix rhs_;
};

// Cholesky solve. Throws NotPositiveDefinite when a pivot is not positive.
DenseMatrix spd_solve(const SpdSystem& system);

struct EigenPairs {
    std::vector<double> values;  // ascending, size == count
    DenseMatrix vectors;         // n x count; column i pairs with values[i], unit norm
};

// Smallest `count` eigenpairs of a symmetric matrix. Full spectrum is computed
// (cyclic Jacobi for n <= 64, Householder tridiagonalization + implicit-shift
// QL above that); the smallest `count` are returned. Vector signs follow a
// fixed convention: the largest-magnitude component of each vector is positive.
EigenPairs sym_eig_smallest(const DenseMatrix& matrix, std::size_t count);

struct KmeansResult {
    std::vector<int> labels;
    double wcss = 0.0;
    int restart = -1;                // index of the winning restart
    std::vector<double> wcss_trace;  // per-Lloyd-iteration WCSS of the winning restart
};

// Lloyd's algorithm with k-means++ seeding. `restarts` independent runs are
// seeded by fan-out from `seed`; the lowest-WCSS run wins (ties: lowest
// restart index). Empty clusters are repaired by moving the point farthest
// from its assigned centroid. Throws DegenerateInput when k exceeds the
// number of distinct points.
KmeansResult kmeans_detailed(const DenseMatrix& points, int k, std::uint64_t seed,
                             int restarts = 20, int max_iterations = 300);

std::vector<int> kmeans(const DenseMatrix& points, int k, std::uint64_t seed, int restarts = 20,
                        int max_iterations = 300);

// Exact minimum-cost assignment on a square cost matrix (Jonker-Volgenant
// style shortest augmenting paths, O(n^3)). Returns row -> column.
std::vector<int> hungarian_min_cost(const DenseMatrix& cost);

}  // namespace flgc
