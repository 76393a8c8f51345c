#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "flgc/dense_matrix.hpp"

namespace flgc {

struct Edge {
    int u;
    int v;
    double w = 1.0;
};

// Undirected weighted graph, no self-loops, strictly positive weights.
// Both directions of every edge are materialised in the adjacency lists.
class SparseAdjacency {
  public:
    // Symmetrises, drops nothing silently: self-loops and non-positive
    // weights throw. Duplicate pairs collapse with the last weight winning.
    SparseAdjacency(int node_count, const std::vector<Edge>& edges);

    int node_count() const { return node_count_; }
    std::size_t edge_count() const { return edge_count_; }  // undirected count

    // Neighbors of `node`, ascending by id.
    const std::vector<std::pair<int, double>>& neighbors(int node) const;

    double weighted_degree(int node) const;

  private:
    int node_count_ = 0;
    std::size_t edge_count_ = 0;
    std::vector<std::vector<std::pair<int, double>>> adj_;
};

// Symmetrically renormalized propagation operator with self-loops added:
// P = (D+I)^{-1/2} (A+I) (D+I)^{-1/2}, stored CSR. Rows are sorted by column
// and every row carries its diagonal entry, so isolated nodes propagate to
// themselves with weight 1.
class PropagationMatrix {
  public:
    int node_count() const { return node_count_; }
    const std::vector<int>& row_offsets() const { return row_offsets_; }
    const std::vector<int>& column_indices() const { return column_indices_; }
    const std::vector<double>& values() const { return values_; }

    DenseMatrix to_dense() const;

    friend PropagationMatrix renormalize(const SparseAdjacency& graph);

  private:
    int node_count_ = 0;
    std::vector<int> row_offsets_;
    std::vector<int> column_indices_;
    std::vector<double> values_;
};

PropagationMatrix renormalize(const SparseAdjacency& graph);

// Binary k-nearest-neighbour graph on Euclidean distances. Distance ties
// break toward the smaller node index; the directed k-NN relation is
// symmetrised by union. Requires 1 <= k < N.
SparseAdjacency knn_graph(const DenseMatrix& features, int k);

struct EdgeListResult {
    SparseAdjacency adjacency;
    std::size_t self_loops_dropped = 0;
    std::size_t duplicates_collapsed = 0;
};

// Reads "u v [weight]" lines (whitespace or comma separated; '#' comments).
// Self-loops are dropped and counted; repeated pairs keep the last weight.
EdgeListResult load_edge_list(const std::string& path, int node_count);

}  // namespace flgc
