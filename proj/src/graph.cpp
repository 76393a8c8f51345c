#include "flgc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "flgc/errors.hpp"

namespace flgc {

SparseAdjacency::SparseAdjacency(int node_count, const std::vector<Edge>& edges)
    : node_count_(node_count) {
    if (node_count <= 0) throw EmptyInput("SparseAdjacency: node_count must be positive");
    adj_.resize(static_cast<std::size_t>(node_count));

    // Collapse duplicates on unordered pairs; last occurrence wins.
    std::map<std::pair<int, int>, double> weight;
    for (const Edge& e : edges) {
        if (e.u < 0 || e.u >= node_count || e.v < 0 || e.v >= node_count)
            throw IndexOutOfRange("SparseAdjacency: edge (" + std::to_string(e.u) + "," +
                                  std::to_string(e.v) + ") outside 0.." +
                                  std::to_string(node_count - 1));
        if (e.u == e.v)
            throw ConfigError("SparseAdjacency: self-loop at node " + std::to_string(e.u));
        if (!std::isfinite(e.w) || e.w <= 0.0)
            throw ConfigError("SparseAdjacency: edge (" + std::to_string(e.u) + "," +
                              std::to_string(e.v) + ") has non-positive weight");
        weight[{std::min(e.u, e.v), std::max(e.u, e.v)}] = e.w;
    }

    edge_count_ = weight.size();
    for (const auto& [pair, w] : weight) {
        adj_[static_cast<std::size_t>(pair.first)].emplace_back(pair.second, w);
        adj_[static_cast<std::size_t>(pair.second)].emplace_back(pair.first, w);
    }
    for (auto& list : adj_) std::sort(list.begin(), list.end());
}

const std::vector<std::pair<int, double>>& SparseAdjacency::neighbors(int node) const {
    if (node < 0 || node >= node_count_)
        throw IndexOutOfRange("SparseAdjacency: node " + std::to_string(node) + " outside 0.." +
                              std::to_string(node_count_ - 1));
    return adj_[static_cast<std::size_t>(node)];
}

double SparseAdjacency::weighted_degree(int node) const {
    double d = 0.0;
    for (const auto& [nbr, w] : neighbors(node)) d += w;
    return d;
}

PropagationMatrix renormalize(const SparseAdjacency& graph) {
    const int n = graph.node_count();
    std::vector<double> inv_sqrt(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        inv_sqrt[static_cast<std::size_t>(i)] = 1.0 / std::sqrt(1.0 + graph.weighted_degree(i));

    PropagationMatrix p;
    p.node_count_ = n;
    p.row_offsets_.reserve(static_cast<std::size_t>(n) + 1);
    p.row_offsets_.push_back(0);
    for (int i = 0; i < n; ++i) {
        const auto& nbrs = graph.neighbors(i);
        const double si = inv_sqrt[static_cast<std::size_t>(i)];
        bool diagonal_done = false;
        auto push_diagonal = [&] {
            p.column_indices_.push_back(i);
            p.values_.push_back(si * si);
            diagonal_done = true;
        };
        for (const auto& [j, w] : nbrs) {
            if (!diagonal_done && j > i) push_diagonal();
            // si*sj is commutative, so entry (i,j) and (j,i) are bitwise equal.
            p.column_indices_.push_back(j);
            p.values_.push_back(w * (si * inv_sqrt[static_cast<std::size_t>(j)]));
        }
        if (!diagonal_done) push_diagonal();
        p.row_offsets_.push_back(static_cast<int>(p.column_indices_.size()));
    }
    return p;
}

DenseMatrix PropagationMatrix::to_dense() const {
    const std::size_t n = static_cast<std::size_t>(node_count_);
    DenseMatrix d(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (int idx = row_offsets_[i]; idx < row_offsets_[i + 1]; ++idx)
            d(i, static_cast<std::size_t>(column_indices_[static_cast<std::size_t>(idx)])) =
                values_[static_cast<std::size_t>(idx)];
    return d;
}

SparseAdjacency knn_graph(const DenseMatrix& features, int k) {
    const std::size_t n = features.rows();
    if (n < 2) throw DegenerateInput("knn_graph: need at least two nodes");
    if (k < 1 || static_cast<std::size_t>(k) >= n)
        throw ConfigError("knn_graph: k = " + std::to_string(k) + " must satisfy 1 <= k < N = " +
                          std::to_string(n));

    const std::size_t d = features.cols();
    std::vector<Edge> edges;
    edges.reserve(n * static_cast<std::size_t>(k));
    std::vector<std::pair<double, int>> cand(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double* fi = features.row_ptr(i);
        std::size_t m = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double* fj = features.row_ptr(j);
            double s = 0.0;
            for (std::size_t t = 0; t < d; ++t) {
                const double diff = fi[t] - fj[t];
                s += diff * diff;
            }
            cand[m++] = {s, static_cast<int>(j)};
        }
        // (distance, index) ordering makes ties deterministic: smaller id wins.
        std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
        for (int t = 0; t < k; ++t) edges.push_back({static_cast<int>(i), cand[t].second, 1.0});
    }
    return SparseAdjacency(static_cast<int>(n), edges);
}

EdgeListResult load_edge_list(const std::string& path, int node_count) {
    std::ifstream in(path);
    if (!in) throw ConfigError("load_edge_list: cannot open " + path);

    std::vector<Edge> ordered;  // keep file order so "last wins" is meaningful
    std::size_t self_loops = 0;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        for (char& c : line)
            if (c == ',') c = ' ';
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::istringstream ls(line);
        long long u, v;
        if (!(ls >> u >> v))
            throw ParseError("load_edge_list: expected two integer node ids", line_no);
        double w = 1.0;
        if (ls >> w) {
            if (!std::isfinite(w) || w <= 0.0)
                throw ParseError("load_edge_list: weight must be positive and finite", line_no);
        } else if (!ls.eof()) {
            throw ParseError("load_edge_list: malformed weight", line_no);
        }
        std::string trailing;
        ls.clear();
        if (ls >> trailing) throw ParseError("load_edge_list: unexpected trailing tokens", line_no);
        if (u < 0 || u >= node_count || v < 0 || v >= node_count)
            throw IndexOutOfRange("load_edge_list: node id outside 0.." +
                                  std::to_string(node_count - 1) + " (line " +
                                  std::to_string(line_no) + ")");
        if (u == v) {
            ++self_loops;
            continue;
        }
        ordered.push_back({static_cast<int>(u), static_cast<int>(v), w});
    }

    std::size_t distinct = 0;
    {
        std::map<std::pair<int, int>, int> seen;
        for (const Edge& e : ordered)
            if (seen.emplace(std::pair{std::min(e.u, e.v), std::max(e.u, e.v)}, 0).second)
                ++distinct;
    }
    return EdgeListResult{SparseAdjacency(node_count, ordered), self_loops,
                          ordered.size() - distinct};
}

}  // namespace flgc
