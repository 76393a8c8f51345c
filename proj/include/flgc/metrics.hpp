#pragma once

#include <cstdint>
#include <vector>

namespace flgc {

// Fraction of positions where the two label vectors agree exactly.
double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);

// Joint label-count table. Row/column order follows the sorted distinct
// label values of each vector.
struct ContingencyTable {
    std::vector<int> row_values;   // distinct labels of `a`, ascending
    std::vector<int> col_values;   // distinct labels of `b`, ascending
    std::vector<std::int64_t> counts;  // row-major, row_values.size() x col_values.size()
    std::int64_t total = 0;

    std::int64_t at(std::size_t r, std::size_t c) const {
        return counts[r * col_values.size() + c];
    }
};

ContingencyTable contingency(const std::vector<int>& a, const std::vector<int>& b);

// Best-case accuracy over all one-to-one cluster->class matchings, found by
// solving an exact assignment problem on the (padded, square) contingency
// table. Invariant to relabeling either side.
double clustering_accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);

// Mutual information normalized by the arithmetic mean of the two label
// entropies (natural log). Conventions for degenerate partitions: both
// single-cluster -> 1.0; exactly one single-cluster -> 0.0.
double normalized_mutual_information(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace flgc
