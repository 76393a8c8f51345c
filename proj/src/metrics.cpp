#include "flgc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "flgc/dense_matrix.hpp"
#include "flgc/errors.hpp"
#include "flgc/numerics.hpp"

namespace flgc {

namespace {

void require_paired(const std::vector<int>& a, const std::vector<int>& b, const char* who) {
    if (a.size() != b.size())
        throw LengthMismatch(std::string(who) + ": " + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()) + " labels");
    if (a.empty()) throw EmptyInput(std::string(who) + ": empty label vectors");
}

}  // namespace

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
    require_paired(predicted, truth, "accuracy");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] == truth[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

ContingencyTable contingency(const std::vector<int>& a, const std::vector<int>& b) {
    require_paired(a, b, "contingency");
    std::map<int, std::size_t> row_of, col_of;
    for (int v : a) row_of.emplace(v, 0);
    for (int v : b) col_of.emplace(v, 0);

    ContingencyTable t;
    t.row_values.reserve(row_of.size());
    for (auto& [v, idx] : row_of) {
        idx = t.row_values.size();
        t.row_values.push_back(v);
    }
    t.col_values.reserve(col_of.size());
    for (auto& [v, idx] : col_of) {
        idx = t.col_values.size();
        t.col_values.push_back(v);
    }
    t.counts.assign(t.row_values.size() * t.col_values.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        ++t.counts[row_of[a[i]] * t.col_values.size() + col_of[b[i]]];
    t.total = static_cast<std::int64_t>(a.size());
    return t;
}

double clustering_accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
    const ContingencyTable t = contingency(predicted, truth);
    const std::size_t rows = t.row_values.size(), cols = t.col_values.size();
    const std::size_t n = std::max(rows, cols);

    // Assignment solvers minimise, so flip counts against their maximum and
    // pad to square with that maximum (padding = zero matched count).
    std::int64_t peak = 0;
    for (std::int64_t c : t.counts) peak = std::max(peak, c);
    DenseMatrix cost(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            cost(r, c) = static_cast<double>(
                peak - ((r < rows && c < cols) ? t.at(r, c) : 0));

    const std::vector<int> match = hungarian_min_cost(cost);
    std::int64_t matched = 0;
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t c = static_cast<std::size_t>(match[r]);
        if (c < cols) matched += t.at(r, c);
    }
    return static_cast<double>(matched) / static_cast<double>(t.total);
}

double normalized_mutual_information(const std::vector<int>& a, const std::vector<int>& b) {
    const ContingencyTable t = contingency(a, b);
    const std::size_t rows = t.row_values.size(), cols = t.col_values.size();
    const double n = static_cast<double>(t.total);

    std::vector<double> pr(rows, 0.0), pc(cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            pr[r] += static_cast<double>(t.at(r, c));
            pc[c] += static_cast<double>(t.at(r, c));
        }
    for (double& v : pr) v /= n;
    for (double& v : pc) v /= n;

    double hu = 0.0, hv = 0.0;
    for (double p : pr)
        if (p > 0) hu -= p * std::log(p);
    for (double p : pc)
        if (p > 0) hv -= p * std::log(p);

    if (hu == 0.0 && hv == 0.0) return 1.0;  // two single-cluster partitions agree
    if (hu == 0.0 || hv == 0.0) return 0.0;

    double mi = 0.0;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            const std::int64_t cnt = t.at(r, c);
            if (cnt == 0) continue;
            const double p = static_cast<double>(cnt) / n;
            mi += p * std::log(p / (pr[r] * pc[c]));
        }
    const double nmi = mi / (0.5 * (hu + hv));
    return std::clamp(nmi, 0.0, 1.0);  // shave float dust outside [0,1]
}

}  // namespace flgc
