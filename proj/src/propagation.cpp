#include "flgc/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "flgc/errors.hpp"

namespace flgc {

namespace {

std::size_t g_step_count = 0;

// One application of H <- (1-alpha) * P*H + alpha * X.
void apply_step(const PropagationMatrix& p, DenseMatrix& h, DenseMatrix& scratch,
                const DenseMatrix& x, double alpha) {
    const std::size_t n = h.rows(), d = h.cols();
    const double keep = 1.0 - alpha;
    const auto& offsets = p.row_offsets();
    const auto& cols = p.column_indices();
    const auto& vals = p.values();
    for (std::size_t i = 0; i < n; ++i) {
        double* out = scratch.row_ptr(i);
        std::fill(out, out + d, 0.0);
        for (int idx = offsets[i]; idx < offsets[i + 1]; ++idx) {
            const double pij = vals[static_cast<std::size_t>(idx)];
            const double* hj = h.row_ptr(static_cast<std::size_t>(cols[static_cast<std::size_t>(idx)]));
            for (std::size_t c = 0; c < d; ++c) out[c] += pij * hj[c];
        }
        const double* xi = x.row_ptr(i);
        for (std::size_t c = 0; c < d; ++c) out[c] = keep * out[c] + alpha * xi[c];
    }
    std::swap(h, scratch);
    ++g_step_count;
}

}  // namespace

void propagate_steps(const PropagationMatrix& p, DenseMatrix& h, DenseMatrix& scratch,
                     const DenseMatrix& features, double alpha, int count) {
    for (int step = 0; step < count; ++step) apply_step(p, h, scratch, features, alpha);
}

void validate(const PropagationConfig& config) {
    if (config.steps < 0)
        throw ConfigError("propagation: steps must be >= 0, got " + std::to_string(config.steps));
    if (!std::isfinite(config.alpha) || config.alpha < 0.0 || config.alpha > 1.0)
        throw ConfigError("propagation: alpha must lie in [0, 1], got " +
                          std::to_string(config.alpha));
}

DenseMatrix propagate(const PropagationMatrix& p, const DenseMatrix& features,
                      const PropagationConfig& config) {
    validate(config);
    if (features.rows() != static_cast<std::size_t>(p.node_count()))
        throw ShapeMismatch("propagate: features have " + std::to_string(features.rows()) +
                            " rows, graph has " + std::to_string(p.node_count()) + " nodes");
    DenseMatrix h = features;
    DenseMatrix scratch(h.rows(), h.cols());
    propagate_steps(p, h, scratch, features, config.alpha, config.steps);
    return h;
}

std::vector<CurvePoint> propagation_curve(const PropagationMatrix& p, const DenseMatrix& features,
                                          const std::vector<double>& alphas,
                                          const std::vector<int>& step_counts) {
    if (alphas.empty() || step_counts.empty())
        throw EmptyGrid("propagation_curve: alphas and step counts must be non-empty");
    std::vector<int> ks = step_counts;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    std::vector<CurvePoint> out;
    out.reserve(alphas.size() * ks.size());
    for (double alpha : alphas) {
        validate(PropagationConfig{ks.front(), alpha});
        if (features.rows() != static_cast<std::size_t>(p.node_count()))
            throw ShapeMismatch("propagation_curve: feature rows != node count");
        DenseMatrix h = features;
        DenseMatrix scratch(h.rows(), h.cols());
        int done = 0;
        for (int k : ks) {
            propagate_steps(p, h, scratch, features, alpha, k - done);
            done = k;
            out.push_back(CurvePoint{alpha, k, h});
        }
    }
    return out;
}

std::size_t propagation_step_count() { return g_step_count; }
void reset_propagation_step_count() { g_step_count = 0; }

}  // namespace flgc
