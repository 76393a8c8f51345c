#include "flgc/clustering.hpp"

#include <cmath>
#include <string>

#include "flgc/errors.hpp"
#include "flgc/numerics.hpp"

namespace flgc {

AffinityCoefficients fit_coefficients(const DenseMatrix& embedding, const DenseMatrix& features,
                                      double lambda) {
    if (!std::isfinite(lambda) || lambda <= 0.0)
        throw InvalidLambda("fit_coefficients: lambda must be positive and finite, got " +
                            std::to_string(lambda));
    if (embedding.rows() == 0) throw EmptyInput("fit_coefficients: empty embedding");
    if (embedding.rows() != features.rows())
        throw ShapeMismatch("fit_coefficients: embedding has " + std::to_string(embedding.rows()) +
                            " rows, features " + std::to_string(features.rows()));

    DenseMatrix g = outer_gram(embedding);  // H H^T
    add_to_diagonal(g, lambda);
    DenseMatrix b = matmul_a_bt(embedding, features);  // H X^T
    return AffinityCoefficients{spd_solve(SpdSystem(std::move(g), std::move(b))), lambda};
}

DenseMatrix build_affinity(const DenseMatrix& z) {
    if (z.rows() != z.cols()) throw ShapeMismatch("build_affinity: coefficient matrix not square");
    const std::size_t n = z.rows();

    DenseMatrix w(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            w(i, j) = i == j ? 0.0 : 0.5 * (std::fabs(z(i, j)) + std::fabs(z(j, i)));

    std::vector<double> row_max(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* wi = w.row_ptr(i);
        for (std::size_t j = 0; j < n; ++j) row_max[i] = std::max(row_max[i], wi[j]);
    }

    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double rij = row_max[i] > 0.0 ? w(i, j) / row_max[i] : 0.0;
            const double rji = row_max[j] > 0.0 ? w(j, i) / row_max[j] : 0.0;
            const double v = 0.5 * (rij + rji);
            a(i, j) = v;
            a(j, i) = v;
        }
    return a;
}

ClusterAssignment spectral_segment(const DenseMatrix& affinity, int cluster_count,
                                   std::uint64_t seed) {
    const std::size_t n = affinity.rows();
    if (affinity.cols() != n) throw ShapeMismatch("spectral_segment: affinity not square");
    if (cluster_count < 1 || static_cast<std::size_t>(cluster_count) > n)
        throw ConfigError("spectral_segment: cluster_count " + std::to_string(cluster_count) +
                          " outside 1..N");
    if (max_abs(affinity) == 0.0)
        throw DegenerateInput("spectral_segment: affinity is identically zero");

    std::vector<double> inv_sqrt_degree(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double d = 0.0;
        for (std::size_t j = 0; j < n; ++j) d += affinity(i, j);
        if (d > 0.0) inv_sqrt_degree[i] = 1.0 / std::sqrt(d);
    }

    // L = I - D^{-1/2} A D^{-1/2}; zero-degree nodes keep a bare identity row.
    DenseMatrix laplacian = DenseMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = -affinity(i, j) * (inv_sqrt_degree[i] * inv_sqrt_degree[j]);
            laplacian(i, j) = v;
            laplacian(j, i) = v;
        }

    const EigenPairs pairs = sym_eig_smallest(laplacian, static_cast<std::size_t>(cluster_count));

    DenseMatrix embedding = pairs.vectors;  // n x C, rows become unit vectors
    for (std::size_t i = 0; i < n; ++i) {
        double* row = embedding.row_ptr(i);
        double norm = 0.0;
        for (std::size_t c = 0; c < embedding.cols(); ++c) norm += row[c] * row[c];
        norm = std::sqrt(norm);
        if (norm > 0.0)
            for (std::size_t c = 0; c < embedding.cols(); ++c) row[c] /= norm;
    }

    ClusterAssignment out;
    out.cluster_count = cluster_count;
    out.labels = kmeans(embedding, cluster_count, seed);
    return out;
}

ClusterAssignment cluster(const PropagationMatrix& p, const DenseMatrix& features,
                          const PropagationConfig& config, double lambda, int cluster_count,
                          std::uint64_t seed) {
    const DenseMatrix h = propagate(p, features, config);
    const AffinityCoefficients coeffs = fit_coefficients(h, features, lambda);
    return spectral_segment(build_affinity(coeffs.z), cluster_count, seed);
}

}  // namespace flgc
