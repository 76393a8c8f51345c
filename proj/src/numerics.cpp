#include "flgc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "flgc/errors.hpp"
#include "flgc/rng.hpp"

namespace flgc {

namespace {

void require_symmetric(const DenseMatrix& m, const char* who) {
    if (m.rows() != m.cols())
        throw ShapeMismatch(std::string(who) + ": matrix is " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + ", expected square");
    const double tol = 1e-10 * std::max(1.0, max_abs(m));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            if (std::fabs(m(i, j) - m(j, i)) > tol)
                throw NotSymmetric(std::string(who) + ": entry (" + std::to_string(i) + "," +
                                   std::to_string(j) + ") asymmetric beyond tolerance");
}

}  // namespace

SpdSystem::SpdSystem(DenseMatrix matrix, DenseMatrix rhs)
    : matrix_(std::move(matrix)), rhs_(std::move(rhs)) {
    require_symmetric(matrix_, "SpdSystem");
    if (rhs_.rows() != matrix_.rows())
        throw ShapeMismatch("SpdSystem: rhs has " + std::to_string(rhs_.rows()) +
                            " rows, matrix has " + std::to_string(matrix_.rows()));
    if (matrix_.rows() == 0) throw EmptyInput("SpdSystem: empty system");
}

DenseMatrix spd_solve(const SpdSystem& system) {
    const DenseMatrix& a = system.matrix();
    const std::size_t n = a.rows();

    // Lower Cholesky factor, L L^T = A.
    DenseMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0))  // catches NaN too
            throw NotPositiveDefinite("spd_solve: non-positive pivot " + std::to_string(d) +
                                      " at index " + std::to_string(j));
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }

    // Solve L Y = B, then L^T X = Y, column block at a time.
    const DenseMatrix& b = system.rhs();
    DenseMatrix x = b;
    const std::size_t m = b.cols();
    for (std::size_t i = 0; i < n; ++i) {
        double* xi = x.row_ptr(i);
        for (std::size_t k = 0; k < i; ++k) {
            const double lik = l(i, k);
            if (lik == 0.0) continue;
            const double* xk = x.row_ptr(k);
            for (std::size_t c = 0; c < m; ++c) xi[c] -= lik * xk[c];
        }
        const double inv = 1.0 / l(i, i);
        for (std::size_t c = 0; c < m; ++c) xi[c] *= inv;
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double* xi = x.row_ptr(ii);
        for (std::size_t k = ii + 1; k < n; ++k) {
            const double lki = l(k, ii);
            if (lki == 0.0) continue;
            const double* xk = x.row_ptr(k);
            for (std::size_t c = 0; c < m; ++c) xi[c] -= lki * xk[c];
        }
        const double inv = 1.0 / l(ii, ii);
        for (std::size_t c = 0; c < m; ++c) xi[c] *= inv;
    }
    check_finite(x, "spd_solve result");
    return x;
}

// ---------------------------------------------------------------------------
// Symmetric eigensolver.

namespace {

// Cyclic Jacobi with rotation accumulation. Fine up to a few hundred rows;
// we cap its use at n <= 64 and hand larger problems to tridiag + QL.
void jacobi_eig(DenseMatrix a, std::vector<double>& d, DenseMatrix& v) {
    const std::size_t n = a.rows();
    v = DenseMatrix::identity(n);
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) norm += a(i, j) * a(i, j);
    norm = std::sqrt(norm);
    const double tol = (norm > 0 ? norm : 1.0) * 1e-14;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * a(i, j) * a(i, j);
        if (std::sqrt(off) <= tol) {
            for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
            return;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::fabs(apq) <= tol * 1e-3) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double app = a(p, p), aqq = a(q, q);
                a(p, p) = c * c * app - 2.0 * s * c * apq + s * s * aqq;
                a(q, q) = s * s * app + 2.0 * s * c * apq + c * c * aqq;
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = a(p, k) = c * akp - s * akq;
                    a(k, q) = a(q, k) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    throw ConvergenceFailure("sym_eig_smallest: Jacobi failed to converge in 100 sweeps");
}

// Householder reduction to tridiagonal form with transform accumulation,
// followed by implicit-shift QL. The classic tred2/tqli pair, 0-indexed.
void tridiag_reduce(DenseMatrix& a, std::vector<double>& d, std::vector<double>& e) {
    const int n = static_cast<int>(a.rows());
    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::fabs(a(i, k));
            if (scale == 0.0) {
                e[i] = a(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    a(i, k) /= scale;
                    h += a(i, k) * a(i, k);
                }
                double f = a(i, l);
                double g = (f >= 0.0 ? -std::sqrt(h) : std::sqrt(h));
                e[i] = scale * g;
                h -= f * g;
                a(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    a(j, i) = a(i, j) / h;
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
                    for (int k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
                    e[j] = g / h;
                    f += e[j] * a(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = a(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (int k = 0; k <= j; ++k) a(j, k) -= f * e[k] + g * a(i, k);
                }
            }
        } else {
            e[i] = a(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        const int l = i - 1;
        if (d[i] != 0.0) {
            for (int j = 0; j <= l; ++j) {
                double g = 0.0;
                for (int k = 0; k <= l; ++k) g += a(i, k) * a(k, j);
                for (int k = 0; k <= l; ++k) a(k, j) -= g * a(k, i);
            }
        }
        d[i] = a(i, i);
        a(i, i) = 1.0;
        for (int j = 0; j <= l; ++j) a(j, i) = a(i, j) = 0.0;
    }
}

void tridiag_ql(std::vector<double>& d, std::vector<double>& e, DenseMatrix& z) {
    const int n = static_cast<int>(z.rows());
    const double eps = std::numeric_limits<double>::epsilon();
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 50)
                    throw ConvergenceFailure(
                        "sym_eig_smallest: QL failed to converge (eigenvalue " +
                        std::to_string(l) + ")");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::fabs(r) : -std::fabs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * f;
                        z(k, i) = c * z(k, i) - s * f;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

EigenPairs sym_eig_smallest(const DenseMatrix& matrix, std::size_t count) {
    require_symmetric(matrix, "sym_eig_smallest");
    const std::size_t n = matrix.rows();
    if (n == 0) throw EmptyInput("sym_eig_smallest: empty matrix");
    if (count < 1 || count > n)
        throw IndexOutOfRange("sym_eig_smallest: count " + std::to_string(count) +
                              " outside 1.." + std::to_string(n));

    std::vector<double> evals(n);
    DenseMatrix evecs;  // n x n, column j pairs with evals[j]
    if (n <= 64) {
        jacobi_eig(matrix, evals, evecs);
    } else {
        evecs = matrix;
        std::vector<double> off(n);
        tridiag_reduce(evecs, evals, off);
        tridiag_ql(evals, off, evecs);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return evals[a] < evals[b]; });

    EigenPairs out;
    out.values.resize(count);
    out.vectors = DenseMatrix(n, count);
    for (std::size_t j = 0; j < count; ++j) {
        const std::size_t src = order[j];
        out.values[j] = evals[src];
        double norm = 0.0;
        std::size_t peak = 0;
        double peak_abs = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = evecs(i, src);
            norm += v * v;
            if (std::fabs(v) > peak_abs) {
                peak_abs = std::fabs(v);
                peak = i;
            }
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) throw ConvergenceFailure("sym_eig_smallest: zero eigenvector");
        const double sign = evecs(peak, src) < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = evecs(i, src) * sign / norm;
    }
    return out;
}

// ---------------------------------------------------------------------------
// k-means.

namespace {

double sq_dist(const double* a, const double* b, std::size_t d) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        const double diff = a[k] - b[k];
        s += diff * diff;
    }
    return s;
}

std::size_t count_distinct_rows(const DenseMatrix& points) {
    const std::size_t n = points.rows(), d = points.cols();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(points.row_ptr(a), points.row_ptr(a) + d,
                                            points.row_ptr(b), points.row_ptr(b) + d);
    });
    std::size_t distinct = n == 0 ? 0 : 1;
    for (std::size_t i = 1; i < n; ++i)
        if (!std::equal(points.row_ptr(idx[i]), points.row_ptr(idx[i]) + d,
                        points.row_ptr(idx[i - 1])))
            ++distinct;
    return distinct;
}

struct LloydRun {
    std::vector<int> labels;
    double wcss = std::numeric_limits<double>::infinity();
    std::vector<double> trace;
};

LloydRun lloyd_once(const DenseMatrix& points, int k, std::uint64_t seed, int max_iterations) {
    const std::size_t n = points.rows(), d = points.cols();
    const std::size_t kk = static_cast<std::size_t>(k);
    Rng rng(seed);

    // k-means++ seeding.
    DenseMatrix centers(kk, d);
    std::vector<char> is_center(n, 0);
    std::size_t first = rng.uniform_index(n);
    std::copy(points.row_ptr(first), points.row_ptr(first) + d, centers.row_ptr(0));
    is_center[first] = 1;
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = sq_dist(points.row_ptr(i), centers.row_ptr(0), d);
    for (std::size_t c = 1; c < kk; ++c) {
        double total = 0.0;
        for (double v : d2) total += v;
        std::size_t pick = n;
        if (total > 0.0) {
            const double r = rng.uniform() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc >= r) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) pick = n - 1;  // guard against accumulated rounding
        } else {
            // All mass sits on chosen centers (duplicates); take the first
            // point that is not already a center.
            for (std::size_t i = 0; i < n; ++i)
                if (!is_center[i]) {
                    pick = i;
                    break;
                }
        }
        is_center[pick] = 1;
        std::copy(points.row_ptr(pick), points.row_ptr(pick) + d, centers.row_ptr(c));
        for (std::size_t i = 0; i < n; ++i)
            d2[i] = std::min(d2[i], sq_dist(points.row_ptr(i), centers.row_ptr(c), d));
    }

    LloydRun run;
    run.labels.assign(n, -1);
    std::vector<std::size_t> sizes(kk);
    for (int iter = 0; iter < max_iterations; ++iter) {
        // Assignment; ties go to the smaller cluster index.
        bool changed = false;
        double wcss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = sq_dist(points.row_ptr(i), centers.row_ptr(0), d);
            for (std::size_t c = 1; c < kk; ++c) {
                const double dist = sq_dist(points.row_ptr(i), centers.row_ptr(c), d);
                if (dist < best_d) {
                    best_d = dist;
                    best = static_cast<int>(c);
                }
            }
            if (run.labels[i] != best) {
                run.labels[i] = best;
                changed = true;
            }
            wcss += best_d;
        }

        // Repair empty clusters with the point farthest from its centroid.
        std::fill(sizes.begin(), sizes.end(), 0);
        for (std::size_t i = 0; i < n; ++i) ++sizes[static_cast<std::size_t>(run.labels[i])];
        for (std::size_t c = 0; c < kk; ++c) {
            if (sizes[c] != 0) continue;
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t own = static_cast<std::size_t>(run.labels[i]);
                if (sizes[own] <= 1) continue;  // don't empty another cluster
                const double dist = sq_dist(points.row_ptr(i), centers.row_ptr(own), d);
                if (dist > far_d) {
                    far_d = dist;
                    far = i;
                }
            }
            --sizes[static_cast<std::size_t>(run.labels[far])];
            run.labels[far] = static_cast<int>(c);
            sizes[c] = 1;
            changed = true;
        }

        // Centroid update.
        std::fill(centers.data().begin(), centers.data().end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double* ctr = centers.row_ptr(static_cast<std::size_t>(run.labels[i]));
            const double* p = points.row_ptr(i);
            for (std::size_t j = 0; j < d; ++j) ctr[j] += p[j];
        }
        for (std::size_t c = 0; c < kk; ++c) {
            double* ctr = centers.row_ptr(c);
            const double inv = 1.0 / static_cast<double>(sizes[c]);
            for (std::size_t j = 0; j < d; ++j) ctr[j] *= inv;
        }

        run.trace.push_back(wcss);
        if (!changed) break;
    }

    // Final WCSS against the final centroids.
    double wcss = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        wcss += sq_dist(points.row_ptr(i), centers.row_ptr(static_cast<std::size_t>(run.labels[i])), d);
    run.wcss = wcss;
    return run;
}

}  // namespace

KmeansResult kmeans_detailed(const DenseMatrix& points, int k, std::uint64_t seed, int restarts,
                             int max_iterations) {
    if (points.rows() == 0) throw EmptyInput("kmeans: no points");
    if (k < 1) throw DegenerateInput("kmeans: k must be >= 1");
    if (restarts < 1) throw DegenerateInput("kmeans: restarts must be >= 1");
    if (static_cast<std::size_t>(k) > points.rows() ||
        static_cast<std::size_t>(k) > count_distinct_rows(points))
        throw DegenerateInput("kmeans: k = " + std::to_string(k) +
                              " exceeds the number of distinct points");

    KmeansResult best;
    best.wcss = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        LloydRun run = lloyd_once(points, k, derive_seed(seed, static_cast<std::uint64_t>(r)),
                                  max_iterations);
        if (run.wcss < best.wcss) {
            best.labels = std::move(run.labels);
            best.wcss = run.wcss;
            best.restart = r;
            best.wcss_trace = std::move(run.trace);
        }
    }
    return best;
}

std::vector<int> kmeans(const DenseMatrix& points, int k, std::uint64_t seed, int restarts,
                        int max_iterations) {
    return kmeans_detailed(points, k, seed, restarts, max_iterations).labels;
}

// ---------------------------------------------------------------------------
// Hungarian assignment (shortest augmenting paths with potentials).

std::vector<int> hungarian_min_cost(const DenseMatrix& cost) {
    if (cost.rows() != cost.cols()) throw ShapeMismatch("hungarian_min_cost: matrix not square");
    const int n = static_cast<int>(cost.rows());
    if (n == 0) throw EmptyInput("hungarian_min_cost: empty cost matrix");
    check_finite(cost, "hungarian_min_cost cost");

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> match(n + 1, 0), way(n + 1, 0);  // match[j] = row assigned to column j (1-based)
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = match[j0];
            int j1 = -1;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0);
    }

    std::vector<int> assignment(n, -1);
    for (int j = 1; j <= n; ++j) assignment[match[j] - 1] = j - 1;
    return assignment;
}

}  // namespace flgc
