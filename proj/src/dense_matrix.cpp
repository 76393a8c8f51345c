#include "flgc/dense_matrix.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "flgc/errors.hpp"

namespace flgc {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
    if (data_.size() != rows_ * cols_)
        throw ShapeMismatch("DenseMatrix: " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                            " needs " + std::to_string(rows_ * cols_) + " values, got " +
                            std::to_string(data_.size()));
    if (!all_finite()) throw NotFinite("DenseMatrix: non-finite entry in initial values");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

bool DenseMatrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

void check_finite(const DenseMatrix& m, const char* what) {
    if (!m.all_finite()) throw NotFinite(std::string(what) + ": non-finite entries");
}

static void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ShapeMismatch(std::string(op) + ": shapes " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw ShapeMismatch("matmul: inner dimensions disagree");
    DenseMatrix c(a.rows(), b.cols());
    // i-k-j order keeps the inner loop contiguous in both b and c.
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* ci = c.row_ptr(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const double* bk = b.row_ptr(k);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) throw ShapeMismatch("matmul_at_b: row counts disagree");
    DenseMatrix c(a.cols(), b.cols());
    for (std::size_t k = 0; k < a.rows(); ++k) {
        const double* ak = a.row_ptr(k);
        const double* bk = b.row_ptr(k);
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const double aki = ak[i];
            if (aki == 0.0) continue;
            double* ci = c.row_ptr(i);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aki * bk[j];
        }
    }
    return c;
}

DenseMatrix matmul_a_bt(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.cols()) throw ShapeMismatch("matmul_a_bt: column counts disagree");
    DenseMatrix c(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* ai = a.row_ptr(i);
        for (std::size_t j = 0; j < b.rows(); ++j) {
            const double* bj = b.row_ptr(j);
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += ai[k] * bj[k];
            c(i, j) = s;
        }
    }
    return c;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

DenseMatrix gram(const DenseMatrix& a) {
    DenseMatrix g(a.cols(), a.cols());
    for (std::size_t k = 0; k < a.rows(); ++k) {
        const double* ak = a.row_ptr(k);
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const double aki = ak[i];
            if (aki == 0.0) continue;
            double* gi = g.row_ptr(i);
            for (std::size_t j = i; j < a.cols(); ++j) gi[j] += aki * ak[j];
        }
    }
    for (std::size_t i = 0; i < a.cols(); ++i)
        for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
    return g;
}

DenseMatrix outer_gram(const DenseMatrix& a) {
    DenseMatrix g(a.rows(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* ai = a.row_ptr(i);
        for (std::size_t j = i; j < a.rows(); ++j) {
            const double* aj = a.row_ptr(j);
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += ai[k] * aj[k];
            g(i, j) = s;
            g(j, i) = s;
        }
    }
    return g;
}

DenseMatrix select_rows(const DenseMatrix& a, const std::vector<int>& ids) {
    DenseMatrix out(ids.size(), a.cols());
    for (std::size_t r = 0; r < ids.size(); ++r) {
        const int id = ids[r];
        if (id < 0 || static_cast<std::size_t>(id) >= a.rows())
            throw IndexOutOfRange("select_rows: row id " + std::to_string(id) + " outside 0.." +
                                  std::to_string(a.rows() - 1));
        const double* src = a.row_ptr(static_cast<std::size_t>(id));
        double* dst = out.row_ptr(r);
        for (std::size_t j = 0; j < a.cols(); ++j) dst[j] = src[j];
    }
    return out;
}

void add_to_diagonal(DenseMatrix& a, double value) {
    const std::size_t n = a.rows() < a.cols() ? a.rows() : a.cols();
    for (std::size_t i = 0; i < n; ++i) a(i, i) += value;
}

double max_abs(const DenseMatrix& a) {
    double m = 0.0;
    for (double v : a.data()) {
        const double av = std::fabs(v);
        if (av > m) m = av;
    }
    return m;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = std::fabs(a.data()[i] - b.data()[i]);
        if (d > m) m = d;
    }
    return m;
}

std::vector<int> argmax_rows(const DenseMatrix& a) {
    if (a.cols() == 0) throw EmptyInput("argmax_rows: matrix has no columns");
    std::vector<int> out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* ai = a.row_ptr(i);
        std::size_t best = 0;
        for (std::size_t j = 1; j < a.cols(); ++j)
            if (ai[j] > ai[best]) best = j;
        out[i] = static_cast<int>(best);
    }
    return out;
}

}  // namespace flgc
