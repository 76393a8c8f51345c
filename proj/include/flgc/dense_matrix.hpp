#pragma once

#include <cstddef>
#include <vector>

namespace flgc {

// Row-major dense matrix of doubles. Small by design: the toolkit works at
// desk scale (hundreds to a few thousand rows), so clarity beats BLAS.
class DenseMatrix {
  public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols);  // zero-initialised
    // Takes ownership of `values` (row-major, rows*cols entries). Throws
    // ShapeMismatch on a size mismatch and NotFinite if any entry is NaN/inf.
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    const double* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }
    double* row_ptr(std::size_t i) { return data_.data() + i * cols_; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool all_finite() const;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Throws NotFinite mentioning `what` if m contains NaN or inf.
void check_finite(const DenseMatrix& m, const char* what);

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);    // A·B
DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b);  // Aᵀ·B
DenseMatrix matmul_a_bt(const DenseMatrix& a, const DenseMatrix& b);  // A·Bᵀ
DenseMatrix transpose(const DenseMatrix& a);

// AᵀA (cols×cols) and AAᵀ (rows×rows); both exploit symmetry.
DenseMatrix gram(const DenseMatrix& a);
DenseMatrix outer_gram(const DenseMatrix& a);

// New matrix holding the listed rows of `a`, in the given order.
DenseMatrix select_rows(const DenseMatrix& a, const std::vector<int>& ids);

void add_to_diagonal(DenseMatrix& a, double value);

double max_abs(const DenseMatrix& a);
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

// Per-row argmax; ties resolved to the smallest column index.
std::vector<int> argmax_rows(const DenseMatrix& a);

}  // namespace flgc
