#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <vector>

#include "codedmm/errors.hpp"

namespace codedmm {

/// Closed interval of 1-based indices, e.g. {1, 4} covers indices 1,2,3,4.
struct IndexRange {
    std::int64_t first = 1;
    std::int64_t last = 1;

    std::int64_t size() const { return last - first + 1; }
    bool contains(std::int64_t i) const { return first <= i && i <= last; }

    bool operator==(const IndexRange&) const = default;
};

/// Dense row-major real matrix. Immutable by convention once built: every
/// operation returns a fresh matrix, so values can be shared across threads.
///
/// Element access is 0-based (plain C++); the range-taking operations below
/// speak 1-based closed intervals.
class Matrix {
  public:
    Matrix() = default;

    /// Zero matrix of the given shape.
    Matrix(std::int64_t rows, std::int64_t cols);

    /// Takes ownership of row-major data; rejects NaN/Inf entries.
    Matrix(std::int64_t rows, std::int64_t cols, std::vector<double> data);

    /// Literal construction for tests and small examples.
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::int64_t n);

    std::int64_t rows() const { return rows_; }
    std::int64_t cols() const { return cols_; }

    double operator()(std::int64_t r, std::int64_t c) const { return data_[r * cols_ + c]; }
    double& operator()(std::int64_t r, std::int64_t c) { return data_[r * cols_ + c]; }

    const std::vector<double>& data() const { return data_; }

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }
    bool operator==(const Matrix&) const = default;

  private:
    std::int64_t rows_ = 0;
    std::int64_t cols_ = 0;
    std::vector<double> data_;
};

/// Exact matrix product. OpenMP-parallel over output rows; the per-entry
/// accumulation order is fixed, so the result is deterministic for a given
/// input regardless of thread count.
Matrix multiply(const Matrix& a, const Matrix& b);

/// Single-threaded reference kernel; kept alongside the parallel one for
/// testing and benchmark comparison.
Matrix multiply_serial(const Matrix& a, const Matrix& b);

/// Copy of the block m[row_range x col_range] (1-based closed intervals).
Matrix submatrix(const Matrix& m, IndexRange row_range, IndexRange col_range);

/// Number of multiply-accumulate operations in an nx x nz x ny product.
std::int64_t basic_op_count(std::int64_t nx, std::int64_t nz, std::int64_t ny);

// Elementwise helpers used by the coding layers.
Matrix add(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double s);

/// Frobenius norm of (a - b) relative to that of b; 0/0 counts as 0.
double relative_frobenius_error(const Matrix& a, const Matrix& b);

/// Text format: first line "rows cols", then one line per row of
/// space-separated values.
void write_matrix(std::ostream& os, const Matrix& m);
Matrix read_matrix(std::istream& is);

}  // namespace codedmm
