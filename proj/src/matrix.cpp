#include "codedmm/matrix.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace codedmm {

namespace {

void check_finite(const std::vector<double>& data) {
    for (double v : data) {
        if (!std::isfinite(v)) throw ValidationError("matrix entry is not a finite number");
    }
}

std::string shape_str(std::int64_t r, std::int64_t c) {
    return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

Matrix::Matrix(std::int64_t rows, std::int64_t cols)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), 0.0) {
    if (rows <= 0 || cols <= 0) throw ValidationError("matrix dimensions must be positive");
}

Matrix::Matrix(std::int64_t rows, std::int64_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows <= 0 || cols <= 0) throw ValidationError("matrix dimensions must be positive");
    if (static_cast<std::int64_t>(data_.size()) != rows * cols) {
        throw ShapeError("data length " + std::to_string(data_.size()) + " does not match shape " +
                         shape_str(rows, cols));
    }
    check_finite(data_);
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    std::int64_t r = static_cast<std::int64_t>(rows.size());
    if (r == 0) throw ValidationError("matrix dimensions must be positive");
    std::int64_t c = static_cast<std::int64_t>(rows.begin()->size());
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(r * c));
    for (const auto& row : rows) {
        if (static_cast<std::int64_t>(row.size()) != c) {
            throw ShapeError("ragged rows in matrix literal");
        }
        data.insert(data.end(), row.begin(), row.end());
    }
    return Matrix(r, c, std::move(data));
}

Matrix Matrix::identity(std::int64_t n) {
    Matrix m(n, n);
    for (std::int64_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("cannot multiply " + shape_str(a.rows(), a.cols()) + " by " +
                         shape_str(b.rows(), b.cols()));
    }
    const std::int64_t n = a.rows(), k = a.cols(), m = b.cols();
    Matrix c(n, m);
    // i-k-j loop: each c(i,j) accumulates over k in ascending order, so the
    // result is bitwise identical for any row scheduling.
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::int64_t kk = 0; kk < k; ++kk) {
            const double aik = a(i, kk);
            for (std::int64_t j = 0; j < m; ++j) {
                c(i, j) += aik * b(kk, j);
            }
        }
    }
    return c;
}

Matrix multiply_serial(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("cannot multiply " + shape_str(a.rows(), a.cols()) + " by " +
                         shape_str(b.rows(), b.cols()));
    }
    const std::int64_t n = a.rows(), k = a.cols(), m = b.cols();
    Matrix c(n, m);
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::int64_t kk = 0; kk < k; ++kk) {
            const double aik = a(i, kk);
            for (std::int64_t j = 0; j < m; ++j) {
                c(i, j) += aik * b(kk, j);
            }
        }
    }
    return c;
}

Matrix submatrix(const Matrix& m, IndexRange row_range, IndexRange col_range) {
    if (row_range.first < 1 || row_range.last > m.rows() || row_range.size() < 1) {
        throw IndexError("row range [" + std::to_string(row_range.first) + ".." +
                         std::to_string(row_range.last) + "] invalid for " +
                         std::to_string(m.rows()) + " rows");
    }
    if (col_range.first < 1 || col_range.last > m.cols() || col_range.size() < 1) {
        throw IndexError("column range [" + std::to_string(col_range.first) + ".." +
                         std::to_string(col_range.last) + "] invalid for " +
                         std::to_string(m.cols()) + " columns");
    }
    Matrix out(row_range.size(), col_range.size());
    for (std::int64_t r = 0; r < out.rows(); ++r) {
        for (std::int64_t c = 0; c < out.cols(); ++c) {
            out(r, c) = m(row_range.first - 1 + r, col_range.first - 1 + c);
        }
    }
    return out;
}

std::int64_t basic_op_count(std::int64_t nx, std::int64_t nz, std::int64_t ny) {
    if (nx <= 0 || nz <= 0 || ny <= 0) throw ValidationError("edge lengths must be positive");
    return nx * nz * ny;
}

Matrix add(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) {
        throw ShapeError("cannot add " + shape_str(a.rows(), a.cols()) + " and " +
                         shape_str(b.rows(), b.cols()));
    }
    Matrix out(a.rows(), a.cols());
    for (std::int64_t i = 0; i < a.rows(); ++i)
        for (std::int64_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
    return out;
}

Matrix scale(const Matrix& a, double s) {
    Matrix out(a.rows(), a.cols());
    for (std::int64_t i = 0; i < a.rows(); ++i)
        for (std::int64_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) * s;
    return out;
}

double relative_frobenius_error(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) {
        throw ShapeError("mismatched shapes " + shape_str(a.rows(), a.cols()) + " vs " +
                         shape_str(b.rows(), b.cols()));
    }
    double num = 0.0, den = 0.0;
    for (std::int64_t i = 0; i < a.rows(); ++i) {
        for (std::int64_t j = 0; j < a.cols(); ++j) {
            const double d = a(i, j) - b(i, j);
            num += d * d;
            den += b(i, j) * b(i, j);
        }
    }
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(num / den);
}

void write_matrix(std::ostream& os, const Matrix& m) {
    os << m.rows() << " " << m.cols() << "\n";
    os.precision(17);
    for (std::int64_t i = 0; i < m.rows(); ++i) {
        for (std::int64_t j = 0; j < m.cols(); ++j) {
            if (j) os << " ";
            os << m(i, j);
        }
        os << "\n";
    }
}

Matrix read_matrix(std::istream& is) {
    std::int64_t rows = 0, cols = 0;
    if (!(is >> rows >> cols)) throw ValidationError("matrix header must be \"rows cols\"");
    if (rows <= 0 || cols <= 0) throw ValidationError("matrix dimensions must be positive");
    std::vector<double> data(static_cast<std::size_t>(rows * cols));
    for (auto& v : data) {
        if (!(is >> v)) throw ValidationError("matrix body truncated");
    }
    return Matrix(rows, cols, std::move(data));
}

}  // namespace codedmm
