#include "codedmm/padding.hpp"

#include "codedmm/errors.hpp"

namespace codedmm {

namespace {

std::int64_t round_up(std::int64_t n, std::int64_t divisor) {
    if (divisor < 1) throw ValidationError("divisor must be >= 1");
    return (n + divisor - 1) / divisor * divisor;
}

Matrix embed(const Matrix& m, std::int64_t rows, std::int64_t cols) {
    if (rows == m.rows() && cols == m.cols()) return m;
    Matrix out(rows, cols);
    for (std::int64_t r = 0; r < m.rows(); ++r) {
        for (std::int64_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
    }
    return out;
}

}  // namespace

PaddedOperands pad_to_divisible(const Matrix& a, const Matrix& b, std::int64_t x_divisor,
                                std::int64_t z_divisor, std::int64_t y_divisor) {
    if (a.cols() != b.rows()) {
        throw ShapeError("operands do not share a contraction dimension");
    }
    const std::int64_t nx = round_up(a.rows(), x_divisor);
    const std::int64_t nz = round_up(a.cols(), z_divisor);
    const std::int64_t ny = round_up(b.cols(), y_divisor);
    return PaddedOperands{embed(a, nx, nz), embed(b, nz, ny), a.rows(), a.cols(), b.cols()};
}

Matrix crop_product(const Matrix& padded_product, std::int64_t orig_nx, std::int64_t orig_ny) {
    if (orig_nx > padded_product.rows() || orig_ny > padded_product.cols()) {
        throw ShapeError("crop target exceeds the padded product");
    }
    if (orig_nx == padded_product.rows() && orig_ny == padded_product.cols()) {
        return padded_product;
    }
    return submatrix(padded_product, IndexRange{1, orig_nx}, IndexRange{1, orig_ny});
}

}  // namespace codedmm
