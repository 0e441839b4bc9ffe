#pragma once

#include <cstdint>

#include "codedmm/matrix.hpp"

namespace codedmm {

/// Zero-padded operands plus the original dimensions needed to crop the
/// final product back.
struct PaddedOperands {
    Matrix a;
    Matrix b;
    std::int64_t orig_nx = 0;
    std::int64_t orig_nz = 0;
    std::int64_t orig_ny = 0;
};

/// Zero-pad A (nx x nz) and B (nz x ny) up to the least multiples of the
/// given divisors. The padded product, cropped with crop_product, equals the
/// original product exactly.
PaddedOperands pad_to_divisible(const Matrix& a, const Matrix& b, std::int64_t x_divisor,
                                std::int64_t z_divisor, std::int64_t y_divisor);

/// Drop the padding rows/columns from a padded product.
Matrix crop_product(const Matrix& padded_product, std::int64_t orig_nx, std::int64_t orig_ny);

}  // namespace codedmm
