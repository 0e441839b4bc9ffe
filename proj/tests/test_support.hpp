#pragma once

// Test-only oracles, independent of the library code paths they check.

#include <cstdint>
#include <functional>
#include <vector>

#include "codedmm/matrix.hpp"

namespace testsupport {

/// Naive inner-product multiply (i, j, k loop): the reference every GEMM
/// result is compared against.
inline codedmm::Matrix oracle_multiply(const codedmm::Matrix& a, const codedmm::Matrix& b) {
    codedmm::Matrix c(a.rows(), b.cols());
    for (std::int64_t i = 0; i < a.rows(); ++i) {
        for (std::int64_t j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (std::int64_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
            c(i, j) = acc;
        }
    }
    return c;
}

/// xorshift64*: deterministic test data, unrelated to the library RNG.
struct TestRng {
    std::uint64_t state = 0x853C49E6748FEA9Bull;

    explicit TestRng(std::uint64_t seed) : state(seed ? seed : 1) {}

    std::uint64_t next() {
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        return state * 0x2545F4914F6CDD1Dull;
    }

    double next_unit() {  // [-1, 1)
        return static_cast<double>(next() >> 11) * 0x1.0p-52 - 1.0;
    }

    std::int64_t next_int(std::int64_t lo, std::int64_t hi) {  // inclusive
        return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

inline codedmm::Matrix random_matrix(std::int64_t rows, std::int64_t cols, TestRng& rng) {
    std::vector<double> data(static_cast<std::size_t>(rows * cols));
    for (auto& v : data) v = rng.next_unit();
    return codedmm::Matrix(rows, cols, std::move(data));
}

/// Small-integer-valued matrix: sums of products stay exact in doubles, so
/// reconstruction checks can demand bitwise equality.
inline codedmm::Matrix random_int_matrix(std::int64_t rows, std::int64_t cols, TestRng& rng) {
    std::vector<double> data(static_cast<std::size_t>(rows * cols));
    for (auto& v : data) v = static_cast<double>(rng.next_int(-9, 9));
    return codedmm::Matrix(rows, cols, std::move(data));
}

/// Visit every k-subset of {0, ..., n-1} in lexicographic order.
inline void for_each_subset(std::int64_t n, std::int64_t k,
                            const std::function<void(const std::vector<std::int64_t>&)>& fn) {
    std::vector<std::int64_t> idx(static_cast<std::size_t>(k));
    for (std::int64_t i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
        fn(idx);
        std::int64_t i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (std::int64_t j = i + 1; j < k; ++j) {
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
}

/// Gaussian-elimination solve of the Vandermonde system V c = y with
/// V[i][d] = t_i^d. Deliberately a different algorithm from the library's
/// Lagrange-basis decoder; used both as an independent decode oracle and to
/// force under-determined fits for threshold-sharpness checks.
inline std::vector<double> vandermonde_fit(const std::vector<double>& points,
                                           const std::vector<double>& values) {
    const std::int64_t n = static_cast<std::int64_t>(points.size());
    std::vector<double> m(static_cast<std::size_t>(n * (n + 1)));
    for (std::int64_t i = 0; i < n; ++i) {
        double p = 1.0;
        for (std::int64_t d = 0; d < n; ++d) {
            m[static_cast<std::size_t>(i * (n + 1) + d)] = p;
            p *= points[static_cast<std::size_t>(i)];
        }
        m[static_cast<std::size_t>(i * (n + 1) + n)] = values[static_cast<std::size_t>(i)];
    }
    for (std::int64_t col = 0; col < n; ++col) {
        std::int64_t pivot = col;
        for (std::int64_t r = col + 1; r < n; ++r) {
            if (std::abs(m[static_cast<std::size_t>(r * (n + 1) + col)]) >
                std::abs(m[static_cast<std::size_t>(pivot * (n + 1) + col)])) {
                pivot = r;
            }
        }
        for (std::int64_t d = 0; d <= n; ++d) {
            std::swap(m[static_cast<std::size_t>(col * (n + 1) + d)],
                      m[static_cast<std::size_t>(pivot * (n + 1) + d)]);
        }
        for (std::int64_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = m[static_cast<std::size_t>(r * (n + 1) + col)] /
                             m[static_cast<std::size_t>(col * (n + 1) + col)];
            for (std::int64_t d = col; d <= n; ++d) {
                m[static_cast<std::size_t>(r * (n + 1) + d)] -=
                    f * m[static_cast<std::size_t>(col * (n + 1) + d)];
            }
        }
    }
    std::vector<double> coeffs(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        coeffs[static_cast<std::size_t>(i)] = m[static_cast<std::size_t>(i * (n + 1) + n)] /
                                              m[static_cast<std::size_t>(i * (n + 1) + i)];
    }
    return coeffs;
}

}  // namespace testsupport
