#include "codedmm/codes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "codedmm/errors.hpp"

namespace codedmm {

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::polynomial: return "polynomial";
        case Scheme::matdot: return "matdot";
        case Scheme::sum_rate_polynomial: return "sum_rate_polynomial";
    }
    throw ValidationError("unknown scheme");
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "polynomial") return Scheme::polynomial;
    if (name == "matdot") return Scheme::matdot;
    if (name == "sum_rate_polynomial") return Scheme::sum_rate_polynomial;
    throw ValidationError("unknown scheme \"" + name + "\"");
}

void CodeSpec::validate() const {
    cut.validate();
    if (n_workers < 1) throw ValidationError("n_workers must be >= 1");
    if (static_cast<std::int64_t>(eval_points.size()) != n_workers) {
        throw ValidationError("need one evaluation point per worker: " +
                              std::to_string(eval_points.size()) + " points for " +
                              std::to_string(n_workers) + " workers");
    }
    for (std::size_t i = 0; i < eval_points.size(); ++i) {
        if (!std::isfinite(eval_points[i])) {
            throw ValidationError("evaluation points must be finite");
        }
        for (std::size_t j = i + 1; j < eval_points.size(); ++j) {
            if (eval_points[i] == eval_points[j]) {
                throw ValidationError("evaluation points must be pairwise distinct");
            }
        }
    }
    switch (scheme) {
        case Scheme::polynomial:
            if (cut.mz != 1) {
                throw ValidationError("polynomial scheme requires mz == 1, got mz = " +
                                      std::to_string(cut.mz));
            }
            break;
        case Scheme::matdot:
            if (cut.mx != 1 || cut.my != 1) {
                throw ValidationError("matdot scheme requires mx == my == 1, got (" +
                                      std::to_string(cut.mx) + "," + std::to_string(cut.my) + ")");
            }
            break;
        case Scheme::sum_rate_polynomial:
            if (sum_rate_layers.empty()) {
                throw ValidationError("sum-rate code needs at least one layer shape");
            }
            for (const auto& l : sum_rate_layers) {
                if (l.mx < 1 || l.my < 1 || l.a_rows < 1 || l.z_cols < 1 || l.b_cols < 1) {
                    throw ValidationError("sum-rate layer shape fields must be >= 1");
                }
            }
            break;
    }
    if (recovery_threshold(*this) > n_workers) {
        throw ValidationError("recovery threshold " +
                              std::to_string(recovery_threshold(*this)) + " exceeds " +
                              std::to_string(n_workers) + " workers");
    }
}

std::int64_t recovery_threshold(const CodeSpec& spec) {
    switch (spec.scheme) {
        case Scheme::polynomial: return spec.cut.mx * spec.cut.my;
        case Scheme::matdot: return 2 * spec.cut.mz - 1;
        case Scheme::sum_rate_polynomial: {
            std::int64_t k = 0;
            for (const auto& l : spec.sum_rate_layers) k += l.info_dim();
            return k;
        }
    }
    throw ValidationError("unknown scheme");
}

std::vector<double> chebyshev_points(std::int64_t n) {
    if (n < 1) throw ValidationError("need at least one evaluation point");
    std::vector<double> pts(static_cast<std::size_t>(n));
    for (std::int64_t i = 1; i <= n; ++i) {
        pts[static_cast<std::size_t>(i - 1)] =
            std::cos((2.0 * static_cast<double>(i) - 1.0) * std::numbers::pi /
                     (2.0 * static_cast<double>(n)));
    }
    return pts;
}

namespace {

void check_uniform(const std::vector<Matrix>& blocks, const char* what) {
    if (blocks.empty()) throw ShapeError(std::string(what) + " block list is empty");
    for (const auto& b : blocks) {
        if (!b.same_shape(blocks.front())) {
            throw ShapeError(std::string(what) + " blocks have mixed shapes");
        }
    }
}

/// powers[e] = t^e, built by repeated multiplication so every encoder uses
/// the same rounding for the same exponent.
std::vector<double> power_table(double t, std::int64_t max_exp) {
    std::vector<double> powers(static_cast<std::size_t>(max_exp) + 1);
    powers[0] = 1.0;
    for (std::int64_t e = 1; e <= max_exp; ++e) {
        powers[static_cast<std::size_t>(e)] = powers[static_cast<std::size_t>(e - 1)] * t;
    }
    return powers;
}

void accumulate_scaled(Matrix& acc, const Matrix& block, double coeff, std::int64_t row_off,
                       std::int64_t col_off) {
    for (std::int64_t r = 0; r < block.rows(); ++r) {
        for (std::int64_t c = 0; c < block.cols(); ++c) {
            acc(row_off + r, col_off + c) += coeff * block(r, c);
        }
    }
}

}  // namespace

std::vector<EncodedJob> polynomial_encode(const std::vector<Matrix>& a_blocks,
                                          const std::vector<Matrix>& b_blocks,
                                          const CodeSpec& spec) {
    spec.validate();
    if (spec.scheme != Scheme::polynomial) {
        throw ValidationError("polynomial_encode needs a polynomial code spec");
    }
    if (static_cast<std::int64_t>(a_blocks.size()) != spec.cut.mx ||
        static_cast<std::int64_t>(b_blocks.size()) != spec.cut.my) {
        throw ShapeError("expected " + std::to_string(spec.cut.mx) + " A blocks and " +
                         std::to_string(spec.cut.my) + " B blocks, got " +
                         std::to_string(a_blocks.size()) + " and " +
                         std::to_string(b_blocks.size()));
    }
    check_uniform(a_blocks, "A");
    check_uniform(b_blocks, "B");
    if (a_blocks.front().cols() != b_blocks.front().rows()) {
        throw ShapeError("A blocks and B blocks do not share a contraction dimension");
    }

    const std::int64_t mx = spec.cut.mx, my = spec.cut.my;
    std::vector<EncodedJob> jobs;
    jobs.reserve(spec.eval_points.size());
    for (std::int64_t n = 0; n < spec.n_workers; ++n) {
        const double t = spec.eval_points[static_cast<std::size_t>(n)];
        const auto powers = power_table(t, std::max(mx - 1, (my - 1) * mx));
        Matrix a_tilde(a_blocks.front().rows(), a_blocks.front().cols());
        Matrix b_tilde(b_blocks.front().rows(), b_blocks.front().cols());
        for (std::int64_t m = 1; m <= mx; ++m) {
            accumulate_scaled(a_tilde, a_blocks[static_cast<std::size_t>(m - 1)],
                              powers[static_cast<std::size_t>(m - 1)], 0, 0);
        }
        for (std::int64_t m = 1; m <= my; ++m) {
            accumulate_scaled(b_tilde, b_blocks[static_cast<std::size_t>(m - 1)],
                              powers[static_cast<std::size_t>((m - 1) * mx)], 0, 0);
        }
        jobs.push_back(EncodedJob{n + 1, t, std::move(a_tilde), std::move(b_tilde)});
    }
    return jobs;
}

std::vector<EncodedJob> matdot_encode(const std::vector<Matrix>& a_blocks,
                                      const std::vector<Matrix>& b_blocks, const CodeSpec& spec) {
    spec.validate();
    if (spec.scheme != Scheme::matdot) {
        throw ValidationError("matdot_encode needs a matdot code spec");
    }
    const std::int64_t mz = spec.cut.mz;
    if (static_cast<std::int64_t>(a_blocks.size()) != mz ||
        static_cast<std::int64_t>(b_blocks.size()) != mz) {
        throw ShapeError("matdot needs " + std::to_string(mz) +
                         " A blocks and as many B blocks, got " + std::to_string(a_blocks.size()) +
                         " and " + std::to_string(b_blocks.size()));
    }
    check_uniform(a_blocks, "A");
    check_uniform(b_blocks, "B");
    if (a_blocks.front().cols() != b_blocks.front().rows()) {
        throw ShapeError("A blocks and B blocks do not share a contraction dimension");
    }

    std::vector<EncodedJob> jobs;
    jobs.reserve(spec.eval_points.size());
    for (std::int64_t n = 0; n < spec.n_workers; ++n) {
        const double t = spec.eval_points[static_cast<std::size_t>(n)];
        const auto powers = power_table(t, mz - 1);
        Matrix a_tilde(a_blocks.front().rows(), a_blocks.front().cols());
        Matrix b_tilde(b_blocks.front().rows(), b_blocks.front().cols());
        for (std::int64_t j = 1; j <= mz; ++j) {
            accumulate_scaled(a_tilde, a_blocks[static_cast<std::size_t>(j - 1)],
                              powers[static_cast<std::size_t>(j - 1)], 0, 0);
            accumulate_scaled(b_tilde, b_blocks[static_cast<std::size_t>(j - 1)],
                              powers[static_cast<std::size_t>(mz - j)], 0, 0);
        }
        jobs.push_back(EncodedJob{n + 1, t, std::move(a_tilde), std::move(b_tilde)});
    }
    return jobs;
}

std::vector<EncodedJob> sum_rate_encode(const std::vector<LayerBlocks>& layers,
                                        const CodeSpec& spec, std::int64_t k_total) {
    spec.validate();
    if (spec.scheme != Scheme::sum_rate_polynomial) {
        throw ValidationError("sum_rate_encode needs a sum-rate code spec");
    }
    if (layers.size() != spec.sum_rate_layers.size()) {
        throw ValidationError("layer blocks do not match the code spec's layer shapes");
    }
    if (k_total != recovery_threshold(spec)) {
        throw ValidationError("k_total " + std::to_string(k_total) +
                              " does not match the sum of layer info dims " +
                              std::to_string(recovery_threshold(spec)));
    }

    std::int64_t pad_rows = 0, pad_cols = 0, z_total = 0;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto& lb = layers[l];
        const auto& shape = spec.sum_rate_layers[l];
        if (lb.cut.mz != 1) {
            throw ValidationError("sum-rate code supports x/y cut layers only (mz == 1), layer " +
                                  std::to_string(l + 1) + " has mz = " + std::to_string(lb.cut.mz));
        }
        if (lb.cut.mx != shape.mx || lb.cut.my != shape.my) {
            throw ValidationError("layer " + std::to_string(l + 1) +
                                  " cut disagrees with the code spec");
        }
        if (static_cast<std::int64_t>(lb.a_blocks.size()) != shape.mx ||
            static_cast<std::int64_t>(lb.b_blocks.size()) != shape.my) {
            throw ShapeError("layer " + std::to_string(l + 1) + " block counts disagree with cut");
        }
        check_uniform(lb.a_blocks, "A");
        check_uniform(lb.b_blocks, "B");
        const auto& a0 = lb.a_blocks.front();
        const auto& b0 = lb.b_blocks.front();
        if (a0.rows() != shape.a_rows || a0.cols() != shape.z_cols || b0.rows() != shape.z_cols ||
            b0.cols() != shape.b_cols) {
            throw ShapeError("layer " + std::to_string(l + 1) +
                             " block shapes disagree with the code spec");
        }
        pad_rows = std::max(pad_rows, shape.a_rows);
        pad_cols = std::max(pad_cols, shape.b_cols);
        z_total += shape.z_cols;
    }

    std::vector<EncodedJob> jobs;
    jobs.reserve(spec.eval_points.size());
    for (std::int64_t n = 0; n < spec.n_workers; ++n) {
        const double t = spec.eval_points[static_cast<std::size_t>(n)];
        const auto powers = power_table(t, k_total - 1);
        Matrix a_tilde(pad_rows, z_total);
        Matrix b_tilde(z_total, pad_cols);
        std::int64_t z_offset = 0;
        std::int64_t k_before = 0;
        for (std::size_t l = 0; l < layers.size(); ++l) {
            const auto& lb = layers[l];
            const auto& shape = spec.sum_rate_layers[l];
            // A blocks of layer l sit at exponents k_before + (m_x - 1); B
            // blocks reuse exponents (m_y - 1) * mx. Layers occupy disjoint
            // column/row bands along the contraction axis, so every
            // cross-layer term of the product polynomial is a zero matrix
            // and the wanted products land densely on 0 .. k_total - 1.
            for (std::int64_t m = 1; m <= shape.mx; ++m) {
                accumulate_scaled(a_tilde, lb.a_blocks[static_cast<std::size_t>(m - 1)],
                                  powers[static_cast<std::size_t>(k_before + m - 1)], 0, z_offset);
            }
            for (std::int64_t m = 1; m <= shape.my; ++m) {
                accumulate_scaled(b_tilde, lb.b_blocks[static_cast<std::size_t>(m - 1)],
                                  powers[static_cast<std::size_t>((m - 1) * shape.mx)], z_offset,
                                  0);
            }
            z_offset += shape.z_cols;
            k_before += shape.info_dim();
        }
        jobs.push_back(EncodedJob{n + 1, t, std::move(a_tilde), std::move(b_tilde)});
    }
    return jobs;
}

namespace {

/// Monomial coefficients of the Lagrange basis for the given points:
/// lambda[d * R + i] is the x^d coefficient of L_i. This is the inverse of
/// the Vandermonde matrix V[i][d] = t_i^d, applied row-by-row in decode.
std::vector<double> lagrange_basis_coefficients(const std::vector<double>& pts) {
    const std::int64_t r = static_cast<std::int64_t>(pts.size());
    // master polynomial prod (x - t_i)
    std::vector<double> master(static_cast<std::size_t>(r) + 1, 0.0);
    master[0] = 1.0;
    for (std::int64_t i = 0; i < r; ++i) {
        for (std::int64_t d = i + 1; d >= 1; --d) {
            master[static_cast<std::size_t>(d)] =
                master[static_cast<std::size_t>(d - 1)] -
                pts[static_cast<std::size_t>(i)] * master[static_cast<std::size_t>(d)];
        }
        master[0] *= -pts[static_cast<std::size_t>(i)];
    }

    std::vector<double> lambda(static_cast<std::size_t>(r * r), 0.0);
    std::vector<double> q(static_cast<std::size_t>(r), 0.0);
    for (std::int64_t i = 0; i < r; ++i) {
        const double ti = pts[static_cast<std::size_t>(i)];
        // synthetic division: q = master / (x - t_i)
        q[static_cast<std::size_t>(r - 1)] = master[static_cast<std::size_t>(r)];
        for (std::int64_t d = r - 2; d >= 0; --d) {
            q[static_cast<std::size_t>(d)] =
                master[static_cast<std::size_t>(d + 1)] + ti * q[static_cast<std::size_t>(d + 1)];
        }
        double denom = 1.0;
        for (std::int64_t j = 0; j < r; ++j) {
            if (j != i) denom *= ti - pts[static_cast<std::size_t>(j)];
        }
        for (std::int64_t d = 0; d < r; ++d) {
            lambda[static_cast<std::size_t>(d * r + i)] = q[static_cast<std::size_t>(d)] / denom;
        }
    }
    return lambda;
}

double condition_estimate(const std::vector<double>& pts, const std::vector<double>& lambda) {
    const std::int64_t r = static_cast<std::int64_t>(pts.size());
    double v_norm = 0.0;
    for (std::int64_t i = 0; i < r; ++i) {
        double row = 0.0, p = 1.0;
        for (std::int64_t d = 0; d < r; ++d) {
            row += std::abs(p);
            p *= pts[static_cast<std::size_t>(i)];
        }
        v_norm = std::max(v_norm, row);
    }
    double inv_norm = 0.0;
    for (std::int64_t d = 0; d < r; ++d) {
        double row = 0.0;
        for (std::int64_t i = 0; i < r; ++i) {
            row += std::abs(lambda[static_cast<std::size_t>(d * r + i)]);
        }
        inv_norm = std::max(inv_norm, row);
    }
    return v_norm * inv_norm;
}

/// Entrywise coefficient reconstruction: one shared basis factorization,
/// applied to every matrix entry. Parallel over entries with a fixed
/// per-entry summation order, so output is deterministic.
std::vector<Matrix> interpolate_coefficients(const std::vector<const Matrix*>& products,
                                             const std::vector<double>& lambda, std::int64_t r) {
    const std::int64_t rows = products.front()->rows();
    const std::int64_t cols = products.front()->cols();
    std::vector<Matrix> coeffs(static_cast<std::size_t>(r), Matrix(rows, cols));
    const std::int64_t entries = rows * cols;
#pragma omp parallel for schedule(static)
    for (std::int64_t e = 0; e < entries; ++e) {
        const std::int64_t row = e / cols;
        const std::int64_t col = e % cols;
        for (std::int64_t d = 0; d < r; ++d) {
            double acc = 0.0;
            for (std::int64_t i = 0; i < r; ++i) {
                acc += lambda[static_cast<std::size_t>(d * r + i)] *
                       (*products[static_cast<std::size_t>(i)])(row, col);
            }
            coeffs[static_cast<std::size_t>(d)](row, col) = acc;
        }
    }
    return coeffs;
}

}  // namespace

double interpolation_condition_estimate(const std::vector<double>& points) {
    if (points.empty()) throw ValidationError("no interpolation points");
    return condition_estimate(points, lagrange_basis_coefficients(points));
}

std::vector<Matrix> decode(const std::vector<CodedResult>& results, const CodeSpec& spec) {
    spec.validate();
    const std::int64_t r = recovery_threshold(spec);

    // Take the first r results with pairwise distinct evaluation points.
    std::vector<double> pts;
    std::vector<const Matrix*> products;
    for (const auto& res : results) {
        if (std::find(pts.begin(), pts.end(), res.eval_point) != pts.end()) continue;
        pts.push_back(res.eval_point);
        products.push_back(&res.product);
        if (static_cast<std::int64_t>(pts.size()) == r) break;
    }
    if (static_cast<std::int64_t>(pts.size()) < r) {
        throw InsufficientResultsError(static_cast<std::int64_t>(pts.size()), r);
    }
    for (const auto* p : products) {
        if (!p->same_shape(*products.front())) {
            throw ShapeError("coded results have mixed shapes");
        }
    }

    // r == 1 is replication: hand the single product back untouched.
    if (r == 1) {
        std::vector<Matrix> out;
        out.push_back(*products.front());
        return out;
    }

    const auto lambda = lagrange_basis_coefficients(pts);
    const double cond = condition_estimate(pts, lambda);
    if (cond > kConditionLimit) throw ConditioningError(cond);

    auto coeffs = interpolate_coefficients(products, lambda, r);

    switch (spec.scheme) {
        case Scheme::polynomial: {
            const std::int64_t mx = spec.cut.mx, my = spec.cut.my;
            std::vector<Matrix> out;
            out.reserve(static_cast<std::size_t>(mx * my));
            for (std::int64_t bx = 1; bx <= mx; ++bx) {
                for (std::int64_t by = 1; by <= my; ++by) {
                    out.push_back(std::move(coeffs[static_cast<std::size_t>(
                        (bx - 1) + (by - 1) * mx)]));
                }
            }
            return out;
        }
        case Scheme::matdot: {
            std::vector<Matrix> out;
            out.push_back(std::move(coeffs[static_cast<std::size_t>(spec.cut.mz - 1)]));
            return out;
        }
        case Scheme::sum_rate_polynomial: {
            std::vector<Matrix> out;
            out.reserve(static_cast<std::size_t>(r));
            std::int64_t k_before = 0;
            for (const auto& shape : spec.sum_rate_layers) {
                for (std::int64_t bx = 1; bx <= shape.mx; ++bx) {
                    for (std::int64_t by = 1; by <= shape.my; ++by) {
                        const auto& c = coeffs[static_cast<std::size_t>(
                            k_before + (bx - 1) + (by - 1) * shape.mx)];
                        out.push_back(submatrix(c, IndexRange{1, shape.a_rows},
                                                IndexRange{1, shape.b_cols}));
                    }
                }
                k_before += shape.info_dim();
            }
            return out;
        }
    }
    throw ValidationError("unknown scheme");
}

}  // namespace codedmm
