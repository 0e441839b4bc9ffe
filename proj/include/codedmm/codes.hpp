#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "codedmm/matrix.hpp"
#include "codedmm/partition.hpp"

namespace codedmm {

enum class Scheme {
    polynomial,           // x/y cuts, threshold mx*my
    matdot,               // z cuts, threshold 2*mz-1
    sum_rate_polynomial,  // one code over every layer's blocks, threshold sum of layer dims
};

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

/// Per-layer block geometry the sum-rate code needs for encoding and
/// un-padding: the layer's cut and its (uniform) block shapes.
struct SumRateLayerShape {
    std::int64_t mx = 1;
    std::int64_t my = 1;
    std::int64_t a_rows = 1;  // rows of each A block
    std::int64_t z_cols = 1;  // contraction width shared by A blocks and B blocks
    std::int64_t b_cols = 1;  // columns of each B block

    std::int64_t info_dim() const { return mx * my; }

    bool operator==(const SumRateLayerShape&) const = default;
};

/// One erasure-coded layer: scheme, cut, worker count and the evaluation
/// points handed to the workers.
struct CodeSpec {
    Scheme scheme = Scheme::polynomial;
    CutSpec cut;
    std::int64_t n_workers = 1;
    std::vector<double> eval_points;
    // Only for sum_rate_polynomial: the layers the single code spans.
    std::vector<SumRateLayerShape> sum_rate_layers;

    void validate() const;

    bool operator==(const CodeSpec&) const = default;
};

/// Minimum number of completed tasks that determines every coefficient.
std::int64_t recovery_threshold(const CodeSpec& spec);

/// Chebyshev nodes on [-1, 1]: cos((2n-1)*pi/(2N)) for n = 1..N. The default
/// evaluation points; equispaced or integer points make the interpolation
/// system unusable well before the thresholds reached here.
std::vector<double> chebyshev_points(std::int64_t n);

/// The encoded operand pair one worker multiplies.
struct EncodedJob {
    std::int64_t worker_id = 1;  // 1-based
    double eval_point = 0.0;
    Matrix a_tilde;
    Matrix b_tilde;
};

/// A finished worker product, tagged with its evaluation point.
struct CodedResult {
    std::int64_t worker_id = 1;
    double eval_point = 0.0;
    Matrix product;
};

/// a_blocks: row slabs of A indexed by m_x; b_blocks: column slabs of B
/// indexed by m_y. Job n carries sum_m A_m t^(m-1) and sum_m B_m t^((m-1)*mx).
std::vector<EncodedJob> polynomial_encode(const std::vector<Matrix>& a_blocks,
                                          const std::vector<Matrix>& b_blocks,
                                          const CodeSpec& spec);

/// a_blocks: column slabs of A, b_blocks: row slabs of B, both indexed by
/// m_z. Job n carries sum_j A_j t^(j-1) and sum_j B_j t^(mz-j); the product's
/// x^(mz-1) coefficient is A*B.
std::vector<EncodedJob> matdot_encode(const std::vector<Matrix>& a_blocks,
                                      const std::vector<Matrix>& b_blocks, const CodeSpec& spec);

/// One layer's blocks, as fed to the sum-rate encoder.
struct LayerBlocks {
    CutSpec cut;                   // mz must be 1
    std::vector<Matrix> a_blocks;  // indexed by m_x
    std::vector<Matrix> b_blocks;  // indexed by m_y
};

/// One polynomial code over every layer's blocks. Blocks are zero-padded to
/// a common shape with per-layer offsets along the contraction axis, which
/// keeps cross-layer products identically zero; the product polynomial then
/// has exactly k_total = sum of layer info dims coefficients, all of them
/// wanted, so any k_total results decode. Each worker gets exactly one job.
std::vector<EncodedJob> sum_rate_encode(const std::vector<LayerBlocks>& layers,
                                        const CodeSpec& spec, std::int64_t k_total);

/// Recover the per-block products from any threshold-sized subset of
/// results. Output order is the canonical block order: (m_x, m_y)
/// lexicographic for polynomial; the single contraction sum for matdot;
/// layer-major canonical for sum-rate (un-padded).
std::vector<Matrix> decode(const std::vector<CodedResult>& results, const CodeSpec& spec);

/// Condition estimate (infinity norm) of the interpolation system for these
/// evaluation points. decode rejects systems whose estimate exceeds
/// kConditionLimit.
double interpolation_condition_estimate(const std::vector<double>& points);

inline constexpr double kConditionLimit = 1e10;

}  // namespace codedmm
