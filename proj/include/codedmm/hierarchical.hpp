#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "codedmm/codes.hpp"
#include "codedmm/matrix.hpp"
#include "codedmm/partition.hpp"

namespace codedmm {

/// One layer of the two-step partition: its task block, the cut that splits
/// the block into information blocks, and the code that protects them.
struct LayerSpec {
    TaskBlock task_block;
    CutSpec cut;
    std::int64_t info_dim = 1;   // = cut.info_dim()
    std::int64_t threshold = 1;  // = recovery_threshold(code)
    CodeSpec code;

    bool operator==(const LayerSpec&) const = default;
};

/// The full layered plan. Layer order is worker execution order; task blocks
/// tile the cuboid disjointly.
struct HierarchicalPlan {
    Cuboid cuboid;
    std::int64_t n_workers = 1;
    Scheme scheme = Scheme::polynomial;
    std::vector<LayerSpec> layers;

    std::int64_t n_layers() const { return static_cast<std::int64_t>(layers.size()); }

    /// Sum of the per-layer information dimensions.
    std::int64_t total_info_dim() const;

    void validate() const;

    bool operator==(const HierarchicalPlan&) const = default;
};

/// The ordered jobs one worker executes (one per layer; a single job for
/// sum-rate plans).
struct WorkerQueue {
    std::int64_t worker_id = 1;
    std::vector<EncodedJob> jobs;
};

// ---- layer sizing strategies ----

/// n_layers equal task blocks stacked along the x axis, identical cuts.
struct UniformStrategy {
    std::int64_t n_layers = 1;
    CutSpec cut;
};

/// Caller-specified layering: one cut per layer plus either explicit x spans,
/// explicit task blocks, or nothing (spans proportional to the info dims, so
/// information blocks are equal-sized across layers).
struct ExplicitStrategy {
    std::vector<CutSpec> cuts;
    std::vector<std::int64_t> x_spans;   // optional
    std::vector<TaskBlock> task_blocks;  // optional, overrides x stacking
};

/// Decreasing per-layer info dims k_1 >= k_2 >= ... (ratio <= 1) that sum to
/// n_layers * k_per_layer, each capped at the worker count; task blocks
/// stacked along x with spans proportional to k_l. Layer l uses the pure
/// x cut (k_l, 1, 1).
struct GeometricStrategy {
    std::int64_t n_layers = 1;
    std::int64_t k_per_layer = 1;
    double ratio = 1.0;
};

using LayerStrategy = std::variant<UniformStrategy, ExplicitStrategy, GeometricStrategy>;

/// The integer profile GeometricStrategy uses: non-increasing, each entry in
/// [1, k_max], summing to k_total.
std::vector<std::int64_t> geometric_profile(std::int64_t n_layers, std::int64_t k_total,
                                            double ratio, std::int64_t k_max);

HierarchicalPlan build_plan(const Cuboid& c, std::int64_t n_workers,
                            const LayerStrategy& strategy, Scheme scheme);

/// The one code spanning all layers of a sum-rate plan.
CodeSpec sum_rate_code_spec(const HierarchicalPlan& plan);

/// Encode A and B for every worker. Polynomial/matdot plans give each worker
/// one job per layer; sum-rate plans give each worker a single job covering
/// all layers.
std::vector<WorkerQueue> encode_plan(const HierarchicalPlan& plan, const Matrix& a,
                                     const Matrix& b);

/// received[l] = number of distinct results the master holds for layer l+1.
std::vector<bool> layer_decodable(const std::vector<std::int64_t>& received,
                                  const HierarchicalPlan& plan);

/// Decode one layer's results into its task-block product
/// A[X_l x Z_l] * B[Z_l x Y_l].
Matrix decode_layer(const std::vector<CodedResult>& results, const LayerSpec& layer);

/// Stitch layer products into the full nx x ny output; blocks sharing an
/// (x, y) footprint add up across z.
Matrix assemble(const std::vector<std::pair<TaskBlock, Matrix>>& layer_products, const Cuboid& c);

/// Decode a sum-rate plan's results straight to the assembled product.
Matrix decode_sum_rate(const HierarchicalPlan& plan, const std::vector<CodedResult>& results);

/// Slabs of one layer's operands in encoding order: for polynomial layers
/// m_x-indexed row slabs of A and m_y-indexed column slabs of B; for matdot
/// layers m_z-indexed column/row slabs.
LayerBlocks layer_operand_blocks(const LayerSpec& layer, const Matrix& a, const Matrix& b);

}  // namespace codedmm
