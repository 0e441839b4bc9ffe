#include "codedmm/hierarchical.hpp"

#include <algorithm>
#include <cmath>

#include "codedmm/errors.hpp"

namespace codedmm {

std::int64_t HierarchicalPlan::total_info_dim() const {
    std::int64_t k = 0;
    for (const auto& l : layers) k += l.info_dim;
    return k;
}

namespace {

bool ranges_overlap(const IndexRange& a, const IndexRange& b) {
    return a.first <= b.last && b.first <= a.last;
}

bool blocks_overlap(const TaskBlock& a, const TaskBlock& b) {
    return ranges_overlap(a.x_set, b.x_set) && ranges_overlap(a.z_set, b.z_set) &&
           ranges_overlap(a.y_set, b.y_set);
}

void check_block_in_cuboid(const TaskBlock& tb, const Cuboid& c) {
    if (tb.x_set.first < 1 || tb.x_set.last > c.nx || tb.x_set.size() < 1 ||
        tb.z_set.first < 1 || tb.z_set.last > c.nz || tb.z_set.size() < 1 ||
        tb.y_set.first < 1 || tb.y_set.last > c.ny || tb.y_set.size() < 1) {
        throw ValidationError("task block of layer " + std::to_string(tb.layer_id) +
                              " is empty or outside the cuboid");
    }
}

}  // namespace

void HierarchicalPlan::validate() const {
    cuboid.validate();
    if (n_workers < 1) throw ValidationError("plan needs at least one worker");
    if (layers.empty()) throw ValidationError("plan has no layers");

    std::int64_t covered = 0;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const auto& l = layers[i];
        if (l.task_block.layer_id != static_cast<std::int64_t>(i) + 1) {
            throw ValidationError("layer ids must be 1..L in order");
        }
        check_block_in_cuboid(l.task_block, cuboid);
        if (l.task_block.x_set.size() % l.cut.mx != 0) {
            throw DivisibilityError('x', l.task_block.x_set.size(), l.cut.mx);
        }
        if (l.task_block.z_set.size() % l.cut.mz != 0) {
            throw DivisibilityError('z', l.task_block.z_set.size(), l.cut.mz);
        }
        if (l.task_block.y_set.size() % l.cut.my != 0) {
            throw DivisibilityError('y', l.task_block.y_set.size(), l.cut.my);
        }
        if (l.info_dim != l.cut.info_dim()) {
            throw ValidationError("layer " + std::to_string(i + 1) +
                                  ": info_dim does not match its cut");
        }
        if (l.code.cut != l.cut) {
            throw ValidationError("layer " + std::to_string(i + 1) +
                                  ": code cut does not match layer cut");
        }
        if (l.code.n_workers != n_workers) {
            throw ValidationError("layer " + std::to_string(i + 1) +
                                  ": code worker count does not match plan");
        }
        l.code.validate();
        if (l.threshold != recovery_threshold(l.code)) {
            throw ValidationError("layer " + std::to_string(i + 1) +
                                  ": threshold does not match its code");
        }
        if (scheme == Scheme::sum_rate_polynomial) {
            if (l.cut.mz != 1) {
                throw ValidationError("sum-rate plans need x/y cut layers (mz == 1)");
            }
            if (l.code.eval_points != layers.front().code.eval_points) {
                throw ValidationError("sum-rate plans need one shared evaluation point set");
            }
        } else if (l.code.scheme != scheme) {
            throw ValidationError("layer " + std::to_string(i + 1) +
                                  ": code scheme does not match plan scheme");
        }
        covered += l.task_block.volume();
        for (std::size_t j = i + 1; j < layers.size(); ++j) {
            if (blocks_overlap(l.task_block, layers[j].task_block)) {
                throw ValidationError("task blocks of layers " + std::to_string(i + 1) + " and " +
                                      std::to_string(j + 1) + " overlap");
            }
        }
    }
    if (covered != cuboid.volume()) {
        throw ValidationError("task blocks cover " + std::to_string(covered) +
                              " basic operations, cuboid has " + std::to_string(cuboid.volume()));
    }
    if (scheme == Scheme::sum_rate_polynomial && total_info_dim() > n_workers) {
        throw ValidationError("sum-rate threshold " + std::to_string(total_info_dim()) +
                              " exceeds " + std::to_string(n_workers) + " workers");
    }
}

std::vector<std::int64_t> geometric_profile(std::int64_t n_layers, std::int64_t k_total,
                                            double ratio, std::int64_t k_max) {
    if (n_layers < 1) throw ValidationError("need at least one layer");
    if (ratio <= 0.0 || ratio > 1.0) throw ValidationError("ratio must be in (0, 1]");
    if (k_total < n_layers || k_total > n_layers * k_max) {
        throw ValidationError("total info dim " + std::to_string(k_total) +
                              " cannot be split into " + std::to_string(n_layers) +
                              " layers of size 1.." + std::to_string(k_max));
    }

    std::vector<std::int64_t> k(static_cast<std::size_t>(n_layers));
    double weight_sum = 0.0, w = 1.0;
    for (std::int64_t l = 0; l < n_layers; ++l, w *= ratio) weight_sum += w;
    w = 1.0;
    for (std::int64_t l = 0; l < n_layers; ++l, w *= ratio) {
        const double target = static_cast<double>(k_total) * w / weight_sum;
        k[static_cast<std::size_t>(l)] = std::clamp<std::int64_t>(std::llround(target), 1, k_max);
    }
    for (std::int64_t l = 1; l < n_layers; ++l) {
        k[static_cast<std::size_t>(l)] =
            std::min(k[static_cast<std::size_t>(l)], k[static_cast<std::size_t>(l - 1)]);
    }

    auto sum = [&] {
        std::int64_t s = 0;
        for (auto v : k) s += v;
        return s;
    };
    while (sum() < k_total) {
        bool changed = false;
        for (std::int64_t l = 0; l < n_layers && sum() < k_total; ++l) {
            const std::int64_t cap =
                l == 0 ? k_max : std::min(k_max, k[static_cast<std::size_t>(l - 1)]);
            if (k[static_cast<std::size_t>(l)] < cap) {
                ++k[static_cast<std::size_t>(l)];
                changed = true;
            }
        }
        if (!changed) throw ValidationError("cannot reach requested total info dim");
    }
    while (sum() > k_total) {
        bool changed = false;
        for (std::int64_t l = n_layers - 1; l >= 0 && sum() > k_total; --l) {
            const std::int64_t floor_l =
                l == n_layers - 1 ? 1 : std::max<std::int64_t>(1, k[static_cast<std::size_t>(l + 1)]);
            if (k[static_cast<std::size_t>(l)] > floor_l) {
                --k[static_cast<std::size_t>(l)];
                changed = true;
            }
        }
        if (!changed) throw ValidationError("cannot reach requested total info dim");
    }
    return k;
}

namespace {

LayerSpec make_layer(const TaskBlock& tb, const CutSpec& cut, std::int64_t n_workers,
                     Scheme scheme, const std::vector<double>& eval_points) {
    CodeSpec code;
    code.scheme = scheme == Scheme::sum_rate_polynomial ? Scheme::polynomial : scheme;
    code.cut = cut;
    code.n_workers = n_workers;
    code.eval_points = eval_points;
    LayerSpec layer{tb, cut, cut.info_dim(), recovery_threshold(code), std::move(code)};
    return layer;
}

std::vector<TaskBlock> stack_along_x(const Cuboid& c, const std::vector<std::int64_t>& spans) {
    std::int64_t total = 0;
    for (auto s : spans) {
        if (s < 1) throw ValidationError("layer x spans must be >= 1");
        total += s;
    }
    if (total != c.nx) {
        throw ValidationError("layer x spans sum to " + std::to_string(total) +
                              ", cuboid x edge is " + std::to_string(c.nx));
    }
    std::vector<TaskBlock> blocks;
    blocks.reserve(spans.size());
    std::int64_t x = 1;
    for (std::size_t l = 0; l < spans.size(); ++l) {
        blocks.push_back(TaskBlock{IndexRange{x, x + spans[l] - 1}, IndexRange{1, c.nz},
                                   IndexRange{1, c.ny}, static_cast<std::int64_t>(l) + 1});
        x += spans[l];
    }
    return blocks;
}

/// x spans proportional to the per-layer info dims, which makes every
/// information block the same size: span_l = nx * k_l / k_total.
std::vector<std::int64_t> proportional_spans(const Cuboid& c,
                                             const std::vector<std::int64_t>& dims) {
    std::int64_t k_total = 0;
    for (auto k : dims) k_total += k;
    if (c.nx % k_total != 0) throw DivisibilityError('x', c.nx, k_total);
    std::vector<std::int64_t> spans;
    spans.reserve(dims.size());
    for (auto k : dims) spans.push_back(c.nx / k_total * k);
    return spans;
}

}  // namespace

HierarchicalPlan build_plan(const Cuboid& c, std::int64_t n_workers,
                            const LayerStrategy& strategy, Scheme scheme) {
    c.validate();
    if (n_workers < 1) throw ValidationError("plan needs at least one worker");
    const auto eval_points = chebyshev_points(n_workers);

    HierarchicalPlan plan;
    plan.cuboid = c;
    plan.n_workers = n_workers;
    plan.scheme = scheme;

    if (const auto* uni = std::get_if<UniformStrategy>(&strategy)) {
        if (uni->n_layers < 1) throw ValidationError("need at least one layer");
        if (c.nx % uni->n_layers != 0) throw DivisibilityError('x', c.nx, uni->n_layers);
        std::vector<std::int64_t> spans(static_cast<std::size_t>(uni->n_layers),
                                        c.nx / uni->n_layers);
        for (const auto& tb : stack_along_x(c, spans)) {
            plan.layers.push_back(make_layer(tb, uni->cut, n_workers, scheme, eval_points));
        }
    } else if (const auto* ex = std::get_if<ExplicitStrategy>(&strategy)) {
        if (ex->cuts.empty()) throw ValidationError("explicit strategy needs at least one layer");
        std::vector<TaskBlock> blocks;
        if (!ex->task_blocks.empty()) {
            if (ex->task_blocks.size() != ex->cuts.size()) {
                throw ValidationError("task block list and cut list differ in length");
            }
            blocks = ex->task_blocks;
            for (std::size_t l = 0; l < blocks.size(); ++l) {
                blocks[l].layer_id = static_cast<std::int64_t>(l) + 1;
            }
        } else if (!ex->x_spans.empty()) {
            if (ex->x_spans.size() != ex->cuts.size()) {
                throw ValidationError("x span list and cut list differ in length");
            }
            blocks = stack_along_x(c, ex->x_spans);
        } else {
            std::vector<std::int64_t> dims;
            for (const auto& cut : ex->cuts) dims.push_back(cut.info_dim());
            blocks = stack_along_x(c, proportional_spans(c, dims));
        }
        for (std::size_t l = 0; l < blocks.size(); ++l) {
            plan.layers.push_back(make_layer(blocks[l], ex->cuts[l], n_workers, scheme,
                                              eval_points));
        }
    } else if (const auto* geo = std::get_if<GeometricStrategy>(&strategy)) {
        const auto dims = geometric_profile(geo->n_layers, geo->n_layers * geo->k_per_layer,
                                            geo->ratio, n_workers);
        const auto blocks = stack_along_x(c, proportional_spans(c, dims));
        for (std::size_t l = 0; l < blocks.size(); ++l) {
            plan.layers.push_back(make_layer(blocks[l], CutSpec{dims[l], 1, 1}, n_workers, scheme,
                                              eval_points));
        }
    } else {
        throw ValidationError("unknown layer strategy");
    }

    plan.validate();
    return plan;
}

CodeSpec sum_rate_code_spec(const HierarchicalPlan& plan) {
    plan.validate();
    CodeSpec spec;
    spec.scheme = Scheme::sum_rate_polynomial;
    spec.n_workers = plan.n_workers;
    spec.eval_points = plan.layers.front().code.eval_points;
    for (const auto& l : plan.layers) {
        if (l.cut.mz != 1) {
            throw ValidationError("sum-rate code supports x/y cut layers only (mz == 1)");
        }
        spec.sum_rate_layers.push_back(SumRateLayerShape{
            l.cut.mx, l.cut.my, l.task_block.x_set.size() / l.cut.mx, l.task_block.z_set.size(),
            l.task_block.y_set.size() / l.cut.my});
    }
    spec.validate();
    return spec;
}

LayerBlocks layer_operand_blocks(const LayerSpec& layer, const Matrix& a, const Matrix& b) {
    const auto& tb = layer.task_block;
    LayerBlocks blocks;
    blocks.cut = layer.cut;
    if (layer.code.scheme == Scheme::matdot) {
        const std::int64_t sz = tb.z_set.size() / layer.cut.mz;
        for (std::int64_t m = 0; m < layer.cut.mz; ++m) {
            const IndexRange z{tb.z_set.first + m * sz, tb.z_set.first + (m + 1) * sz - 1};
            blocks.a_blocks.push_back(submatrix(a, tb.x_set, z));
            blocks.b_blocks.push_back(submatrix(b, z, tb.y_set));
        }
    } else {
        const std::int64_t sx = tb.x_set.size() / layer.cut.mx;
        const std::int64_t sy = tb.y_set.size() / layer.cut.my;
        for (std::int64_t m = 0; m < layer.cut.mx; ++m) {
            const IndexRange x{tb.x_set.first + m * sx, tb.x_set.first + (m + 1) * sx - 1};
            blocks.a_blocks.push_back(submatrix(a, x, tb.z_set));
        }
        for (std::int64_t m = 0; m < layer.cut.my; ++m) {
            const IndexRange y{tb.y_set.first + m * sy, tb.y_set.first + (m + 1) * sy - 1};
            blocks.b_blocks.push_back(submatrix(b, tb.z_set, y));
        }
    }
    return blocks;
}

std::vector<WorkerQueue> encode_plan(const HierarchicalPlan& plan, const Matrix& a,
                                     const Matrix& b) {
    plan.validate();
    check_operands(a, b, plan.cuboid);

    std::vector<WorkerQueue> queues(static_cast<std::size_t>(plan.n_workers));
    for (std::int64_t n = 0; n < plan.n_workers; ++n) {
        queues[static_cast<std::size_t>(n)].worker_id = n + 1;
    }

    if (plan.scheme == Scheme::sum_rate_polynomial) {
        const auto spec = sum_rate_code_spec(plan);
        std::vector<LayerBlocks> all_blocks;
        all_blocks.reserve(plan.layers.size());
        for (const auto& l : plan.layers) all_blocks.push_back(layer_operand_blocks(l, a, b));
        auto jobs = sum_rate_encode(all_blocks, spec, plan.total_info_dim());
        for (std::int64_t n = 0; n < plan.n_workers; ++n) {
            queues[static_cast<std::size_t>(n)].jobs.push_back(
                std::move(jobs[static_cast<std::size_t>(n)]));
        }
        return queues;
    }

    for (const auto& layer : plan.layers) {
        auto blocks = layer_operand_blocks(layer, a, b);
        auto jobs = layer.code.scheme == Scheme::matdot
                        ? matdot_encode(blocks.a_blocks, blocks.b_blocks, layer.code)
                        : polynomial_encode(blocks.a_blocks, blocks.b_blocks, layer.code);
        for (std::int64_t n = 0; n < plan.n_workers; ++n) {
            queues[static_cast<std::size_t>(n)].jobs.push_back(
                std::move(jobs[static_cast<std::size_t>(n)]));
        }
    }
    return queues;
}

std::vector<bool> layer_decodable(const std::vector<std::int64_t>& received,
                                  const HierarchicalPlan& plan) {
    if (received.size() != plan.layers.size()) {
        throw ValidationError("need one received count per layer");
    }
    std::vector<bool> ok(plan.layers.size());
    for (std::size_t l = 0; l < plan.layers.size(); ++l) {
        if (received[l] < 0 || received[l] > plan.n_workers) {
            throw ValidationError("received count out of range for layer " + std::to_string(l + 1));
        }
        ok[l] = received[l] >= plan.layers[l].threshold;
    }
    return ok;
}

namespace {

/// Place the canonical (m_x, m_y) block products onto the layer's
/// |X| x |Y| output grid.
Matrix stitch_blocks(const std::vector<Matrix>& blocks, std::int64_t mx, std::int64_t my,
                     std::int64_t out_rows, std::int64_t out_cols) {
    const std::int64_t h = out_rows / mx;
    const std::int64_t w = out_cols / my;
    Matrix out(out_rows, out_cols);
    for (std::int64_t bx = 0; bx < mx; ++bx) {
        for (std::int64_t by = 0; by < my; ++by) {
            const auto& blk = blocks[static_cast<std::size_t>(bx * my + by)];
            if (blk.rows() != h || blk.cols() != w) {
                throw ShapeError("decoded block has shape " + std::to_string(blk.rows()) + "x" +
                                 std::to_string(blk.cols()) + ", expected " + std::to_string(h) +
                                 "x" + std::to_string(w));
            }
            for (std::int64_t r = 0; r < h; ++r) {
                for (std::int64_t c = 0; c < w; ++c) {
                    out(bx * h + r, by * w + c) = blk(r, c);
                }
            }
        }
    }
    return out;
}

}  // namespace

Matrix decode_layer(const std::vector<CodedResult>& results, const LayerSpec& layer) {
    const auto blocks = decode(results, layer.code);
    const std::int64_t rows = layer.task_block.x_set.size();
    const std::int64_t cols = layer.task_block.y_set.size();
    if (layer.code.scheme == Scheme::matdot) {
        const auto& p = blocks.front();
        if (p.rows() != rows || p.cols() != cols) {
            throw ShapeError("matdot layer product has unexpected shape");
        }
        return p;
    }
    return stitch_blocks(blocks, layer.cut.mx, layer.cut.my, rows, cols);
}

Matrix assemble(const std::vector<std::pair<TaskBlock, Matrix>>& layer_products, const Cuboid& c) {
    c.validate();
    std::int64_t covered = 0;
    std::int64_t max_id = 0;
    for (const auto& [tb, product] : layer_products) {
        check_block_in_cuboid(tb, c);
        if (product.rows() != tb.x_set.size() || product.cols() != tb.y_set.size()) {
            throw ShapeError("layer " + std::to_string(tb.layer_id) + " product is " +
                             std::to_string(product.rows()) + "x" + std::to_string(product.cols()) +
                             ", task block spans " + std::to_string(tb.x_set.size()) + "x" +
                             std::to_string(tb.y_set.size()));
        }
        covered += tb.volume();
        max_id = std::max(max_id, tb.layer_id);
    }
    for (std::size_t i = 0; i < layer_products.size(); ++i) {
        for (std::size_t j = i + 1; j < layer_products.size(); ++j) {
            if (blocks_overlap(layer_products[i].first, layer_products[j].first)) {
                throw ValidationError("task blocks of layers " +
                                      std::to_string(layer_products[i].first.layer_id) + " and " +
                                      std::to_string(layer_products[j].first.layer_id) +
                                      " overlap");
            }
        }
    }
    if (covered != c.volume()) {
        std::vector<std::int64_t> missing;
        std::vector<bool> present(static_cast<std::size_t>(max_id) + 1, false);
        for (const auto& [tb, _] : layer_products) {
            present[static_cast<std::size_t>(tb.layer_id)] = true;
        }
        for (std::int64_t id = 1; id <= max_id; ++id) {
            if (!present[static_cast<std::size_t>(id)]) missing.push_back(id);
        }
        throw IncompleteAssemblyError(std::move(missing));
    }

    Matrix out(c.nx, c.ny);
    for (const auto& [tb, product] : layer_products) {
        for (std::int64_t r = 0; r < product.rows(); ++r) {
            for (std::int64_t col = 0; col < product.cols(); ++col) {
                out(tb.x_set.first - 1 + r, tb.y_set.first - 1 + col) += product(r, col);
            }
        }
    }
    return out;
}

Matrix decode_sum_rate(const HierarchicalPlan& plan, const std::vector<CodedResult>& results) {
    if (plan.scheme != Scheme::sum_rate_polynomial) {
        throw ValidationError("decode_sum_rate needs a sum-rate plan");
    }
    const auto spec = sum_rate_code_spec(plan);
    const auto blocks = decode(results, spec);

    std::vector<std::pair<TaskBlock, Matrix>> products;
    products.reserve(plan.layers.size());
    std::size_t offset = 0;
    for (const auto& layer : plan.layers) {
        const std::size_t count = static_cast<std::size_t>(layer.info_dim);
        std::vector<Matrix> layer_blocks(blocks.begin() + static_cast<std::ptrdiff_t>(offset),
                                         blocks.begin() +
                                             static_cast<std::ptrdiff_t>(offset + count));
        products.emplace_back(layer.task_block,
                              stitch_blocks(layer_blocks, layer.cut.mx, layer.cut.my,
                                            layer.task_block.x_set.size(),
                                            layer.task_block.y_set.size()));
        offset += count;
    }
    return assemble(products, plan.cuboid);
}

}  // namespace codedmm
