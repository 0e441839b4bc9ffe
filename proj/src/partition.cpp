#include "codedmm/partition.hpp"

#include "codedmm/errors.hpp"

namespace codedmm {

void Cuboid::validate() const {
    if (nx < 1 || nz < 1 || ny < 1) {
        throw ValidationError("cuboid edge lengths must be >= 1, got (" + std::to_string(nx) +
                              "," + std::to_string(nz) + "," + std::to_string(ny) + ")");
    }
}

void CutSpec::validate() const {
    if (mx < 1 || mz < 1 || my < 1) {
        throw ValidationError("cut multiplicities must be >= 1, got (" + std::to_string(mx) +
                              "," + std::to_string(mz) + "," + std::to_string(my) + ")");
    }
}

std::string CutCategory::label() const {
    std::string out = "{";
    const char* sep = "";
    if (x) { out += sep; out += "x"; sep = ","; }
    if (z) { out += sep; out += "z"; sep = ","; }
    if (y) { out += sep; out += "y"; sep = ","; }
    return out + "}";
}

namespace {

std::int64_t exact_div(std::int64_t edge, std::int64_t cuts, char axis) {
    if (edge % cuts != 0) throw DivisibilityError(axis, edge, cuts);
    return edge / cuts;
}

}  // namespace

std::vector<TaskBlock> slice_cuboid(const Cuboid& c, const CutSpec& cut) {
    c.validate();
    cut.validate();
    const std::int64_t sx = exact_div(c.nx, cut.mx, 'x');
    const std::int64_t sz = exact_div(c.nz, cut.mz, 'z');
    const std::int64_t sy = exact_div(c.ny, cut.my, 'y');

    std::vector<TaskBlock> blocks;
    blocks.reserve(static_cast<std::size_t>(cut.info_dim()));
    std::int64_t id = 1;
    for (std::int64_t ix = 0; ix < cut.mx; ++ix) {
        for (std::int64_t iz = 0; iz < cut.mz; ++iz) {
            for (std::int64_t iy = 0; iy < cut.my; ++iy) {
                blocks.push_back(TaskBlock{
                    IndexRange{ix * sx + 1, (ix + 1) * sx},
                    IndexRange{iz * sz + 1, (iz + 1) * sz},
                    IndexRange{iy * sy + 1, (iy + 1) * sy},
                    id++,
                });
            }
        }
    }
    return blocks;
}

std::vector<InformationBlock> partition_task_block(const TaskBlock& tb, const CutSpec& cut) {
    cut.validate();
    const std::int64_t sx = exact_div(tb.x_set.size(), cut.mx, 'x');
    const std::int64_t sz = exact_div(tb.z_set.size(), cut.mz, 'z');
    const std::int64_t sy = exact_div(tb.y_set.size(), cut.my, 'y');

    std::vector<InformationBlock> blocks;
    blocks.reserve(static_cast<std::size_t>(cut.info_dim()));
    for (std::int64_t bx = 1; bx <= cut.mx; ++bx) {
        for (std::int64_t bz = 1; bz <= cut.mz; ++bz) {
            for (std::int64_t by = 1; by <= cut.my; ++by) {
                blocks.push_back(InformationBlock{
                    bx, bz, by,
                    IndexRange{tb.x_set.first + (bx - 1) * sx, tb.x_set.first + bx * sx - 1},
                    IndexRange{tb.z_set.first + (bz - 1) * sz, tb.z_set.first + bz * sz - 1},
                    IndexRange{tb.y_set.first + (by - 1) * sy, tb.y_set.first + by * sy - 1},
                });
            }
        }
    }
    return blocks;
}

CutCategory classify(const CutSpec& cut) {
    cut.validate();
    return CutCategory{cut.mx > 1, cut.mz > 1, cut.my > 1};
}

std::pair<Matrix, Matrix> extract_block_operands(const Matrix& a, const Matrix& b,
                                                 const InformationBlock& ib) {
    if (a.cols() != b.rows()) {
        throw ShapeError("operands do not share a contraction dimension: A has " +
                         std::to_string(a.cols()) + " columns, B has " +
                         std::to_string(b.rows()) + " rows");
    }
    if (ib.x_range.last > a.rows() || ib.z_range.last > a.cols() || ib.y_range.last > b.cols()) {
        throw ShapeError("information block exceeds operand shapes");
    }
    return {submatrix(a, ib.x_range, ib.z_range), submatrix(b, ib.z_range, ib.y_range)};
}

void check_operands(const Matrix& a, const Matrix& b, const Cuboid& c) {
    if (a.rows() != c.nx || a.cols() != c.nz) {
        throw ShapeError("A is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         ", expected " + std::to_string(c.nx) + "x" + std::to_string(c.nz));
    }
    if (b.rows() != c.nz || b.cols() != c.ny) {
        throw ShapeError("B is " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()) +
                         ", expected " + std::to_string(c.nz) + "x" + std::to_string(c.ny));
    }
}

}  // namespace codedmm
