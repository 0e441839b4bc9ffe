#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "codedmm/matrix.hpp"

namespace codedmm {

/// The lattice of multiply-accumulate operations behind an A*B product:
/// nx rows of A, nz contraction steps, ny columns of B.
struct Cuboid {
    std::int64_t nx = 1;
    std::int64_t nz = 1;
    std::int64_t ny = 1;

    std::int64_t volume() const { return nx * nz * ny; }
    void validate() const;

    bool operator==(const Cuboid&) const = default;
};

/// Cut multiplicities along each axis; 1 means the axis is left whole.
struct CutSpec {
    std::int64_t mx = 1;
    std::int64_t mz = 1;
    std::int64_t my = 1;

    /// Number of equal pieces the cut produces.
    std::int64_t info_dim() const { return mx * mz * my; }
    void validate() const;

    bool operator==(const CutSpec&) const = default;
};

/// Which axes a cut actually slices (multiplicity > 1). One of the eight
/// subsets of {x, z, y}.
struct CutCategory {
    bool x = false;
    bool z = false;
    bool y = false;

    /// "{}", "{x}", "{x,y}", "{x,z,y}", ...
    std::string label() const;

    bool operator==(const CutCategory&) const = default;
};

/// Axis-aligned subcuboid assigned to one layer of computation. Ranges are
/// 1-based closed intervals into the parent cuboid.
struct TaskBlock {
    IndexRange x_set;
    IndexRange z_set;
    IndexRange y_set;
    std::int64_t layer_id = 1;

    std::int64_t volume() const { return x_set.size() * z_set.size() * y_set.size(); }

    bool operator==(const TaskBlock&) const = default;
};

/// One of the equal-sized pieces of a task block; the unit of encoded work.
/// Ranges are global (into the parent cuboid), block_index is the 1-based
/// (m_x, m_z, m_y) position within the task block's cut grid.
struct InformationBlock {
    std::int64_t bx = 1;
    std::int64_t bz = 1;
    std::int64_t by = 1;
    IndexRange x_range;
    IndexRange z_range;
    IndexRange y_range;

    std::int64_t volume() const { return x_range.size() * z_range.size() * y_range.size(); }

    bool operator==(const InformationBlock&) const = default;
};

/// Slice a cuboid into cut.info_dim() equal subcuboids, ordered x-major,
/// then z, then y. Each axis must divide exactly.
std::vector<TaskBlock> slice_cuboid(const Cuboid& c, const CutSpec& cut);

/// Partition one task block into cut.info_dim() equal information blocks in
/// lexicographic (m_x, m_z, m_y) order.
std::vector<InformationBlock> partition_task_block(const TaskBlock& tb, const CutSpec& cut);

/// The subset of axes this cut slices.
CutCategory classify(const CutSpec& cut);

/// The A and B submatrices feeding one information block:
/// (A[x_range x z_range], B[z_range x y_range]).
std::pair<Matrix, Matrix> extract_block_operands(const Matrix& a, const Matrix& b,
                                                 const InformationBlock& ib);

/// Check that a and b have the shapes the cuboid describes (a: nx x nz,
/// b: nz x ny); throws ShapeError otherwise.
void check_operands(const Matrix& a, const Matrix& b, const Cuboid& c);

}  // namespace codedmm
