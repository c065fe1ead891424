#pragma once

#include <optional>
#include <vector>

#include "sgwit/ring.hpp"

namespace sgwit::detail {

/// Gauss-Jordan inverse over a division ring using left row operations
/// (valid over skew fields; pivoting picks the first nonzero entry in column
/// order). entries are row-major n x n. Absent when singular.
std::optional<std::vector<Element>> invert_square(const RingSpec& division_ring, int n,
                                                  const std::vector<Element>& entries);

/// Basis of the left null space {x : x * B = 0} of a rows x cols array over
/// a division ring; each basis vector has length rows. Solutions form a left
/// vector space: elimination tracks E with E*B in reduced echelon form and
/// returns the rows of E aligned with the zero rows.
std::vector<std::vector<Element>> left_nullspace(const RingSpec& division_ring, int rows, int cols,
                                                 const std::vector<Element>& entries);

}  // namespace sgwit::detail
