#include "sgwit/linalg.hpp"

#include "sgwit/errors.hpp"

namespace sgwit::detail {

namespace {

void check_division_ring(const RingSpec& ring) {
  if (!ring.is_division_ring()) throw InternalError("linalg: elimination requires a division ring");
}

}  // namespace

std::optional<std::vector<Element>> invert_square(const RingSpec& ring, int n,
                                                  const std::vector<Element>& entries) {
  check_division_ring(ring);
  if (n == 0) return std::vector<Element>{};
  // Augmented [A | I], row-major, width 2n.
  const int w = 2 * n;
  std::vector<Element> aug(static_cast<std::size_t>(n) * w, ring.zero());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug[i * w + j] = entries[i * n + j];
    aug[i * w + n + i] = ring.one();
  }
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (!ring.is_zero(aug[r * w + col])) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return std::nullopt;
    if (pivot != col)
      for (int j = 0; j < w; ++j) std::swap(aug[pivot * w + j], aug[col * w + j]);
    const Element inv = *ring.invert(aug[col * w + col]);
    for (int j = 0; j < w; ++j) aug[col * w + j] = ring.mul(inv, aug[col * w + j]);
    for (int i = 0; i < n; ++i) {
      if (i == col || ring.is_zero(aug[i * w + col])) continue;
      const Element factor = aug[i * w + col];
      for (int j = 0; j < w; ++j)
        aug[i * w + j] = ring.sub(aug[i * w + j], ring.mul(factor, aug[col * w + j]));
    }
  }
  std::vector<Element> out(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i * n + j] = aug[i * w + n + j];
  return out;
}

std::vector<std::vector<Element>> left_nullspace(const RingSpec& ring, int rows, int cols,
                                                 const std::vector<Element>& entries) {
  check_division_ring(ring);
  std::vector<Element> work = entries;
  std::vector<Element> track(static_cast<std::size_t>(rows) * rows, ring.zero());
  for (int i = 0; i < rows; ++i) track[i * rows + i] = ring.one();

  auto swap_rows = [&](int a, int b) {
    for (int j = 0; j < cols; ++j) std::swap(work[a * cols + j], work[b * cols + j]);
    for (int j = 0; j < rows; ++j) std::swap(track[a * rows + j], track[b * rows + j]);
  };
  auto scale_row = [&](int r, const Element& s) {
    for (int j = 0; j < cols; ++j) work[r * cols + j] = ring.mul(s, work[r * cols + j]);
    for (int j = 0; j < rows; ++j) track[r * rows + j] = ring.mul(s, track[r * rows + j]);
  };
  auto sub_scaled = [&](int dst, const Element& s, int src) {
    for (int j = 0; j < cols; ++j)
      work[dst * cols + j] = ring.sub(work[dst * cols + j], ring.mul(s, work[src * cols + j]));
    for (int j = 0; j < rows; ++j)
      track[dst * rows + j] = ring.sub(track[dst * rows + j], ring.mul(s, track[src * rows + j]));
  };

  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r) {
      if (!ring.is_zero(work[r * cols + col])) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != rank) swap_rows(pivot, rank);
    scale_row(rank, *ring.invert(work[rank * cols + col]));
    for (int i = 0; i < rows; ++i) {
      if (i == rank || ring.is_zero(work[i * cols + col])) continue;
      sub_scaled(i, work[i * cols + col], rank);
    }
    ++rank;
  }

  std::vector<std::vector<Element>> basis;
  for (int r = rank; r < rows; ++r) {
    std::vector<Element> v(rows);
    for (int j = 0; j < rows; ++j) v[j] = track[r * rows + j];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace sgwit::detail
