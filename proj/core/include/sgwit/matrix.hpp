#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sgwit/ring.hpp"

namespace sgwit {

class DiagonalMatrix;

/// Immutable n x n matrix over one RingSpec; all entries canonical. n >= 1 is
/// allowed internally (minors); the witness entry points require n >= 2.
class Matrix {
 public:
  Matrix(RingSpec ring, int n, std::vector<Element> entries);
  static Matrix identity(const RingSpec& ring, int n);
  /// Parses nested arrays of element strings, e.g. [[1,2],[0,1]]; entries may
  /// be double-quoted (JSON style).
  static Matrix parse(const RingSpec& ring, std::string_view text);

  const RingSpec& ring() const { return ring_; }
  int dim() const { return n_; }
  const Element& at(int i, int j) const { return e_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<Element>& entries() const { return e_; }

  Matrix mul(const Matrix& o) const;
  friend Matrix operator*(const Matrix& a, const Matrix& b) { return a.mul(b); }
  /// Right multiplication by a diagonal matrix (column scaling).
  Matrix mul_diag_right(const DiagonalMatrix& d) const;

  bool zero_at(int i, int j) const { return ring_.is_zero(at(i, j)); }
  bool is_identity() const;
  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  /// Nested arrays of canonical element strings (row-major).
  std::string to_text() const;
  /// FNV-1a 64 hash of ring + canonical text, as fixed-width hex.
  std::string fingerprint() const;

 private:
  RingSpec ring_;
  int n_;
  std::vector<Element> e_;
};

/// Invertible diagonal matrix: every entry must pass invert_element.
class DiagonalMatrix {
 public:
  DiagonalMatrix(RingSpec ring, std::vector<Element> entries);
  const RingSpec& ring() const { return ring_; }
  int dim() const { return static_cast<int>(e_.size()); }
  const Element& at(int i) const { return e_[i]; }
  const std::vector<Element>& entries() const { return e_; }
  DiagonalMatrix inverse() const;
  Matrix to_matrix() const;
  bool is_identity() const;
  bool operator==(const DiagonalMatrix& o) const { return ring_ == o.ring_ && e_ == o.e_; }
  bool operator!=(const DiagonalMatrix& o) const { return !(*this == o); }

 private:
  RingSpec ring_;
  std::vector<Element> e_;
};

/// Exact two-sided inverse, or absent when a is not in GL(n,R). Division
/// rings use row elimination; rings with a nonzero radical invert the image
/// in the semisimple quotient, lift, and run the Newton step
/// X <- X(2e - aX), which terminates within nilpotency_exponent rounds.
std::optional<Matrix> invert_matrix(const Matrix& a);

/// The matrix with row i and column j removed (0-based); n must be >= 2.
Matrix minor_matrix(const Matrix& a, int i, int j);

/// Block expansion GL(n, M(k,T)) -> GL(nk, T) and its inverses.
Matrix flatten(const Matrix& a);
Matrix unflatten(const Matrix& flat, const RingSpec& block_ring);
DiagonalMatrix unflatten_diag(const DiagonalMatrix& d, const RingSpec& block_ring);

/// Smallest k >= 1 with a^k = e; requires a finite ring and invertible a.
unsigned long element_order(const Matrix& a);

}  // namespace sgwit
