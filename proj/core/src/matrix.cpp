#include "sgwit/matrix.hpp"

#include <cctype>
#include <cstdint>
#include <cstdio>

#include "sgwit/errors.hpp"
#include "sgwit/linalg.hpp"

namespace sgwit {

Matrix::Matrix(RingSpec ring, int n, std::vector<Element> entries) : ring_(std::move(ring)), n_(n) {
  if (n < 1) throw Error("matrix dimension must be >= 1");
  if (entries.size() != static_cast<std::size_t>(n) * n)
    throw Error("matrix entry count does not match dimension");
  for (const Element& x : entries) ring_.validate(x);
  e_ = std::move(entries);
}

Matrix Matrix::identity(const RingSpec& ring, int n) {
  std::vector<Element> e(static_cast<std::size_t>(n) * n, ring.zero());
  for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i) * n + i] = ring.one();
  return Matrix(ring, n, std::move(e));
}

Matrix Matrix::mul(const Matrix& o) const {
  if (ring_ != o.ring_ || n_ != o.n_) throw Error("matrix multiplication: ring or dimension mismatch");
  std::vector<Element> out(static_cast<std::size_t>(n_) * n_, ring_.zero());
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      Element acc = ring_.zero();
      for (int r = 0; r < n_; ++r) acc = ring_.add(acc, ring_.mul(at(i, r), o.at(r, j)));
      out[static_cast<std::size_t>(i) * n_ + j] = std::move(acc);
    }
  return Matrix(ring_, n_, std::move(out));
}

Matrix Matrix::mul_diag_right(const DiagonalMatrix& d) const {
  if (ring_ != d.ring() || n_ != d.dim()) throw Error("diagonal multiplication: ring or dimension mismatch");
  std::vector<Element> out;
  out.reserve(e_.size());
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out.push_back(ring_.mul(at(i, j), d.at(j)));
  return Matrix(ring_, n_, std::move(out));
}

bool Matrix::is_identity() const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      if (i == j && !ring_.is_one(at(i, j))) return false;
      if (i != j && !ring_.is_zero(at(i, j))) return false;
    }
  return true;
}

bool Matrix::operator==(const Matrix& o) const { return ring_ == o.ring_ && n_ == o.n_ && e_ == o.e_; }

std::string Matrix::to_text() const {
  std::string out = "[";
  for (int i = 0; i < n_; ++i) {
    if (i) out += ',';
    out += '[';
    for (int j = 0; j < n_; ++j) {
      if (j) out += ',';
      out += ring_.format_element(at(i, j));
    }
    out += ']';
  }
  return out + "]";
}

std::string Matrix::fingerprint() const {
  const std::string text = ring_.to_string() + ":" + to_text();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

Matrix Matrix::parse(const RingSpec& ring, std::string_view text) {
  std::string s;
  s.reserve(text.size());
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw ParseError("matrix text must be [[...],...]");
  const auto rows = detail::split_top_level(std::string_view(s).substr(1, s.size() - 2), ',');
  const int n = static_cast<int>(rows.size());
  std::vector<Element> entries;
  entries.reserve(static_cast<std::size_t>(n) * n);
  for (const auto& row : rows) {
    if (row.size() < 2 || row.front() != '[' || row.back() != ']')
      throw ParseError("matrix row must be [...]: '" + std::string(row) + "'");
    const auto cells = detail::split_top_level(row.substr(1, row.size() - 2), ',');
    if (static_cast<int>(cells.size()) != n) throw ParseError("matrix is not square");
    for (auto cell : cells) {
      if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') cell = cell.substr(1, cell.size() - 2);
      entries.push_back(ring.parse_element(cell));
    }
  }
  return Matrix(ring, n, std::move(entries));
}

// ---------------------------------------------------------------------------
// DiagonalMatrix
// ---------------------------------------------------------------------------

DiagonalMatrix::DiagonalMatrix(RingSpec ring, std::vector<Element> entries) : ring_(std::move(ring)) {
  if (entries.empty()) throw Error("diagonal matrix must have at least one entry");
  for (const Element& x : entries) {
    ring_.validate(x);
    if (!ring_.is_unit(x)) throw Error("diagonal entry is not a unit: " + ring_.format_element(x));
  }
  e_ = std::move(entries);
}

DiagonalMatrix DiagonalMatrix::inverse() const {
  std::vector<Element> inv;
  inv.reserve(e_.size());
  for (const Element& x : e_) inv.push_back(*ring_.invert(x));
  return DiagonalMatrix(ring_, std::move(inv));
}

Matrix DiagonalMatrix::to_matrix() const {
  const int n = dim();
  std::vector<Element> e(static_cast<std::size_t>(n) * n, ring_.zero());
  for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i) * n + i] = e_[i];
  return Matrix(ring_, n, std::move(e));
}

bool DiagonalMatrix::is_identity() const {
  for (const Element& x : e_)
    if (!ring_.is_one(x)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// inversion
// ---------------------------------------------------------------------------

namespace {

Matrix matrix_sub(const Matrix& a, const Matrix& b) {
  std::vector<Element> out;
  out.reserve(a.entries().size());
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    out.push_back(a.ring().sub(a.entries()[i], b.entries()[i]));
  return Matrix(a.ring(), a.dim(), std::move(out));
}

Matrix scaled_identity(const RingSpec& ring, int n, long value) {
  std::vector<Element> e(static_cast<std::size_t>(n) * n, ring.zero());
  for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i) * n + i] = ring.from_integer(value);
  return Matrix(ring, n, std::move(e));
}

Matrix project_matrix(const Matrix& a, const SemisimpleDecomposition& dec, std::size_t t) {
  std::vector<Element> e;
  e.reserve(a.entries().size());
  for (const Element& x : a.entries()) e.push_back(dec.project(x, t));
  return Matrix(dec.components()[t], a.dim(), std::move(e));
}

}  // namespace

std::optional<Matrix> invert_matrix(const Matrix& a) {
  const RingSpec& ring = a.ring();
  const int n = a.dim();
  if (ring.is_division_ring()) {
    auto inv = detail::invert_square(ring, n, a.entries());
    if (!inv) return std::nullopt;
    return Matrix(ring, n, std::move(*inv));
  }
  if (ring.kind() == RingKind::MatrixRing) {
    auto inv = invert_matrix(flatten(a));
    if (!inv) return std::nullopt;
    return unflatten(*inv, ring);
  }

  // General Artinian case: invert each simple-component image, lift, and
  // correct modulo the radical with the Newton step.
  const SemisimpleDecomposition dec = ring.semisimple_decompose();
  std::vector<Matrix> component_inverses;
  component_inverses.reserve(dec.components().size());
  for (std::size_t t = 0; t < dec.components().size(); ++t) {
    auto inv = invert_matrix(project_matrix(a, dec, t));
    if (!inv) return std::nullopt;
    component_inverses.push_back(std::move(*inv));
  }
  std::vector<Element> lifted;
  lifted.reserve(a.entries().size());
  for (std::size_t idx = 0; idx < a.entries().size(); ++idx) {
    std::vector<Element> comps;
    comps.reserve(dec.components().size());
    for (const Matrix& ci : component_inverses) comps.push_back(ci.entries()[idx]);
    lifted.push_back(dec.lift(comps));
  }
  Matrix x(ring, n, std::move(lifted));
  const Matrix e = Matrix::identity(ring, n);
  const Matrix two_e = scaled_identity(ring, n, 2);
  for (int round = 0; round <= ring.nilpotency_exponent(); ++round) {
    if (a.mul(x) == e) {
      if (!(x.mul(a) == e)) throw InternalError("invert_matrix: one-sided inverse over a supported ring");
      return x;
    }
    x = x.mul(matrix_sub(two_e, a.mul(x)));
  }
  throw InternalError("invert_matrix: Newton iteration exceeded the nilpotency exponent");
}

Matrix minor_matrix(const Matrix& a, int i, int j) {
  const int n = a.dim();
  if (n < 2) throw Error("minor requires dimension >= 2");
  if (i < 0 || i >= n || j < 0 || j >= n) throw Error("minor index out of range");
  std::vector<Element> out;
  out.reserve(static_cast<std::size_t>(n - 1) * (n - 1));
  for (int r = 0; r < n; ++r) {
    if (r == i) continue;
    for (int c = 0; c < n; ++c) {
      if (c == j) continue;
      out.push_back(a.at(r, c));
    }
  }
  return Matrix(a.ring(), n - 1, std::move(out));
}

// ---------------------------------------------------------------------------
// block expansion
// ---------------------------------------------------------------------------

Matrix flatten(const Matrix& a) {
  const RingSpec& ring = a.ring();
  if (ring.kind() != RingKind::MatrixRing) throw Error("flatten requires a matrix-ring spec");
  const int k = ring.block_dim();
  const int n = a.dim();
  const RingSpec& base = ring.base_ring();
  std::vector<Element> out(static_cast<std::size_t>(n) * k * n * k, base.zero());
  const int w = n * k;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Element::Block& b = a.at(i, j).block();
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
          out[static_cast<std::size_t>(i * k + r) * w + (j * k + c)] = b.entries[r * k + c];
    }
  return Matrix(base, w, std::move(out));
}

Matrix unflatten(const Matrix& flat, const RingSpec& block_ring) {
  if (block_ring.kind() != RingKind::MatrixRing) throw Error("unflatten requires a matrix-ring spec");
  const int k = block_ring.block_dim();
  if (flat.ring() != block_ring.base_ring()) throw Error("unflatten: base ring mismatch");
  if (flat.dim() % k != 0) throw Error("unflatten: dimension not divisible by block size");
  const int n = flat.dim() / k;
  std::vector<Element> out;
  out.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<Element> blk;
      blk.reserve(static_cast<std::size_t>(k) * k);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) blk.push_back(flat.at(i * k + r, j * k + c));
      out.push_back(Element::block(k, std::move(blk)));
    }
  return Matrix(block_ring, n, std::move(out));
}

DiagonalMatrix unflatten_diag(const DiagonalMatrix& d, const RingSpec& block_ring) {
  if (block_ring.kind() != RingKind::MatrixRing) throw Error("unflatten_diag requires a matrix-ring spec");
  const int k = block_ring.block_dim();
  if (d.ring() != block_ring.base_ring()) throw Error("unflatten_diag: base ring mismatch");
  if (d.dim() % k != 0) throw Error("unflatten_diag: dimension not divisible by block size");
  const int n = d.dim() / k;
  const RingSpec& base = block_ring.base_ring();
  std::vector<Element> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::vector<Element> blk(static_cast<std::size_t>(k) * k, base.zero());
    for (int r = 0; r < k; ++r) blk[static_cast<std::size_t>(r) * k + r] = d.at(i * k + r);
    out.push_back(Element::block(k, std::move(blk)));
  }
  return DiagonalMatrix(block_ring, std::move(out));
}

unsigned long element_order(const Matrix& a) {
  if (!a.ring().is_finite()) throw Error("element_order requires a finite ring");
  if (!invert_matrix(a)) throw Error("element_order requires an invertible matrix");
  const Matrix e = Matrix::identity(a.ring(), a.dim());
  Matrix power = a;
  unsigned long k = 1;
  constexpr unsigned long kMaxOrder = 10000000;
  while (!(power == e)) {
    power = power.mul(a);
    if (++k > kMaxOrder) throw InternalError("element_order: order exceeds safety bound");
  }
  return k;
}

}  // namespace sgwit
