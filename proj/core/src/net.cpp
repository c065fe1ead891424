#include "sgwit/net.hpp"

#include "sgwit/errors.hpp"

namespace sgwit {

NetPattern::NetPattern(int n, std::vector<std::vector<bool>> allow) : n_(n) {
  if (n < 1 || allow.size() != static_cast<std::size_t>(n)) throw Error("net pattern dimension mismatch");
  for (int i = 0; i < n; ++i) {
    if (allow[i].size() != static_cast<std::size_t>(n)) throw Error("net pattern is not square");
    if (!allow[i][i]) throw Error("net pattern must be reflexive (sigma_ii = R)");
  }
  allow_ = std::move(allow);
}

bool NetPattern::is_valid() const {
  for (int i = 0; i < n_; ++i)
    for (int r = 0; r < n_; ++r) {
      if (!allow_[i][r]) continue;
      for (int j = 0; j < n_; ++j)
        if (allow_[r][j] && !allow_[i][j]) return false;
    }
  return true;
}

nlohmann::json NetPattern::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < n_; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < n_; ++j) row.push_back(allow_[i][j] ? 1 : 0);
    rows.push_back(std::move(row));
  }
  return rows;
}

NetPattern NetPattern::from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("net pattern JSON must be a nonempty array");
  const int n = static_cast<int>(j.size());
  std::vector<std::vector<bool>> allow(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != n) throw ParseError("net pattern JSON is not square");
    for (int c = 0; c < n; ++c) allow[i][c] = j[i][c].get<int>() != 0;
  }
  return NetPattern(n, std::move(allow));
}

NetPattern pattern_of(const Matrix& b) {
  if (!b.ring().is_division_ring()) throw Error("pattern_of requires a division-ring spec");
  const int n = b.dim();
  for (int i = 0; i < n; ++i)
    if (b.zero_at(i, i)) throw Error("pattern_of requires a nonzero diagonal");
  std::vector<std::vector<bool>> allow(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) allow[i][j] = !b.zero_at(i, j);
  return NetPattern(n, std::move(allow));
}

bool is_member(const Matrix& b, const NetPattern& p) {
  if (b.dim() != p.dim()) throw Error("net membership: dimension mismatch");
  if (!invert_matrix(b)) return false;
  for (int i = 0; i < b.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j)
      if (i != j && !p.allows(i, j) && !b.zero_at(i, j)) return false;
  return true;
}

bool inverse_closure_check(const Matrix& b, const NetPattern& p) {
  auto inv = invert_matrix(b);
  if (!inv) throw Error("inverse_closure_check requires an invertible matrix");
  return is_member(*inv, p);
}

}  // namespace sgwit
