#pragma once

#include <vector>

#include <json.hpp>

#include "sgwit/matrix.hpp"

namespace sgwit {

/// Boolean reflexive n x n pattern (the field case of a D-net); valid when
/// transitive: allow[i][r] and allow[r][j] imply allow[i][j].
class NetPattern {
 public:
  NetPattern(int n, std::vector<std::vector<bool>> allow);
  int dim() const { return n_; }
  bool allows(int i, int j) const { return allow_[i][j]; }
  bool is_valid() const;
  nlohmann::json to_json() const;  // n x n array of 0/1
  static NetPattern from_json(const nlohmann::json& j);
  bool operator==(const NetPattern& o) const { return allow_ == o.allow_; }
  bool operator!=(const NetPattern& o) const { return !(*this == o); }

 private:
  int n_;
  std::vector<std::vector<bool>> allow_;
};

inline bool validate_net(const NetPattern& p) { return p.is_valid(); }

/// Pattern allow[i][j] = (b_ij != 0); requires a division-ring spec and a
/// nonzero diagonal.
NetPattern pattern_of(const Matrix& b);

/// b invertible with b_ij = 0 wherever the pattern forbids (i,j) off the
/// diagonal.
bool is_member(const Matrix& b, const NetPattern& p);

/// Membership of b's inverse; always true on the supported (Dedekind finite)
/// rings, so a false return signals a bug upstream.
bool inverse_closure_check(const Matrix& b, const NetPattern& p);

}  // namespace sgwit
