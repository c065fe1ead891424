#pragma once

#include <variant>
#include <vector>

#include <json.hpp>

#include "sgwit/matrix.hpp"

namespace sgwit {

struct GenFactor {
  bool operator==(const GenFactor&) const { return true; }
};

using WordFactor = std::variant<GenFactor, DiagonalMatrix>;

/// Element of the semigroup <a, D>: a finite product of factors, each either
/// the distinguished generator or an explicit invertible diagonal matrix, with
/// at least one generator factor. Diagonals are stored by value, so a word is
/// self-contained given the generator.
///
/// Serialization: a JSON array of {"gen":true} and {"diag":[...element
/// strings...]} objects — the CLI's bit-exact interchange format.
class Word {
 public:
  explicit Word(std::vector<WordFactor> factors);
  static Word gen();
  static Word gen_power(std::size_t k);

  const std::vector<WordFactor>& factors() const { return f_; }
  std::size_t size() const { return f_.size(); }
  std::size_t gen_count() const;

  Word appended_diag(DiagonalMatrix d) const;

  /// Merges adjacent diagonal factors and drops identity diagonals; the
  /// evaluation is unchanged and at least one generator always remains.
  Word simplified() const;

  nlohmann::json to_json() const;
  static Word from_json(const RingSpec& ring, const nlohmann::json& j);

  bool operator==(const Word& o) const { return f_ == o.f_; }
  bool operator!=(const Word& o) const { return !(*this == o); }

 private:
  std::vector<WordFactor> f_;
};

/// Left-to-right product with the generator factor mapped to a.
Matrix evaluate_word(const Word& w, const Matrix& a);

/// Replaces every generator factor of outer by the factor sequence of inner.
Word substitute_word(const Word& outer, const Word& inner);

}  // namespace sgwit
