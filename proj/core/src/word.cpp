#include "sgwit/word.hpp"

#include "sgwit/errors.hpp"

namespace sgwit {

namespace {

std::size_t count_gens(const std::vector<WordFactor>& factors) {
  std::size_t n = 0;
  for (const WordFactor& f : factors)
    if (std::holds_alternative<GenFactor>(f)) ++n;
  return n;
}

}  // namespace

Word::Word(std::vector<WordFactor> factors) : f_(std::move(factors)) {
  if (count_gens(f_) == 0) throw Error("word must contain at least one generator factor");
}

std::size_t Word::gen_count() const { return count_gens(f_); }

Word Word::gen() { return Word({WordFactor(GenFactor{})}); }

Word Word::gen_power(std::size_t k) {
  if (k == 0) throw Error("generator power must be >= 1");
  return Word(std::vector<WordFactor>(k, WordFactor(GenFactor{})));
}

Word Word::appended_diag(DiagonalMatrix d) const {
  std::vector<WordFactor> f = f_;
  f.emplace_back(std::move(d));
  return Word(std::move(f));
}

Word Word::simplified() const {
  std::vector<WordFactor> out;
  out.reserve(f_.size());
  for (const WordFactor& factor : f_) {
    if (std::holds_alternative<GenFactor>(factor)) {
      out.push_back(factor);
      continue;
    }
    const DiagonalMatrix& d = std::get<DiagonalMatrix>(factor);
    if (!out.empty() && std::holds_alternative<DiagonalMatrix>(out.back())) {
      const DiagonalMatrix& prev = std::get<DiagonalMatrix>(out.back());
      std::vector<Element> merged;
      merged.reserve(d.entries().size());
      for (int i = 0; i < d.dim(); ++i) merged.push_back(d.ring().mul(prev.at(i), d.at(i)));
      DiagonalMatrix m(d.ring(), std::move(merged));
      out.pop_back();
      if (!m.is_identity()) out.emplace_back(std::move(m));
    } else if (!d.is_identity()) {
      out.push_back(factor);
    }
  }
  return Word(std::move(out));
}

nlohmann::json Word::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const WordFactor& factor : f_) {
    if (std::holds_alternative<GenFactor>(factor)) {
      arr.push_back(nlohmann::json{{"gen", true}});
    } else {
      const DiagonalMatrix& d = std::get<DiagonalMatrix>(factor);
      nlohmann::json entries = nlohmann::json::array();
      for (const Element& x : d.entries()) entries.push_back(d.ring().format_element(x));
      arr.push_back(nlohmann::json{{"diag", std::move(entries)}});
    }
  }
  return arr;
}

Word Word::from_json(const RingSpec& ring, const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("word JSON must be an array");
  std::vector<WordFactor> factors;
  factors.reserve(j.size());
  for (const nlohmann::json& item : j) {
    if (!item.is_object()) throw ParseError("word factor must be an object");
    if (item.contains("gen")) {
      if (!item["gen"].is_boolean() || !item["gen"].get<bool>())
        throw ParseError("word factor {\"gen\": ...} must be true");
      factors.emplace_back(GenFactor{});
    } else if (item.contains("diag")) {
      const nlohmann::json& entries = item["diag"];
      if (!entries.is_array() || entries.empty()) throw ParseError("word diag factor must be a nonempty array");
      std::vector<Element> e;
      e.reserve(entries.size());
      for (const nlohmann::json& s : entries) {
        if (!s.is_string()) throw ParseError("word diag entries must be element strings");
        e.push_back(ring.parse_element(s.get<std::string>()));
      }
      factors.emplace_back(DiagonalMatrix(ring, std::move(e)));
    } else {
      throw ParseError("word factor must contain \"gen\" or \"diag\"");
    }
  }
  return Word(std::move(factors));
}

Matrix evaluate_word(const Word& w, const Matrix& a) {
  Matrix acc = Matrix::identity(a.ring(), a.dim());
  for (const WordFactor& factor : w.factors()) {
    if (std::holds_alternative<GenFactor>(factor)) {
      acc = acc.mul(a);
    } else {
      const DiagonalMatrix& d = std::get<DiagonalMatrix>(factor);
      if (d.ring() != a.ring() || d.dim() != a.dim())
        throw Error("word evaluation: diagonal factor ring or dimension mismatch");
      acc = acc.mul_diag_right(d);
    }
  }
  return acc;
}

Word substitute_word(const Word& outer, const Word& inner) {
  std::vector<WordFactor> out;
  for (const WordFactor& factor : outer.factors()) {
    if (std::holds_alternative<GenFactor>(factor)) {
      for (const WordFactor& f : inner.factors()) out.push_back(f);
    } else {
      out.push_back(factor);
    }
  }
  return Word(std::move(out));
}

}  // namespace sgwit
