#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sgwit/word.hpp"

namespace sgwit {

struct StageRecord {
  std::string stage;
  std::size_t word_length = 0;  // length of the composed word after the stage
  std::string matrix_hash;
  bool operator==(const StageRecord& o) const {
    return stage == o.stage && word_length == o.word_length && matrix_hash == o.matrix_hash;
  }
};

/// Result of a witness construction. verified is recomputed by a full,
/// independent evaluation of the word; construction throws InternalError
/// rather than returning an unverified report.
struct WitnessReport {
  Word word = Word::gen();
  bool verified = false;
  bool fallback_used = false;
  std::vector<StageRecord> stages;
  nlohmann::json to_json() const;
};

/// Permutation rho with a[i][rho(i)] != 0 for all i, built by the inverse-entry
/// recursion: pick the first j with a_1j * a'_j1 != 0 and recurse on the minor.
std::vector<int> support_permutation(const Matrix& a);

/// One pipeline stage: a word over the stage's own input matrix as the
/// generator, together with its evaluation.
struct StageResult {
  Word word;
  Matrix matrix;
};

/// Division-ring stages. Each one validates its preconditions, checks its
/// postcondition before returning, and reports search exhaustion (possible
/// only over small finite fields) to the caller for the order-power fallback.
StageResult ensure_nonzero_diagonal(const Matrix& a);
StageResult make_rows_good(const Matrix& a);
StageResult make_biregular(const Matrix& a);
StageResult eliminate_row(const Matrix& a, int row);

/// Radical step: with d_l = a_ll^-1 and d_j = -a_jj^-1 the product ada moves
/// every off-diagonal entry of row l strictly deeper into the radical.
StageResult radical_reduce_row(const Matrix& b, int row);

WitnessReport field_witness(const Matrix& a);
WitnessReport semisimple_witness(const Matrix& a);

/// Top-level dispatcher: division rings, semisimple rings, then the general
/// Artinian case via projection mod J and per-row radical reduction.
WitnessReport witness(const Matrix& a);

}  // namespace sgwit
