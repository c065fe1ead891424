#include "sgwit/witness.hpp"

#include <algorithm>
#include <numeric>

#include "sgwit/errors.hpp"
#include "sgwit/linalg.hpp"

namespace sgwit {

namespace {

// Thrown when a diagonal search exhausts a finite unit supply; field_witness
// converts it into the order-power fallback. Never escapes this module.
struct FallbackSignal {};

bool diag_nonzero(const Matrix& b) {
  for (int i = 0; i < b.dim(); ++i)
    if (b.zero_at(i, i)) return false;
  return true;
}

bool row_off_diag_zero(const Matrix& b, int row) {
  for (int j = 0; j < b.dim(); ++j)
    if (j != row && !b.zero_at(row, j)) return false;
  return true;
}

// Good row (Lemma 3 shape): nonzero diagonal entry, and every zero entry is
// unreachable through products b_mr * b_rj.
bool row_good(const Matrix& b, int m) {
  if (b.zero_at(m, m)) return false;
  for (int j = 0; j < b.dim(); ++j) {
    if (!b.zero_at(m, j)) continue;
    for (int r = 0; r < b.dim(); ++r)
      if (!b.zero_at(m, r) && !b.zero_at(r, j)) return false;
  }
  return true;
}

bool all_rows_good(const Matrix& b) {
  for (int m = 0; m < b.dim(); ++m)
    if (!row_good(b, m)) return false;
  return true;
}

int first_bad_row(const Matrix& b) {
  for (int m = 0; m < b.dim(); ++m)
    if (!row_good(b, m)) return m;
  return -1;
}

// supp(before) subset of supp(after)
bool support_preserved(const Matrix& before, const Matrix& after) {
  for (int i = 0; i < before.dim(); ++i)
    for (int j = 0; j < before.dim(); ++j)
      if (!before.zero_at(i, j) && after.zero_at(i, j)) return false;
  return true;
}

bool supports_equal(const Matrix& a, const Matrix& b) {
  return support_preserved(a, b) && support_preserved(b, a);
}

// Lemma 4 conditions (i) and (ii) against a precomputed inverse.
bool biregular_with(const Matrix& b, const Matrix& binv) {
  if (!diag_nonzero(b) || !all_rows_good(b)) return false;
  for (int i = 0; i < b.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j)
      if (!b.zero_at(i, j) && binv.zero_at(i, j)) return false;
  return true;
}

int permutation_order(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  std::vector<bool> seen(n, false);
  long order = 1;
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (int j = i; !seen[j]; j = perm[j]) {
      seen[j] = true;
      ++len;
    }
    order = std::lcm<long>(order, len);
  }
  return static_cast<int>(order);
}

Matrix require_inverse(const Matrix& a, const char* who) {
  auto inv = invert_matrix(a);
  if (!inv) throw Error(std::string(who) + ": matrix not invertible");
  return std::move(*inv);
}

// ---------------------------------------------------------------------------
// Candidate schedule for the verify-and-retry diagonal searches.
//
// Phase 1 gives every stage the same diagonal (t, t^2, ..., t^n) for
// successive units t; phase 2 (multi-stage searches only) weights stage s
// with exponents r * (n+1)^s so that distinct product paths pick up distinct
// exponents of the single parameter t; phase 3 enumerates fully independent
// unit tuples on finite rings whose tuple space fits a fixed budget.
// Candidates are verified by direct evaluation, so the schedule only has to
// reach a working tuple: over Q and H(Q) the central-parameter phases are
// guaranteed to, and finite exhaustion feeds the order-power fallback.
// ---------------------------------------------------------------------------

class DiagonalSearch {
 public:
  DiagonalSearch(RingSpec ring, int stages, int n)
      : ring_(std::move(ring)), stages_(stages), n_(n), stream_(ring_.units()) {}

  std::optional<std::vector<DiagonalMatrix>> next() {
    while (true) {
      switch (phase_) {
        case 1: {
          if (auto t = unit_at(cursor_)) {
            ++cursor_;
            return shared_powers(*t);
          }
          phase_ = stages_ > 1 ? 2 : 3;
          cursor_ = 0;
          continue;
        }
        case 2: {
          if (cursor_ >= kInfiniteBudget && !ring_.is_finite())
            throw InternalError("diagonal search exceeded its schedule bound on an infinite ring");
          if (auto t = unit_at(cursor_)) {
            ++cursor_;
            return staged_powers(*t);
          }
          phase_ = 3;
          cursor_ = 0;
          continue;
        }
        default: {
          if (!ring_.is_finite()) {
            if (cursor_ >= kInfiniteBudget)
              throw InternalError("diagonal search exceeded its schedule bound on an infinite ring");
            // Infinite rings never leave the power phases; keep extending
            // phase 1/2 interleaved by parity of the cursor.
            auto t = unit_at(cursor_ / 2);
            ++cursor_;
            if (!t) throw InternalError("infinite unit stream ended");
            return (cursor_ % 2 == 0 && stages_ > 1) ? staged_powers(*t) : shared_powers(*t);
          }
          return odometer_next();
        }
      }
    }
  }

 private:
  static constexpr long kInfiniteBudget = 200000;
  static constexpr long kOdometerBudget = 100000;

  std::optional<Element> unit_at(long idx) {
    while (static_cast<long>(units_.size()) <= idx) {
      if (exhausted_) return std::nullopt;
      auto u = stream_.next();
      if (!u) {
        exhausted_ = true;
        return std::nullopt;
      }
      units_.push_back(std::move(*u));
    }
    return units_[idx];
  }

  std::vector<DiagonalMatrix> shared_powers(const Element& t) {
    std::vector<Element> entries;
    entries.reserve(n_);
    for (int r = 1; r <= n_; ++r) entries.push_back(ring_.pow(t, r));
    DiagonalMatrix d(ring_, std::move(entries));
    return std::vector<DiagonalMatrix>(stages_, d);
  }

  std::vector<DiagonalMatrix> staged_powers(const Element& t) {
    std::vector<DiagonalMatrix> out;
    out.reserve(stages_);
    unsigned long weight = 1;
    for (int s = 0; s < stages_; ++s) {
      std::vector<Element> entries;
      entries.reserve(n_);
      for (int r = 1; r <= n_; ++r) entries.push_back(ring_.pow(t, r * weight));
      out.emplace_back(ring_, std::move(entries));
      weight *= static_cast<unsigned long>(n_) + 1;
    }
    return out;
  }

  std::optional<std::vector<DiagonalMatrix>> odometer_next() {
    const long vars = static_cast<long>(stages_) * n_;
    if (!odometer_ready_) {
      while (unit_at(static_cast<long>(units_.size()))) {
      }
      double space = 1.0;
      for (long i = 0; i < vars; ++i) space *= static_cast<double>(units_.size());
      odometer_feasible_ = space <= static_cast<double>(kOdometerBudget);
      odometer_.assign(vars, 0);
      odometer_ready_ = true;
      odometer_done_ = false;
    }
    if (!odometer_feasible_ || odometer_done_) return std::nullopt;
    std::vector<DiagonalMatrix> out;
    out.reserve(stages_);
    for (int s = 0; s < stages_; ++s) {
      std::vector<Element> entries;
      entries.reserve(n_);
      for (int r = 0; r < n_; ++r) entries.push_back(units_[odometer_[s * n_ + r]]);
      out.emplace_back(ring_, std::move(entries));
    }
    for (long i = vars; i-- > 0;) {
      if (++odometer_[i] < static_cast<long>(units_.size())) break;
      odometer_[i] = 0;
      if (i == 0) odometer_done_ = true;
    }
    return out;
  }

  RingSpec ring_;
  int stages_;
  int n_;
  UnitStream stream_;
  std::vector<Element> units_;
  bool exhausted_ = false;
  int phase_ = 1;
  long cursor_ = 0;
  bool odometer_ready_ = false;
  bool odometer_feasible_ = false;
  bool odometer_done_ = false;
  std::vector<long> odometer_;
};

Matrix fold_copies(const Matrix& b, const std::vector<DiagonalMatrix>& diags) {
  Matrix out = b;
  for (const DiagonalMatrix& d : diags) out = out.mul_diag_right(d).mul(b);
  return out;
}

Word word_of_copies(const std::vector<DiagonalMatrix>& diags) {
  std::vector<WordFactor> f;
  f.reserve(2 * diags.size() + 1);
  f.emplace_back(GenFactor{});
  for (const DiagonalMatrix& d : diags) {
    f.emplace_back(d);
    f.emplace_back(GenFactor{});
  }
  return Word(std::move(f));
}

}  // namespace

// ---------------------------------------------------------------------------
// support permutation (Corollary to Lemma 1)
// ---------------------------------------------------------------------------

std::vector<int> support_permutation(const Matrix& a) {
  if (!a.ring().is_division_ring()) throw Error("support_permutation requires a division-ring spec");
  require_inverse(a, "support_permutation");
  const int n = a.dim();
  std::vector<int> rows(n), cols(n), perm(n, -1);
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  Matrix current = a;
  while (!rows.empty()) {
    if (current.dim() == 1) {
      perm[rows[0]] = cols[0];
      break;
    }
    const Matrix inv = require_inverse(current, "support_permutation");
    int pick = -1;
    for (int j = 0; j < current.dim(); ++j) {
      if (!current.zero_at(0, j) && !inv.zero_at(j, 0)) {
        pick = j;
        break;
      }
    }
    if (pick < 0) throw InternalError("support_permutation: no column with a_1j * a'_j1 != 0");
    perm[rows[0]] = cols[pick];
    current = minor_matrix(current, 0, pick);
    rows.erase(rows.begin());
    cols.erase(cols.begin() + pick);
  }
  for (int i = 0; i < n; ++i)
    if (a.zero_at(i, perm[i])) throw InternalError("support_permutation postcondition violated");
  return perm;
}

// ---------------------------------------------------------------------------
// Lemma 2: nonzero diagonal
// ---------------------------------------------------------------------------

StageResult ensure_nonzero_diagonal(const Matrix& a) {
  if (!a.ring().is_division_ring()) throw Error("ensure_nonzero_diagonal requires a division-ring spec");
  if (diag_nonzero(a)) return {Word::gen(), a};
  const std::vector<int> rho = support_permutation(a);
  const int m = permutation_order(rho);
  DiagonalSearch search(a.ring(), m - 1, a.dim());
  while (auto cand = search.next()) {
    Matrix b = fold_copies(a, *cand);
    if (!diag_nonzero(b)) continue;
    return {word_of_copies(*cand), std::move(b)};
  }
  throw FallbackSignal{};
}

// ---------------------------------------------------------------------------
// Lemma 3: make every row good
// ---------------------------------------------------------------------------

StageResult make_rows_good(const Matrix& a) {
  if (!a.ring().is_division_ring()) throw Error("make_rows_good requires a division-ring spec");
  if (!diag_nonzero(a)) throw Error("make_rows_good requires a nonzero diagonal");
  Word w = Word::gen();
  Matrix b = a;
  const int n = b.dim();
  int steps = 0;
  while (true) {
    const int bad = first_bad_row(b);
    if (bad < 0) break;
    // Zeros of the bad row reachable through some r with b_ir * b_rj != 0.
    std::vector<int> targets;
    for (int j = 0; j < n; ++j) {
      if (!b.zero_at(bad, j)) continue;
      for (int r = 0; r < n; ++r) {
        if (!b.zero_at(bad, r) && !b.zero_at(r, j)) {
          targets.push_back(j);
          break;
        }
      }
    }
    if (targets.empty()) throw InternalError("make_rows_good: bad row without reachable zeros");
    DiagonalSearch search(b.ring(), 1, n);
    bool advanced = false;
    while (auto cand = search.next()) {
      const DiagonalMatrix& d = cand->front();
      Matrix c = b.mul_diag_right(d).mul(b);
      if (!support_preserved(b, c)) continue;
      bool filled = true;
      for (int j : targets)
        if (c.zero_at(bad, j)) {
          filled = false;
          break;
        }
      if (!filled) continue;
      w = substitute_word(word_of_copies({d}), w);
      b = std::move(c);
      advanced = true;
      break;
    }
    if (!advanced) throw FallbackSignal{};
    if (++steps > n * n) throw InternalError("make_rows_good: progress bound exceeded");
  }
  if (!all_rows_good(b)) throw InternalError("make_rows_good postcondition violated");
  return {std::move(w), std::move(b)};
}

// ---------------------------------------------------------------------------
// Lemma 4: biregular form (good rows of the inverse, matching supports)
// ---------------------------------------------------------------------------

StageResult make_biregular(const Matrix& a) {
  if (!a.ring().is_division_ring()) throw Error("make_biregular requires a division-ring spec");
  if (!diag_nonzero(a) || !all_rows_good(a)) throw Error("make_biregular requires all rows good");
  Word w = Word::gen();
  Matrix b = a;
  Matrix binv = require_inverse(b, "make_biregular");
  const int n = b.dim();

  // Stage (A): nonzero diagonal of the inverse, one searched multi-copy word
  // on the inverse's support permutation.
  if (!diag_nonzero(binv)) {
    const std::vector<int> rho = support_permutation(binv);
    const int m = permutation_order(rho);
    DiagonalSearch search(b.ring(), m - 1, n);
    bool advanced = false;
    while (auto cand = search.next()) {
      Matrix x = fold_copies(b, *cand);
      if (!supports_equal(x, b)) continue;
      Matrix xinv = binv;
      for (std::size_t s = cand->size(); s-- > 0;)
        xinv = xinv.mul_diag_right((*cand)[s].inverse()).mul(binv);
      if (!diag_nonzero(xinv)) continue;
      w = substitute_word(word_of_copies(*cand), w);
      b = std::move(x);
      binv = std::move(xinv);
      advanced = true;
      break;
    }
    if (!advanced) throw FallbackSignal{};
  }

  // Stage (B): repeat the row repair on the inverse; steps on b are still
  // b*d*b, whose inverse is binv*d^-1*binv.
  int steps = 0;
  while (true) {
    const int bad = first_bad_row(binv);
    if (bad < 0) break;
    std::vector<int> targets;
    for (int j = 0; j < n; ++j) {
      if (!binv.zero_at(bad, j)) continue;
      for (int r = 0; r < n; ++r) {
        if (!binv.zero_at(bad, r) && !binv.zero_at(r, j)) {
          targets.push_back(j);
          break;
        }
      }
    }
    if (targets.empty()) throw InternalError("make_biregular: bad inverse row without reachable zeros");
    DiagonalSearch search(b.ring(), 1, n);
    bool advanced = false;
    while (auto cand = search.next()) {
      const DiagonalMatrix& d = cand->front();
      Matrix c = b.mul_diag_right(d).mul(b);
      if (!supports_equal(c, b)) continue;
      Matrix cinv = binv.mul_diag_right(d.inverse()).mul(binv);
      if (!support_preserved(binv, cinv)) continue;
      bool filled = true;
      for (int j : targets)
        if (cinv.zero_at(bad, j)) {
          filled = false;
          break;
        }
      if (!filled) continue;
      w = substitute_word(word_of_copies({d}), w);
      b = std::move(c);
      binv = std::move(cinv);
      advanced = true;
      break;
    }
    if (!advanced) throw FallbackSignal{};
    if (++steps > n * n) throw InternalError("make_biregular: progress bound exceeded");
  }

  if (!biregular_with(b, binv)) throw InternalError("make_biregular postcondition violated");
  return {std::move(w), std::move(b)};
}

// ---------------------------------------------------------------------------
// row elimination over a division ring
// ---------------------------------------------------------------------------

StageResult eliminate_row(const Matrix& a, int row) {
  const RingSpec& ring = a.ring();
  if (!ring.is_division_ring()) throw Error("eliminate_row requires a division-ring spec");
  const int n = a.dim();
  if (row < 0 || row >= n) throw Error("eliminate_row: row out of range");
  if (!diag_nonzero(a)) throw Error("eliminate_row requires a nonzero diagonal");
  for (int i = 0; i < row; ++i)
    if (!row_off_diag_zero(a, i)) throw Error("eliminate_row requires rows above to be diagonal-only");
  if (row_off_diag_zero(a, row)) return {Word::gen(), a};

  std::vector<int> free_r, cols;
  for (int r = 0; r < n; ++r)
    if (!a.zero_at(row, r)) free_r.push_back(r);
  for (int j = 0; j < n; ++j)
    if (j != row && !a.zero_at(row, j)) cols.push_back(j);

  // System sum_{r not in I} dbar_r * a_rj = 0 for j outside I and != row;
  // unknowns act from the left.
  std::vector<Element> system;
  system.reserve(free_r.size() * cols.size());
  for (int r : free_r)
    for (int j : cols) system.push_back(a.at(r, j));

  std::vector<std::vector<Element>> candidates;
  // The inverse row (a'_{row,r})_{r not in I} solves the system with every
  // coordinate nonzero once conditions (i)/(ii) hold, so it goes first.
  const Matrix ainv = require_inverse(a, "eliminate_row");
  {
    std::vector<Element> seed;
    seed.reserve(free_r.size());
    for (int r : free_r) seed.push_back(ainv.at(row, r));
    candidates.push_back(std::move(seed));
  }
  // Null-space basis combinations with small integer coefficients, in a
  // fixed spiral, up to the budget 2 * n * |basis|.
  const auto basis =
      detail::left_nullspace(ring, static_cast<int>(free_r.size()), static_cast<int>(cols.size()), system);
  if (!basis.empty()) {
    const long k = static_cast<long>(basis.size());
    const long budget = 2L * n * k;
    long produced = 0;
    for (long radius = 1; produced < budget && radius <= budget; ++radius) {
      std::vector<long> coeff(k, -radius);
      while (true) {
        bool on_shell = false;
        for (long c : coeff)
          if (c == radius || c == -radius) on_shell = true;
        if (on_shell) {
          std::vector<Element> combo(free_r.size(), ring.zero());
          for (long i = 0; i < k; ++i) {
            if (coeff[i] == 0) continue;
            const Element scale = ring.from_integer(coeff[i]);
            for (std::size_t c = 0; c < combo.size(); ++c)
              combo[c] = ring.add(combo[c], ring.mul(scale, basis[i][c]));
          }
          candidates.push_back(std::move(combo));
          if (++produced >= budget) break;
        }
        long pos = k - 1;
        while (pos >= 0 && coeff[pos] == radius) {
          coeff[pos] = -radius;
          --pos;
        }
        if (pos < 0) break;
        ++coeff[pos];
      }
    }
  }

  for (const std::vector<Element>& dbar : candidates) {
    bool nonzero = true;
    for (const Element& x : dbar)
      if (ring.is_zero(x)) {
        nonzero = false;
        break;
      }
    if (!nonzero) continue;
    std::vector<Element> entries(n, ring.one());
    bool units = true;
    for (std::size_t idx = 0; idx < free_r.size(); ++idx) {
      const int r = free_r[idx];
      const auto alr_inv = ring.invert(a.at(row, r));
      if (!alr_inv) {
        units = false;
        break;
      }
      entries[r] = ring.mul(*alr_inv, dbar[idx]);
    }
    if (!units) continue;
    DiagonalMatrix d(ring, std::move(entries));
    Matrix c = a.mul_diag_right(d).mul(a);
    if (!row_off_diag_zero(c, row) || c.zero_at(row, row)) continue;
    bool prefix_ok = true;
    for (int i = 0; i < row; ++i)
      if (!row_off_diag_zero(c, i) || c.zero_at(i, i)) prefix_ok = false;
    if (!prefix_ok) throw InternalError("eliminate_row: diagonal-only prefix destroyed");
    return {word_of_copies({d}), std::move(c)};
  }
  throw FallbackSignal{};
}

// ---------------------------------------------------------------------------
// radical reduction (general Artinian step)
// ---------------------------------------------------------------------------

StageResult radical_reduce_row(const Matrix& b, int row) {
  const RingSpec& ring = b.ring();
  const int n = b.dim();
  if (row < 0 || row >= n) throw Error("radical_reduce_row: row out of range");
  for (int i = 0; i < n; ++i) {
    if (!ring.is_unit(b.at(i, i))) throw Error("radical_reduce_row requires unit diagonal entries");
    for (int j = 0; j < n; ++j)
      if (i != j && !ring.is_zero(b.at(i, j)) && ring.radical_degree(b.at(i, j)) < 1)
        throw Error("radical_reduce_row requires off-diagonal entries in the radical");
  }
  for (int i = 0; i < row; ++i)
    if (!row_off_diag_zero(b, i)) throw Error("radical_reduce_row requires rows above to be diagonal-only");
  if (row_off_diag_zero(b, row)) return {Word::gen(), b};

  int min_before = ring.nilpotency_exponent();
  for (int j = 0; j < n; ++j)
    if (j != row) min_before = std::min(min_before, ring.radical_degree(b.at(row, j)));

  std::vector<Element> entries(n);
  for (int j = 0; j < n; ++j) {
    Element inv = *ring.invert(b.at(j, j));
    entries[j] = (j == row) ? std::move(inv) : ring.neg(inv);
  }
  DiagonalMatrix d(ring, std::move(entries));
  Matrix c = b.mul_diag_right(d).mul(b);

  int min_after = ring.nilpotency_exponent();
  for (int j = 0; j < n; ++j)
    if (j != row) min_after = std::min(min_after, ring.radical_degree(c.at(row, j)));
  if (!row_off_diag_zero(c, row) && min_after <= min_before)
    throw InternalError("radical_reduce_row: radical degree did not increase");
  for (int i = 0; i < row; ++i)
    if (!row_off_diag_zero(c, i)) throw InternalError("radical_reduce_row: prefix destroyed");
  for (int i = 0; i < n; ++i)
    if (!ring.is_unit(c.at(i, i))) throw InternalError("radical_reduce_row: diagonal left the units");
  return {word_of_copies({d}), std::move(c)};
}

// ---------------------------------------------------------------------------
// field witness (division rings)
// ---------------------------------------------------------------------------

namespace {

struct Pipeline {
  Matrix current;
  Word word = Word::gen();
  std::vector<StageRecord> stages;

  explicit Pipeline(Matrix start) : current(std::move(start)) {}

  void apply(const std::string& name, StageResult&& sr) {
    word = substitute_word(sr.word, word);
    current = std::move(sr.matrix);
    stages.push_back({name, word.size(), current.fingerprint()});
  }
};

bool is_biregular(const Matrix& b) {
  if (!diag_nonzero(b) || !all_rows_good(b)) return false;
  const auto binv = invert_matrix(b);
  if (!binv) return false;
  return biregular_with(b, *binv);
}

WitnessReport finish_report(WitnessReport rep, const Matrix& a) {
  rep.word = rep.word.simplified();
  if (!evaluate_word(rep.word, a).is_identity()) throw InternalError("witness verification failed");
  rep.verified = true;
  return rep;
}

}  // namespace

WitnessReport field_witness(const Matrix& a) {
  const RingSpec& ring = a.ring();
  if (!ring.is_division_ring()) throw Error("field_witness requires a division-ring spec");
  require_inverse(a, "field_witness");
  const int n = a.dim();
  WitnessReport rep;
  try {
    Pipeline pl(a);
    pl.apply("ensure_nonzero_diagonal", ensure_nonzero_diagonal(pl.current));
    pl.apply("make_rows_good", make_rows_good(pl.current));
    pl.apply("make_biregular", make_biregular(pl.current));
    for (int l = 0; l < n; ++l) {
      if (row_off_diag_zero(pl.current, l)) continue;
      if (!diag_nonzero(pl.current)) pl.apply("ensure_nonzero_diagonal", ensure_nonzero_diagonal(pl.current));
      if (!all_rows_good(pl.current)) pl.apply("make_rows_good", make_rows_good(pl.current));
      if (!is_biregular(pl.current)) pl.apply("make_biregular", make_biregular(pl.current));
      pl.apply("eliminate_row_" + std::to_string(l + 1), eliminate_row(pl.current, l));
    }
    if (!pl.current.is_identity()) {
      std::vector<Element> inv_entries;
      inv_entries.reserve(n);
      for (int i = 0; i < n; ++i) {
        auto inv = ring.invert(pl.current.at(i, i));
        if (!inv) throw InternalError("field_witness: residual diagonal entry not a unit");
        inv_entries.push_back(std::move(*inv));
      }
      DiagonalMatrix fix(ring, std::move(inv_entries));
      pl.word = pl.word.appended_diag(fix);
      pl.current = pl.current.mul_diag_right(fix);
      if (!pl.current.is_identity()) throw InternalError("field_witness: residual matrix not diagonal");
      pl.stages.push_back({"normalize_diagonal", pl.word.size(), pl.current.fingerprint()});
    }
    rep.word = std::move(pl.word);
    rep.stages = std::move(pl.stages);
    rep.fallback_used = false;
  } catch (const FallbackSignal&) {
    if (!ring.is_finite())
      throw InternalError("field_witness: search exhausted over an infinite division ring");
    const unsigned long order = element_order(a);
    rep.word = Word::gen_power(order);
    rep.fallback_used = true;
    rep.stages = {{"fallback_power", order, Matrix::identity(ring, n).fingerprint()}};
  }
  return finish_report(std::move(rep), a);
}

// ---------------------------------------------------------------------------
// semisimple witness
// ---------------------------------------------------------------------------

namespace {

Matrix project_matrix(const Matrix& a, const SemisimpleDecomposition& dec, std::size_t t) {
  std::vector<Element> e;
  e.reserve(a.entries().size());
  for (const Element& x : a.entries()) e.push_back(dec.project(x, t));
  return Matrix(dec.components()[t], a.dim(), std::move(e));
}

// Witness over one simple component: division rings directly, matrix rings
// through the GL(n, M(k,T)) = GL(nk, T) block expansion with diagonals pulled
// back to block-diagonal units.
WitnessReport simple_component_witness(const Matrix& bt) {
  const RingSpec& comp = bt.ring();
  if (comp.is_division_ring()) return field_witness(bt);
  if (comp.kind() != RingKind::MatrixRing)
    throw InternalError("simple component is neither a division ring nor a matrix ring");
  WitnessReport sub = field_witness(flatten(bt));
  std::vector<WordFactor> factors;
  factors.reserve(sub.word.size());
  for (const WordFactor& f : sub.word.factors()) {
    if (std::holds_alternative<GenFactor>(f))
      factors.emplace_back(GenFactor{});
    else
      factors.emplace_back(unflatten_diag(std::get<DiagonalMatrix>(f), comp));
  }
  sub.word = Word(std::move(factors));
  if (!evaluate_word(sub.word, bt).is_identity())
    throw InternalError("matrix-ring component witness failed to pull back");
  return sub;
}

// Lifts a component word to the full ring: diagonals become units that are
// the given component's entry in slot t and 1 elsewhere.
Word lift_component_word(const Word& word, const SemisimpleDecomposition& dec, std::size_t t,
                         const RingSpec& ring) {
  std::vector<Element> ones;
  ones.reserve(dec.components().size());
  for (const RingSpec& comp : dec.components()) ones.push_back(comp.one());
  std::vector<WordFactor> factors;
  factors.reserve(word.size());
  for (const WordFactor& f : word.factors()) {
    if (std::holds_alternative<GenFactor>(f)) {
      factors.emplace_back(GenFactor{});
      continue;
    }
    const DiagonalMatrix& d = std::get<DiagonalMatrix>(f);
    std::vector<Element> entries;
    entries.reserve(d.entries().size());
    for (const Element& x : d.entries()) {
      std::vector<Element> comps = ones;
      comps[t] = x;
      entries.push_back(dec.lift(comps));
    }
    factors.emplace_back(DiagonalMatrix(ring, std::move(entries)));
  }
  return Word(std::move(factors));
}

void append_diagonal_fix(Word& w, Matrix& b, std::vector<StageRecord>& stages) {
  if (b.is_identity()) return;
  const RingSpec& ring = b.ring();
  std::vector<Element> inv_entries;
  inv_entries.reserve(b.dim());
  for (int i = 0; i < b.dim(); ++i) {
    for (int j = 0; j < b.dim(); ++j)
      if (i != j && !b.zero_at(i, j)) throw InternalError("residual matrix is not diagonal");
    auto inv = ring.invert(b.at(i, i));
    if (!inv) throw InternalError("residual diagonal entry is not a unit");
    inv_entries.push_back(std::move(*inv));
  }
  DiagonalMatrix fix(ring, std::move(inv_entries));
  w = w.appended_diag(fix);
  b = b.mul_diag_right(fix);
  stages.push_back({"normalize_diagonal", w.size(), b.fingerprint()});
}

}  // namespace

WitnessReport semisimple_witness(const Matrix& a) {
  const RingSpec& ring = a.ring();
  if (!ring.is_semisimple()) throw Error("semisimple_witness requires a semisimple spec");
  require_inverse(a, "semisimple_witness");
  const SemisimpleDecomposition dec = ring.semisimple_decompose();
  WitnessReport rep;
  Word w = Word::gen();
  for (std::size_t t = 0; t < dec.components().size(); ++t) {
    const Matrix b = evaluate_word(w, a);
    WitnessReport sub = simple_component_witness(project_matrix(b, dec, t));
    rep.fallback_used = rep.fallback_used || sub.fallback_used;
    w = substitute_word(lift_component_word(sub.word, dec, t, ring), w);
    rep.stages.push_back({"component_" + std::to_string(t + 1) + "_" + dec.components()[t].to_string(),
                          w.size(), evaluate_word(w, a).fingerprint()});
  }
  Matrix residual = evaluate_word(w, a);
  append_diagonal_fix(w, residual, rep.stages);
  rep.word = std::move(w);
  return finish_report(std::move(rep), a);
}

// ---------------------------------------------------------------------------
// top-level dispatcher
// ---------------------------------------------------------------------------

WitnessReport witness(const Matrix& a) {
  const RingSpec& ring = a.ring();
  if (a.dim() < 2) throw Error("witness requires dimension >= 2");
  require_inverse(a, "witness");
  if (ring.is_division_ring()) return field_witness(a);
  if (ring.is_semisimple()) return semisimple_witness(a);

  // General Artinian ring: reach the principal congruence subgroup modulo J
  // through the semisimple quotient, then clear rows with radical steps.
  const SemisimpleDecomposition dec = ring.semisimple_decompose();
  const std::size_t s = dec.components().size();
  RingSpec qring = s == 1 ? dec.components()[0] : RingSpec::product(dec.components());
  const int n = a.dim();
  std::vector<Element> qentries;
  qentries.reserve(a.entries().size());
  for (const Element& x : a.entries()) {
    if (s == 1)
      qentries.push_back(dec.project(x, 0));
    else
      qentries.push_back(Element::tuple(dec.project_all(x)));
  }
  WitnessReport sub = semisimple_witness(Matrix(qring, n, std::move(qentries)));

  WitnessReport rep;
  rep.fallback_used = sub.fallback_used;
  std::vector<WordFactor> lifted;
  lifted.reserve(sub.word.size());
  for (const WordFactor& f : sub.word.factors()) {
    if (std::holds_alternative<GenFactor>(f)) {
      lifted.emplace_back(GenFactor{});
      continue;
    }
    const DiagonalMatrix& d = std::get<DiagonalMatrix>(f);
    std::vector<Element> entries;
    entries.reserve(d.entries().size());
    for (const Element& x : d.entries()) {
      if (s == 1)
        entries.push_back(dec.lift({x}));
      else
        entries.push_back(dec.lift(x.tuple()));
    }
    lifted.emplace_back(DiagonalMatrix(ring, std::move(entries)));
  }
  Word w(std::move(lifted));
  Matrix b = evaluate_word(w, a);
  rep.stages.push_back({"semisimple_projection", w.size(), b.fingerprint()});

  // b lies in the principal congruence subgroup mod J.
  for (int i = 0; i < n; ++i) {
    if (!ring.is_unit(b.at(i, i))) throw InternalError("witness: congruence matrix diagonal not a unit");
    for (int j = 0; j < n; ++j)
      if (i != j && !ring.is_zero(b.at(i, j)) && ring.radical_degree(b.at(i, j)) < 1)
        throw InternalError("witness: congruence matrix off-diagonal outside the radical");
  }

  for (int l = 0; l < n; ++l) {
    int iterations = 0;
    while (!row_off_diag_zero(b, l)) {
      StageResult sr = radical_reduce_row(b, l);
      w = substitute_word(sr.word, w);
      b = std::move(sr.matrix);
      rep.stages.push_back({"radical_row_" + std::to_string(l + 1), w.size(), b.fingerprint()});
      if (++iterations > ring.nilpotency_exponent())
        throw InternalError("witness: radical row loop exceeded the nilpotency exponent");
    }
  }
  append_diagonal_fix(w, b, rep.stages);
  rep.word = std::move(w);
  return finish_report(std::move(rep), a);
}

// ---------------------------------------------------------------------------
// report serialization
// ---------------------------------------------------------------------------

nlohmann::json WitnessReport::to_json() const {
  nlohmann::json stage_array = nlohmann::json::array();
  for (const StageRecord& s : stages)
    stage_array.push_back(nlohmann::json{
        {"matrix_hash", s.matrix_hash}, {"stage", s.stage}, {"word_length", s.word_length}});
  return nlohmann::json{{"fallback_used", fallback_used},
                        {"stages", std::move(stage_array)},
                        {"verified", verified},
                        {"word", word.to_json()},
                        {"word_length", word.size()}};
}

}  // namespace sgwit
