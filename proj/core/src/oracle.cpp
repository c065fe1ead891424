#include "sgwit/oracle.hpp"

#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "sgwit/errors.hpp"
#include "sgwit/witness.hpp"

namespace sgwit {

// ---------------------------------------------------------------------------
// sampling
// ---------------------------------------------------------------------------

Element random_element(const RingSpec& ring, std::mt19937_64& rng) {
  switch (ring.kind()) {
    case RingKind::Rationals: {
      std::uniform_int_distribution<long> dist(-3, 3);
      return ring.from_integer(dist(rng));
    }
    case RingKind::RationalQuaternions: {
      std::uniform_int_distribution<long> dist(-2, 2);
      const long w = dist(rng), x = dist(rng), y = dist(rng), z = dist(rng);
      return Element::quaternion(Quaternion{mpq_class(w), mpq_class(x), mpq_class(y), mpq_class(z)});
    }
    case RingKind::Product: {
      Element::Tuple t;
      t.reserve(ring.factors().size());
      for (const RingSpec& f : ring.factors()) t.push_back(random_element(f, rng));
      return Element::tuple(std::move(t));
    }
    case RingKind::MatrixRing: {
      if (!ring.is_finite()) {
        const int k = ring.block_dim();
        std::vector<Element> e;
        e.reserve(static_cast<std::size_t>(k) * k);
        for (int i = 0; i < k * k; ++i) e.push_back(random_element(ring.base_ring(), rng));
        return Element::block(k, std::move(e));
      }
      [[fallthrough]];
    }
    default: {
      if (!ring.cardinality().fits_ulong_p())
        throw Error("random_element: ring too large for uniform sampling");
      std::uniform_int_distribution<unsigned long> dist(0, ring.cardinality().get_ui() - 1);
      return ring.element_at(mpz_class(dist(rng)));
    }
  }
}

Matrix random_matrix(const RingSpec& ring, int n, std::mt19937_64& rng) {
  std::vector<Element> e;
  e.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n * n; ++i) e.push_back(random_element(ring, rng));
  return Matrix(ring, n, std::move(e));
}

Matrix random_invertible_matrix(const RingSpec& ring, int n, std::mt19937_64& rng) {
  constexpr int kMaxRejections = 100000;
  for (int tries = 0; tries < kMaxRejections; ++tries) {
    Matrix cand = random_matrix(ring, n, rng);
    if (invert_matrix(cand)) return cand;
  }
  throw InternalError("random_invertible_matrix: rejection sampling failed");
}

void for_each_invertible(const RingSpec& ring, int n, const std::function<void(const Matrix&)>& fn) {
  if (!ring.is_finite()) throw Error("for_each_invertible requires a finite ring");
  const mpz_class card = ring.cardinality();
  const std::size_t cells = static_cast<std::size_t>(n) * n;
  std::vector<mpz_class> idx(cells, 0);
  while (true) {
    std::vector<Element> entries;
    entries.reserve(cells);
    for (const mpz_class& i : idx) entries.push_back(ring.element_at(i));
    Matrix cand(ring, n, std::move(entries));
    if (invert_matrix(cand)) fn(cand);
    std::size_t pos = cells;
    while (pos-- > 0) {
      if (++idx[pos] < card) break;
      idx[pos] = 0;
      if (pos == 0) return;
    }
  }
}

std::vector<DiagonalMatrix> all_diagonal_matrices(const RingSpec& ring, int n) {
  if (!ring.is_finite()) throw Error("all_diagonal_matrices requires a finite ring");
  std::vector<Element> units;
  UnitStream stream = ring.units();
  while (auto u = stream.next()) units.push_back(std::move(*u));
  std::vector<DiagonalMatrix> out;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    std::vector<Element> entries;
    entries.reserve(n);
    for (std::size_t i : idx) entries.push_back(units[i]);
    out.emplace_back(ring, std::move(entries));
    std::size_t pos = n;
    while (pos-- > 0) {
      if (++idx[pos] < units.size()) break;
      idx[pos] = 0;
      if (pos == 0) return out;
    }
  }
}

// ---------------------------------------------------------------------------
// closure
// ---------------------------------------------------------------------------

ClosureResult closure_bfs(const std::vector<Matrix>& gens, std::size_t budget) {
  if (gens.empty()) throw Error("closure_bfs requires at least one generator");
  const RingSpec& ring = gens.front().ring();
  const int n = gens.front().dim();
  if (!ring.is_finite()) throw Error("closure_bfs rejects infinite rings");
  for (const Matrix& g : gens)
    if (g.ring() != ring || g.dim() != n) throw Error("closure_bfs generators must share ring and dimension");

  const std::vector<DiagonalMatrix> diagonals = all_diagonal_matrices(ring, n);
  ClosureResult result;
  result.generator_count = gens.size();
  std::unordered_map<std::string, std::size_t> seen;
  std::deque<Matrix> frontier;

  auto visit = [&](Matrix m) {
    std::string key = m.to_text();
    if (seen.count(key)) return;
    if (result.elements.size() >= budget) throw BudgetError("closure budget exceeded");
    seen.emplace(std::move(key), result.elements.size());
    frontier.push_back(m);
    result.elements.push_back(std::move(m));
  };

  // Every word with a generator factor is d * g * (suffix over gens and D).
  for (const DiagonalMatrix& d : diagonals)
    for (const Matrix& g : gens) visit(d.to_matrix().mul(g));
  while (!frontier.empty()) {
    Matrix x = std::move(frontier.front());
    frontier.pop_front();
    for (const Matrix& g : gens) visit(x.mul(g));
    for (const DiagonalMatrix& d : diagonals) visit(x.mul_diag_right(d));
  }

  result.contains_identity = seen.count(Matrix::identity(ring, n).to_text()) > 0;
  result.is_group = result.contains_identity;
  for (const Matrix& x : result.elements) {
    if (!result.is_group) break;
    auto inv = invert_matrix(x);
    if (!inv || !seen.count(inv->to_text())) result.is_group = false;
  }
  return result;
}

// ---------------------------------------------------------------------------
// exhaustive Theorem 3 check
// ---------------------------------------------------------------------------

Theorem3Summary exhaustive_theorem3_check(const RingSpec& ring, int n, std::size_t budget,
                                          bool with_closure) {
  Theorem3Summary summary;
  try {
    for_each_invertible(ring, n, [&](const Matrix& a) {
      ++summary.checked;
      const WitnessReport rep = witness(a);
      summary.max_word_length = std::max(summary.max_word_length, rep.word.size());
      bool ok = rep.verified;
      if (with_closure) {
        const ClosureResult closure = closure_bfs({a}, budget);
        ok = ok && closure.contains_identity && closure.is_group && closure.contains_identity == rep.verified;
      }
      if (ok) ++summary.passed;
    });
  } catch (const BudgetError&) {
    summary.budget_hit = true;
  }
  return summary;
}

nlohmann::json Theorem3Summary::to_json() const {
  return nlohmann::json{{"budget_hit", budget_hit},
                        {"checked", checked},
                        {"max_word_length", max_word_length},
                        {"passed", passed}};
}

// ---------------------------------------------------------------------------
// Lemma 1 scan
// ---------------------------------------------------------------------------

Lemma1Report lemma1_scan(const RingSpec& ring, int n, std::size_t samples, std::uint64_t seed) {
  if (!ring.is_division_ring()) throw Error("lemma1_scan requires a division-ring spec");
  std::mt19937_64 rng(seed);
  Lemma1Report report;
  report.samples = samples;
  for (std::size_t k = 0; k < samples; ++k) {
    const Matrix a = random_invertible_matrix(ring, n, rng);
    const Matrix ainv = *invert_matrix(a);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const bool inverse_entry_nonzero = !ainv.zero_at(j, i);
        const bool minor_invertible = invert_matrix(minor_matrix(a, i, j)).has_value();
        if (inverse_entry_nonzero != minor_invertible) {
          report.pass = false;
          report.counterexample = "a=" + a.to_text() + " position (" + std::to_string(i + 1) + "," +
                                  std::to_string(j + 1) + ")";
          return report;
        }
      }
  }
  return report;
}

}  // namespace sgwit
