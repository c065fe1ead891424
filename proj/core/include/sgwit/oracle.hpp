#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgwit/matrix.hpp"

namespace sgwit {

/// Multiplication-closed element set of <gens, D> (words containing at least
/// one generator), computed by breadth-first products on a finite ring.
struct ClosureResult {
  std::vector<Matrix> elements;
  bool contains_identity = false;
  bool is_group = false;
  std::size_t generator_count = 0;
};

ClosureResult closure_bfs(const std::vector<Matrix>& gens, std::size_t budget = 1000000);

struct Theorem3Summary {
  std::size_t checked = 0;
  std::size_t passed = 0;
  std::size_t max_word_length = 0;
  bool budget_hit = false;
  nlohmann::json to_json() const;
};

/// Runs witness() on every element of GL(n, ring) and, when with_closure is
/// set, confirms independently that the BFS closure contains the identity
/// and is a group.
Theorem3Summary exhaustive_theorem3_check(const RingSpec& ring, int n, std::size_t budget = 1000000,
                                          bool with_closure = true);

struct Lemma1Report {
  std::size_t samples = 0;
  bool pass = true;
  std::string counterexample;  // empty when pass
};

/// Seeded scan of the equivalence a'_ji != 0 <=> minor(a,i,j) invertible.
Lemma1Report lemma1_scan(const RingSpec& ring, int n, std::size_t samples, std::uint64_t seed);

/// Seeded, reproducible entry sampling. Finite rings draw uniform element
/// indices; Q draws integers in [-3, 3]; H(Q) draws quaternion coordinates
/// in [-2, 2].
Element random_element(const RingSpec& ring, std::mt19937_64& rng);
Matrix random_matrix(const RingSpec& ring, int n, std::mt19937_64& rng);
Matrix random_invertible_matrix(const RingSpec& ring, int n, std::mt19937_64& rng);

/// All of GL(n, ring) in canonical entry order (finite rings).
void for_each_invertible(const RingSpec& ring, int n, const std::function<void(const Matrix&)>& fn);

/// D(n, ring) enumerated exhaustively (finite rings).
std::vector<DiagonalMatrix> all_diagonal_matrices(const RingSpec& ring, int n);

}  // namespace sgwit
