#pragma once

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sgwit/fp_poly.hpp"
#include "sgwit/quaternion.hpp"

namespace sgwit {

enum class RingKind {
  PrimeField,           // F_p
  ExtensionField,       // F_p[x]/(f), f irreducible
  Rationals,            // Q
  RationalQuaternions,  // H(Q)
  IntegerMod,           // Z/m, m >= 2
  PolyQuotient,         // F_p[x]/(f), f arbitrary nonconstant
  Product,              // R_1 x ... x R_k
  MatrixRing,           // M(k, division ring)
};

/// Exact, immutable ring element. The representation is interpreted relative
/// to a RingSpec; all public constructors and operations keep elements in
/// canonical form (residues in [0,m), fractions reduced with positive
/// denominator, polynomial residues reduced mod the quotient modulus).
class Element {
 public:
  using Tuple = std::vector<Element>;
  struct Block {
    int dim = 0;
    std::vector<Element> entries;  // row-major dim x dim over the base ring
  };

  Element() : v_(mpz_class(0)) {}

  static Element residue(mpz_class v) { return Element(Value(std::move(v))); }
  static Element rational(mpq_class v) { return Element(Value(std::move(v))); }
  static Element poly(FpPoly v) { return Element(Value(std::move(v))); }
  static Element quaternion(Quaternion v) { return Element(Value(std::move(v))); }
  static Element tuple(Tuple v) { return Element(Value(std::move(v))); }
  static Element block(int dim, std::vector<Element> entries);

  const mpz_class& residue() const;
  const mpq_class& rational() const;
  const FpPoly& poly() const;
  const Quaternion& quaternion() const;
  const Tuple& tuple() const;
  const Block& block() const;

  bool operator==(const Element& o) const;
  bool operator!=(const Element& o) const { return !(*this == o); }

 private:
  using Value = std::variant<mpz_class, mpq_class, FpPoly, Quaternion, Tuple, Block>;
  explicit Element(Value v) : v_(std::move(v)) {}
  Value v_;
};

class SemisimpleDecomposition;
class UnitStream;

/// Recursive descriptor of the ambient Artinian ring. Immutable and cheap to
/// copy; construction validates structure (prime moduli, irreducible
/// extension polynomials, division-ring bases for matrix rings) and caches
/// derived data such as factorizations and the nilpotency exponent.
///
/// Ring grammar: `Q`, `HQ`, `F<p>`, `F<p>[x]/(<poly>)`, `Z/<m>`,
/// `M<k>(<spec>)`, and `<spec>x<spec>` for products. The `F<p>[x]/(<poly>)`
/// form yields ExtensionField when the modulus is irreducible and
/// PolyQuotient otherwise.
class RingSpec {
 public:
  static RingSpec prime_field(const mpz_class& p);
  static RingSpec extension_field(const mpz_class& p, FpPoly modulus);
  static RingSpec rationals();
  static RingSpec rational_quaternions();
  static RingSpec integer_mod(const mpz_class& m);
  static RingSpec poly_quotient(const mpz_class& p, FpPoly modulus);
  static RingSpec product(std::vector<RingSpec> factors);
  static RingSpec matrix_ring(RingSpec base, int dim);

  RingKind kind() const;
  bool is_division_ring() const;
  bool is_finite() const;
  /// Number of elements; only valid for finite rings.
  const mpz_class& cardinality() const;
  /// Smallest s with J^s = 0.
  int nilpotency_exponent() const;
  bool is_semisimple() const { return nilpotency_exponent() == 1; }

  const mpz_class& prime() const;           // PrimeField / ExtensionField / PolyQuotient
  const mpz_class& modulus() const;         // IntegerMod
  const FpPoly& poly_modulus() const;       // ExtensionField / PolyQuotient
  const std::vector<RingSpec>& factors() const;  // Product
  const RingSpec& base_ring() const;        // MatrixRing
  int block_dim() const;                    // MatrixRing

  Element zero() const;
  Element one() const;
  /// Image of the integer n under the unique ring map Z -> R.
  Element from_integer(long n) const;

  Element add(const Element& a, const Element& b) const;
  Element sub(const Element& a, const Element& b) const;
  Element mul(const Element& a, const Element& b) const;
  Element neg(const Element& a) const;
  Element pow(const Element& a, unsigned long k) const;

  bool is_zero(const Element& a) const { return a == zero(); }
  bool is_one(const Element& a) const { return a == one(); }

  /// Two-sided inverse when a is a unit; absent otherwise.
  std::optional<Element> invert(const Element& a) const;
  bool is_unit(const Element& a) const { return invert(a).has_value(); }

  /// Largest t with a in J^t: 0 for elements outside the radical, the
  /// nilpotency exponent as the sentinel for 0 itself.
  int radical_degree(const Element& a) const;

  SemisimpleDecomposition semisimple_decompose() const;

  /// Deterministic unit supply. Finite rings enumerate all units in
  /// canonical (element-index) order and then signal exhaustion; Q and H(Q)
  /// yield the central integers 1, 2, 3, ...; products interleave a
  /// diagonal-of-streams phase with the remaining tuples.
  UnitStream units() const;

  /// Bijection [0, cardinality) -> R for finite rings; index order is the
  /// canonical element order used by unit streams and the oracle.
  Element element_at(const mpz_class& index) const;

  /// Throws Error unless x is a canonical element of this ring.
  void validate(const Element& x) const;

  std::string format_element(const Element& x) const;
  Element parse_element(std::string_view text) const;

  std::string to_string() const;
  static RingSpec parse(std::string_view text);

  bool operator==(const RingSpec& o) const;
  bool operator!=(const RingSpec& o) const { return !(*this == o); }

 private:
  struct Data;
  explicit RingSpec(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;
  friend class SemisimpleDecomposition;
  friend class UnitStream;
};

/// Simple components of R/J with the projection and (canonical
/// smallest-representative) lifting maps. Units lift to units because J is
/// the Jacobson radical.
class SemisimpleDecomposition {
 public:
  explicit SemisimpleDecomposition(RingSpec source);

  const RingSpec& source() const { return source_; }
  const std::vector<RingSpec>& components() const { return components_; }

  Element project(const Element& x, std::size_t component) const;
  std::vector<Element> project_all(const Element& x) const;
  Element lift(const std::vector<Element>& components) const;

 private:
  RingSpec source_;
  std::vector<RingSpec> components_;
  // Product sources route each global component to (factor, local component).
  struct Route {
    std::size_t factor;
    std::size_t local;
  };
  std::vector<Route> routes_;
  std::vector<std::shared_ptr<SemisimpleDecomposition>> children_;
  // CRT bases for IntegerMod / PolyQuotient sources: basis_[t] is 1 in
  // component t and 0 in the others, modulo the radical's modulus.
  std::vector<mpz_class> int_basis_;
  mpz_class int_radical_modulus_;
  std::vector<FpPoly> poly_basis_;
  FpPoly poly_radical_modulus_;
};

/// Value-producing iterator over units; owned by one caller at a time.
class UnitStream {
 public:
  explicit UnitStream(RingSpec ring);
  /// Next unit, or absent once a finite ring is exhausted.
  std::optional<Element> next();

 private:
  struct ProductState;
  RingSpec ring_;
  mpz_class cursor_;  // element index (finite) or central integer counter
  std::shared_ptr<ProductState> product_;
};

namespace detail {
/// Splits text on a separator at bracket depth 0 (tracking (), [] pairs).
std::vector<std::string_view> split_top_level(std::string_view text, char sep);
mpz_class parse_mpz(std::string_view text);
bool is_prime(const mpz_class& n);
std::vector<std::pair<mpz_class, int>> factor_integer(const mpz_class& n);
}  // namespace detail

}  // namespace sgwit
