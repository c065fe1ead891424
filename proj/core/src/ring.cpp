#include "sgwit/ring.hpp"

#include <algorithm>
#include <set>

#include "sgwit/errors.hpp"
#include "sgwit/linalg.hpp"

namespace sgwit {

// ---------------------------------------------------------------------------
// detail: small integer number theory (moduli are desk-scale, trial division)
// ---------------------------------------------------------------------------

namespace detail {

bool is_prime(const mpz_class& n) {
  if (n < 2) return false;
  for (mpz_class d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::pair<mpz_class, int>> factor_integer(const mpz_class& n) {
  std::vector<std::pair<mpz_class, int>> out;
  mpz_class rest = n;
  for (mpz_class d = 2; d * d <= rest; ++d) {
    if (rest % d != 0) continue;
    int e = 0;
    while (rest % d == 0) {
      rest /= d;
      ++e;
    }
    out.emplace_back(d, e);
  }
  if (rest > 1) out.emplace_back(rest, 1);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Element
// ---------------------------------------------------------------------------

Element Element::block(int dim, std::vector<Element> entries) {
  if (dim < 1 || entries.size() != static_cast<std::size_t>(dim) * dim)
    throw InternalError("Element::block: entry count does not match dimension");
  Block b;
  b.dim = dim;
  b.entries = std::move(entries);
  return Element(Value(std::move(b)));
}

namespace {

[[noreturn]] void wrong_alternative(const char* want) {
  throw InternalError(std::string("Element: representation mismatch, expected ") + want);
}

}  // namespace

const mpz_class& Element::residue() const {
  if (auto* v = std::get_if<mpz_class>(&v_)) return *v;
  wrong_alternative("residue");
}
const mpq_class& Element::rational() const {
  if (auto* v = std::get_if<mpq_class>(&v_)) return *v;
  wrong_alternative("rational");
}
const FpPoly& Element::poly() const {
  if (auto* v = std::get_if<FpPoly>(&v_)) return *v;
  wrong_alternative("poly");
}
const Quaternion& Element::quaternion() const {
  if (auto* v = std::get_if<Quaternion>(&v_)) return *v;
  wrong_alternative("quaternion");
}
const Element::Tuple& Element::tuple() const {
  if (auto* v = std::get_if<Tuple>(&v_)) return *v;
  wrong_alternative("tuple");
}
const Element::Block& Element::block() const {
  if (auto* v = std::get_if<Block>(&v_)) return *v;
  wrong_alternative("block");
}

bool Element::operator==(const Element& o) const {
  if (v_.index() != o.v_.index()) return false;
  switch (v_.index()) {
    case 0:
      return std::get<0>(v_) == std::get<0>(o.v_);
    case 1:
      return std::get<1>(v_) == std::get<1>(o.v_);
    case 2:
      return std::get<2>(v_) == std::get<2>(o.v_);
    case 3:
      return std::get<3>(v_) == std::get<3>(o.v_);
    case 4:
      return std::get<4>(v_) == std::get<4>(o.v_);
    default: {
      const Block& a = std::get<5>(v_);
      const Block& b = std::get<5>(o.v_);
      return a.dim == b.dim && a.entries == b.entries;
    }
  }
}

// ---------------------------------------------------------------------------
// RingSpec
// ---------------------------------------------------------------------------

struct RingSpec::Data {
  RingKind kind;
  mpz_class p;   // PrimeField / ExtensionField / PolyQuotient
  mpz_class m;   // IntegerMod
  FpPoly poly;   // ExtensionField / PolyQuotient, monic
  std::vector<RingSpec> factors;
  std::shared_ptr<const RingSpec> base;
  int block_dim = 0;

  std::vector<std::pair<mpz_class, int>> int_factors;
  std::vector<std::pair<FpPoly, int>> poly_factors;
  int nilexp = 1;
  bool finite = true;
  mpz_class card = 0;
};

namespace {

mpz_class pow_mpz(const mpz_class& b, unsigned long e) {
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), b.get_mpz_t(), e);
  return out;
}

}  // namespace

RingSpec RingSpec::prime_field(const mpz_class& p) {
  if (!detail::is_prime(p)) throw Error("prime field modulus " + p.get_str() + " is not prime");
  auto d = std::make_shared<Data>();
  d->kind = RingKind::PrimeField;
  d->p = p;
  d->card = p;
  return RingSpec(std::move(d));
}

RingSpec RingSpec::extension_field(const mpz_class& p, FpPoly modulus) {
  if (!detail::is_prime(p)) throw Error("extension field characteristic " + p.get_str() + " is not prime");
  modulus = fp_make_monic(fp_reduce(std::move(modulus), p), p);
  if (modulus.degree() < 1) throw Error("extension field modulus must be nonconstant");
  if (!fp_is_irreducible(modulus, p)) throw Error("extension field modulus is reducible");
  auto d = std::make_shared<Data>();
  d->kind = RingKind::ExtensionField;
  d->p = p;
  d->card = pow_mpz(p, modulus.degree());
  d->poly = std::move(modulus);
  return RingSpec(std::move(d));
}

RingSpec RingSpec::rationals() {
  auto d = std::make_shared<Data>();
  d->kind = RingKind::Rationals;
  d->finite = false;
  return RingSpec(std::move(d));
}

RingSpec RingSpec::rational_quaternions() {
  auto d = std::make_shared<Data>();
  d->kind = RingKind::RationalQuaternions;
  d->finite = false;
  return RingSpec(std::move(d));
}

RingSpec RingSpec::integer_mod(const mpz_class& m) {
  if (m < 2) throw Error("Z/m requires m >= 2");
  auto d = std::make_shared<Data>();
  d->kind = RingKind::IntegerMod;
  d->m = m;
  d->card = m;
  d->int_factors = detail::factor_integer(m);
  for (const auto& [prime, e] : d->int_factors) d->nilexp = std::max(d->nilexp, e);
  return RingSpec(std::move(d));
}

RingSpec RingSpec::poly_quotient(const mpz_class& p, FpPoly modulus) {
  if (!detail::is_prime(p)) throw Error("poly quotient characteristic " + p.get_str() + " is not prime");
  modulus = fp_make_monic(fp_reduce(std::move(modulus), p), p);
  if (modulus.degree() < 1) throw Error("poly quotient modulus must be nonconstant");
  if (fp_is_irreducible(modulus, p)) return extension_field(p, std::move(modulus));
  auto d = std::make_shared<Data>();
  d->kind = RingKind::PolyQuotient;
  d->p = p;
  d->card = pow_mpz(p, modulus.degree());
  d->poly_factors = fp_factor(modulus, p);
  for (const auto& [g, e] : d->poly_factors) d->nilexp = std::max(d->nilexp, e);
  d->poly = std::move(modulus);
  return RingSpec(std::move(d));
}

RingSpec RingSpec::product(std::vector<RingSpec> factors) {
  if (factors.empty()) throw Error("product ring requires at least one factor");
  if (factors.size() == 1) return factors.front();
  auto d = std::make_shared<Data>();
  d->kind = RingKind::Product;
  d->card = 1;
  for (const RingSpec& f : factors) {
    d->nilexp = std::max(d->nilexp, f.nilpotency_exponent());
    d->finite = d->finite && f.is_finite();
    if (d->finite) d->card *= f.cardinality();
  }
  if (!d->finite) d->card = 0;
  d->factors = std::move(factors);
  return RingSpec(std::move(d));
}

RingSpec RingSpec::matrix_ring(RingSpec base, int dim) {
  if (dim < 1) throw Error("matrix ring dimension must be >= 1");
  if (!base.is_division_ring()) throw Error("matrix ring base must be a division ring");
  auto d = std::make_shared<Data>();
  d->kind = RingKind::MatrixRing;
  d->block_dim = dim;
  d->finite = base.is_finite();
  if (d->finite) d->card = pow_mpz(base.cardinality(), static_cast<unsigned long>(dim) * dim);
  d->base = std::make_shared<const RingSpec>(std::move(base));
  return RingSpec(std::move(d));
}

RingKind RingSpec::kind() const { return d_->kind; }

bool RingSpec::is_division_ring() const {
  switch (d_->kind) {
    case RingKind::PrimeField:
    case RingKind::ExtensionField:
    case RingKind::Rationals:
    case RingKind::RationalQuaternions:
      return true;
    default:
      return false;
  }
}

bool RingSpec::is_finite() const { return d_->finite; }

const mpz_class& RingSpec::cardinality() const {
  if (!d_->finite) throw InternalError("cardinality of an infinite ring");
  return d_->card;
}

int RingSpec::nilpotency_exponent() const { return d_->nilexp; }

const mpz_class& RingSpec::prime() const { return d_->p; }
const mpz_class& RingSpec::modulus() const { return d_->m; }
const FpPoly& RingSpec::poly_modulus() const { return d_->poly; }
const std::vector<RingSpec>& RingSpec::factors() const { return d_->factors; }
const RingSpec& RingSpec::base_ring() const { return *d_->base; }
int RingSpec::block_dim() const { return d_->block_dim; }

bool RingSpec::operator==(const RingSpec& o) const {
  if (d_ == o.d_) return true;
  if (d_->kind != o.d_->kind) return false;
  switch (d_->kind) {
    case RingKind::PrimeField:
      return d_->p == o.d_->p;
    case RingKind::ExtensionField:
    case RingKind::PolyQuotient:
      return d_->p == o.d_->p && d_->poly == o.d_->poly;
    case RingKind::Rationals:
    case RingKind::RationalQuaternions:
      return true;
    case RingKind::IntegerMod:
      return d_->m == o.d_->m;
    case RingKind::Product:
      return d_->factors == o.d_->factors;
    case RingKind::MatrixRing:
      return d_->block_dim == o.d_->block_dim && *d_->base == *o.d_->base;
  }
  return false;
}

// ---------------------------------------------------------------------------
// element construction and arithmetic
// ---------------------------------------------------------------------------

Element RingSpec::zero() const {
  switch (d_->kind) {
    case RingKind::PrimeField:
    case RingKind::IntegerMod:
      return Element::residue(0);
    case RingKind::ExtensionField:
    case RingKind::PolyQuotient:
      return Element::poly(FpPoly{});
    case RingKind::Rationals:
      return Element::rational(mpq_class(0));
    case RingKind::RationalQuaternions:
      return Element::quaternion(Quaternion{});
    case RingKind::Product: {
      Element::Tuple t;
      t.reserve(d_->factors.size());
      for (const RingSpec& f : d_->factors) t.push_back(f.zero());
      return Element::tuple(std::move(t));
    }
    case RingKind::MatrixRing: {
      std::vector<Element> e(static_cast<std::size_t>(d_->block_dim) * d_->block_dim, d_->base->zero());
      return Element::block(d_->block_dim, std::move(e));
    }
  }
  throw InternalError("zero: unreachable");
}

Element RingSpec::one() const { return from_integer(1); }

Element RingSpec::from_integer(long n) const {
  switch (d_->kind) {
    case RingKind::PrimeField:
    case RingKind::IntegerMod: {
      const mpz_class& mod = d_->kind == RingKind::PrimeField ? d_->p : d_->m;
      mpz_class r = mpz_class(n) % mod;
      if (r < 0) r += mod;
      return Element::residue(std::move(r));
    }
    case RingKind::ExtensionField:
    case RingKind::PolyQuotient:
      return Element::poly(fp_constant(mpz_class(n), d_->p));
    case RingKind::Rationals:
      return Element::rational(mpq_class(n));
    case RingKind::RationalQuaternions:
      return Element::quaternion(Quaternion{mpq_class(n), 0, 0, 0});
    case RingKind::Product: {
      Element::Tuple t;
      t.reserve(d_->factors.size());
      for (const RingSpec& f : d_->factors) t.push_back(f.from_integer(n));
      return Element::tuple(std::move(t));
    }
    case RingKind::MatrixRing: {
      const int k = d_->block_dim;
      std::vector<Element> e(static_cast<std::size_t>(k) * k, d_->base->zero());
      for (int i = 0; i < k; ++i) e[i * k + i] = d_->base->from_integer(n);
      return Element::block(k, std::move(e));
    }
  }
  throw InternalError("from_integer: unreachable");
}

namespace {

using BinOp = Element (RingSpec::*)(const Element&, const Element&) const;

}  // namespace

Element RingSpec::add(const Element& a, const Element& b) const {
  switch (d_->kind) {
    case RingKind::PrimeField:
    case RingKind::IntegerMod: {
      const mpz_class& mod = d_->kind == RingKind::PrimeField ? d_->p : d_->m;
      mpz_class r = (a.residue() + b.residue()) % mod;
      return Element::residue(std::move(r));
    }
    case RingKind::ExtensionField:
    case RingKind::PolyQuotient:
      return Element::poly(fp_add(a.poly(), b.poly(), d_->p));
    case RingKind::Rationals:
      return Element::rational(a.rational() + b.rational());
    case RingKind::RationalQuaternions:
      return Element::quaternion(a.quaternion() + b.quaternion());
    case RingKind::Product: {
      Element::Tuple t;
      t.reserve(d_->factors.size());
      for (std::size_t i = 0; i < d_->factors.size(); ++i)
        t.push_back(d_->factors[i].add(a.tuple()[i], b.tuple()[i]));
      return Element::tuple(std::move(t));
    }
    case RingKind::MatrixRing: {
      const int k = d_->block_dim;
      std::vector<Element> e;
      e.reserve(static_cast<std::size_t>(k) * k);
      for (int i = 0; i < k * k; ++i) e.push_back(d_->base->add(a.block().entries[i], b.block().entries[i]));
      return Element::block(k, std::move(e));
    }
  }
  throw InternalError("add: unreachable");
}

Element RingSpec::neg(const Element& a) const {
  switch (d_->kind) {
    case RingKind::PrimeField:
    case RingKind::IntegerMod: {
      const mpz_class& mod = d_->kind == RingKind::PrimeField ? d_->p : d_->m;
      mpz_class r = (mod - a.residue()) % mod;
      return Element::residue(std::move(r));
    }
    case RingKind::ExtensionField:
    case RingKind::PolyQuotient:
      return Element::poly(fp_neg(a.poly(), d_->p));
    case RingKind::Rationals:
      return Element::rational(-a.rational());
    case RingKind::RationalQuaternions:
      return Element::quaternion(-a.quaternion());
    case RingKind::Product: {
      Element::Tuple t;
      t.reserve(d_->factors.size());
      for (std::size_t i = 0; i < d_->factors.size(); ++i) t.push_back(d_->factors[i].neg(a.tuple()[i]));
      return Element::tuple(std::move(t));
    }
    case RingKind::MatrixRing: {
      const int k = d_->block_dim;
      std::vector<Element> e;
      e.reserve(static_cast<std::size_t>(k) * k);
      for (int i = 0; i < k * k; ++i) e.push_back(d_->base->neg(a.block().entries[i]));
      return Element::block(k, std::move(e));
    }
  }
  throw InternalError("neg: unreachable");
}

Element RingSpec::sub(const Element& a, const Element& b) const { return add(a, neg(b)); }

Element RingSpec::mul(const Element& a, const Element& b) const {
  switch (d_->kind) {
    case RingKind::PrimeField:
    case RingKind::IntegerMod: {
      const mpz_class& mod = d_->kind == RingKind::PrimeField ? d_->p : d_->m;
      mpz_class r = (a.residue() * b.residue()) % mod;
      return Element::residue(std::move(r));
    }
    case RingKind::ExtensionField:
    case RingKind::PolyQuotient:
      return Element::poly(fp_mod(fp_mul(a.poly(), b.poly(), d_->p), d_->poly, d_->p));
    case RingKind::Rationals:
      return Element::rational(a.rational() * b.rational());
    case RingKind::RationalQuaternions:
      return Element::quaternion(a.quaternion() * b.quaternion());
    case RingKind::Product: {
      Element::Tuple t;
      t.reserve(d_->factors.size());
      for (std::size_t i = 0; i < d_->factors.size(); ++i)
        t.push_back(d_->factors[i].mul(a.tuple()[i], b.tuple()[i]));
      return Element::tuple(std::move(t));
    }
    case RingKind::MatrixRing: {
      const int k = d_->block_dim;
      const RingSpec& base = *d_->base;
      std::vector<Element> e(static_cast<std::size_t>(k) * k, base.zero());
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          Element acc = base.zero();
          for (int r = 0; r < k; ++r)
            acc = base.add(acc, base.mul(a.block().entries[i * k + r], b.block().entries[r * k + j]));
          e[i * k + j] = std::move(acc);
        }
      return Element::block(k, std::move(e));
    }
  }
  throw InternalError("mul: unreachable");
}

Element RingSpec::pow(const Element& a, unsigned long k) const {
  Element out = one();
  Element base = a;
  while (k > 0) {
    if (k & 1) out = mul(out, base);
    k >>= 1;
    if (k > 0) base = mul(base, base);
  }
  return out;
}

std::optional<Element> RingSpec::invert(const Element& a) const {
  switch (d_->kind) {
    case RingKind::PrimeField:
    case RingKind::IntegerMod: {
      const mpz_class& mod = d_->kind == RingKind::PrimeField ? d_->p : d_->m;
      mpz_class out;
      if (mpz_invert(out.get_mpz_t(), a.residue().get_mpz_t(), mod.get_mpz_t()) == 0) return std::nullopt;
      return Element::residue(std::move(out));
    }
    case RingKind::ExtensionField:
    case RingKind::PolyQuotient: {
      // Unit iff coprime to the modulus; for non-squarefree moduli this is
      // exactly invertibility of the image in the semisimple quotient.
      FpExtGcd eg = fp_ext_gcd(a.poly(), d_->poly, d_->p);
      if (eg.g.degree() != 0) return std::nullopt;
      return Element::poly(fp_mod(eg.u, d_->poly, d_->p));
    }
    case RingKind::Rationals: {
      if (a.rational() == 0) return std::nullopt;
      return Element::rational(1 / a.rational());
    }
    case RingKind::RationalQuaternions: {
      auto inv = a.quaternion().inverse();
      if (!inv) return std::nullopt;
      return Element::quaternion(std::move(*inv));
    }
    case RingKind::Product: {
      Element::Tuple t;
      t.reserve(d_->factors.size());
      for (std::size_t i = 0; i < d_->factors.size(); ++i) {
        auto inv = d_->factors[i].invert(a.tuple()[i]);
        if (!inv) return std::nullopt;
        t.push_back(std::move(*inv));
      }
      return Element::tuple(std::move(t));
    }
    case RingKind::MatrixRing: {
      auto inv = detail::invert_square(*d_->base, d_->block_dim, a.block().entries);
      if (!inv) return std::nullopt;
      return Element::block(d_->block_dim, std::move(*inv));
    }
  }
  throw InternalError("invert: unreachable");
}

// ---------------------------------------------------------------------------
// radical structure
// ---------------------------------------------------------------------------

namespace {

int mpz_valuation(mpz_class x, const mpz_class& p) {
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

int poly_valuation(FpPoly x, const FpPoly& g, const mpz_class& p) {
  int v = 0;
  while (true) {
    auto [q, r] = fp_divmod(x, g, p);
    if (!r.is_zero()) break;
    x = std::move(q);
    ++v;
  }
  return v;
}

}  // namespace

int RingSpec::radical_degree(const Element& a) const {
  const int s = d_->nilexp;
  switch (d_->kind) {
    case RingKind::PrimeField:
    case RingKind::ExtensionField:
    case RingKind::Rationals:
    case RingKind::RationalQuaternions:
    case RingKind::MatrixRing:
      return is_zero(a) ? s : 0;
    case RingKind::IntegerMod: {
      if (a.residue() == 0) return s;
      int deg = s;
      for (const auto& [prime, e] : d_->int_factors) {
        const mpz_class pe = pow_mpz(prime, e);
        const int local = (a.residue() % pe == 0) ? s : std::min(mpz_valuation(a.residue(), prime), s);
        deg = std::min(deg, local);
      }
      return deg;
    }
    case RingKind::PolyQuotient: {
      if (a.poly().is_zero()) return s;
      int deg = s;
      for (const auto& [g, e] : d_->poly_factors) {
        FpPoly ge = fp_constant(1, d_->p);
        for (int i = 0; i < e; ++i) ge = fp_mul(ge, g, d_->p);
        const int local = fp_mod(a.poly(), ge, d_->p).is_zero() ? s : std::min(poly_valuation(a.poly(), g, d_->p), s);
        deg = std::min(deg, local);
      }
      return deg;
    }
    case RingKind::Product: {
      int deg = s;
      for (std::size_t i = 0; i < d_->factors.size(); ++i) {
        const RingSpec& f = d_->factors[i];
        const int local = f.is_zero(a.tuple()[i]) ? s : std::min(f.radical_degree(a.tuple()[i]), s);
        deg = std::min(deg, local);
      }
      return deg;
    }
  }
  throw InternalError("radical_degree: unreachable");
}

// ---------------------------------------------------------------------------
// canonical element index (finite rings)
// ---------------------------------------------------------------------------

Element RingSpec::element_at(const mpz_class& index) const {
  if (!d_->finite) throw InternalError("element_at on an infinite ring");
  if (index < 0 || index >= d_->card) throw InternalError("element_at: index out of range");
  switch (d_->kind) {
    case RingKind::PrimeField:
    case RingKind::IntegerMod:
      return Element::residue(index);
    case RingKind::ExtensionField:
    case RingKind::PolyQuotient: {
      std::vector<mpz_class> coeffs(d_->poly.degree(), mpz_class(0));
      mpz_class rest = index;
      for (auto& c : coeffs) {
        c = rest % d_->p;
        rest /= d_->p;
      }
      return Element::poly(FpPoly(std::move(coeffs)));
    }
    case RingKind::Product: {
      // Mixed radix with the first factor most significant.
      std::vector<mpz_class> radix;
      for (const RingSpec& f : d_->factors) radix.push_back(f.cardinality());
      Element::Tuple t(d_->factors.size());
      mpz_class rest = index;
      for (std::size_t i = d_->factors.size(); i-- > 0;) {
        t[i] = d_->factors[i].element_at(rest % radix[i]);
        rest /= radix[i];
      }
      return Element::tuple(std::move(t));
    }
    case RingKind::MatrixRing: {
      const int k = d_->block_dim;
      const mpz_class bcard = d_->base->cardinality();
      std::vector<Element> e(static_cast<std::size_t>(k) * k);
      mpz_class rest = index;
      for (std::size_t i = e.size(); i-- > 0;) {
        e[i] = d_->base->element_at(rest % bcard);
        rest /= bcard;
      }
      return Element::block(k, std::move(e));
    }
    default:
      throw InternalError("element_at: unreachable");
  }
}

void RingSpec::validate(const Element& x) const {
  switch (d_->kind) {
    case RingKind::PrimeField:
    case RingKind::IntegerMod: {
      const mpz_class& mod = d_->kind == RingKind::PrimeField ? d_->p : d_->m;
      if (x.residue() < 0 || x.residue() >= mod) throw Error("element residue out of canonical range");
      return;
    }
    case RingKind::ExtensionField:
    case RingKind::PolyQuotient: {
      const FpPoly& f = x.poly();
      if (f.degree() >= d_->poly.degree()) throw Error("polynomial residue not reduced");
      for (const auto& c : f.coeffs)
        if (c < 0 || c >= d_->p) throw Error("polynomial coefficient out of range");
      if (!f.coeffs.empty() && f.coeffs.back() == 0) throw Error("polynomial residue not trimmed");
      return;
    }
    case RingKind::Rationals: {
      mpq_class q = x.rational();
      q.canonicalize();
      if (q != x.rational()) throw Error("rational not in lowest terms");
      return;
    }
    case RingKind::RationalQuaternions:
      (void)x.quaternion();
      return;
    case RingKind::Product: {
      if (x.tuple().size() != d_->factors.size()) throw Error("product element arity mismatch");
      for (std::size_t i = 0; i < d_->factors.size(); ++i) d_->factors[i].validate(x.tuple()[i]);
      return;
    }
    case RingKind::MatrixRing: {
      if (x.block().dim != d_->block_dim) throw Error("matrix-ring element dimension mismatch");
      for (const Element& e : x.block().entries) d_->base->validate(e);
      return;
    }
  }
}

// ---------------------------------------------------------------------------
// semisimple decomposition
// ---------------------------------------------------------------------------

SemisimpleDecomposition RingSpec::semisimple_decompose() const { return SemisimpleDecomposition(*this); }

SemisimpleDecomposition::SemisimpleDecomposition(RingSpec source) : source_(std::move(source)) {
  switch (source_.kind()) {
    case RingKind::PrimeField:
    case RingKind::ExtensionField:
    case RingKind::Rationals:
    case RingKind::RationalQuaternions:
    case RingKind::MatrixRing:
      components_ = {source_};
      return;
    case RingKind::IntegerMod: {
      const auto& factors = source_.d_->int_factors;
      int_radical_modulus_ = 1;
      for (const auto& [p, e] : factors) int_radical_modulus_ *= p;
      for (const auto& [p, e] : factors) {
        components_.push_back(RingSpec::prime_field(p));
        // basis element: 1 mod p, 0 mod the other primes
        const mpz_class rest = int_radical_modulus_ / p;
        mpz_class inv;
        mpz_invert(inv.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
        int_basis_.push_back((rest * inv) % int_radical_modulus_);
      }
      return;
    }
    case RingKind::PolyQuotient: {
      const mpz_class& p = source_.prime();
      const auto& factors = source_.d_->poly_factors;
      poly_radical_modulus_ = fp_constant(1, p);
      for (const auto& [g, e] : factors) poly_radical_modulus_ = fp_mul(poly_radical_modulus_, g, p);
      for (const auto& [g, e] : factors) {
        components_.push_back(RingSpec::extension_field(p, g));
        FpPoly rest = fp_divmod(poly_radical_modulus_, g, p).first;
        FpExtGcd eg = fp_ext_gcd(rest, g, p);
        // eg.u * rest = 1 mod g; rest * u = 0 mod the other factors
        poly_basis_.push_back(fp_mod(fp_mul(rest, eg.u, p), poly_radical_modulus_, p));
      }
      return;
    }
    case RingKind::Product: {
      for (std::size_t f = 0; f < source_.factors().size(); ++f) {
        auto child = std::make_shared<SemisimpleDecomposition>(source_.factors()[f]);
        for (std::size_t l = 0; l < child->components().size(); ++l) {
          components_.push_back(child->components()[l]);
          routes_.push_back(Route{f, l});
        }
        children_.push_back(std::move(child));
      }
      return;
    }
  }
}

Element SemisimpleDecomposition::project(const Element& x, std::size_t t) const {
  if (t >= components_.size()) throw InternalError("semisimple projection: component out of range");
  switch (source_.kind()) {
    case RingKind::IntegerMod:
      return Element::residue(x.residue() % source_.d_->int_factors[t].first);
    case RingKind::PolyQuotient:
      return Element::poly(fp_mod(x.poly(), source_.d_->poly_factors[t].first, source_.prime()));
    case RingKind::Product: {
      const Route& r = routes_[t];
      return children_[r.factor]->project(x.tuple()[r.factor], r.local);
    }
    default:
      return x;
  }
}

std::vector<Element> SemisimpleDecomposition::project_all(const Element& x) const {
  std::vector<Element> out;
  out.reserve(components_.size());
  for (std::size_t t = 0; t < components_.size(); ++t) out.push_back(project(x, t));
  return out;
}

Element SemisimpleDecomposition::lift(const std::vector<Element>& comps) const {
  if (comps.size() != components_.size()) throw InternalError("semisimple lift: arity mismatch");
  switch (source_.kind()) {
    case RingKind::IntegerMod: {
      mpz_class acc = 0;
      for (std::size_t t = 0; t < comps.size(); ++t) acc += comps[t].residue() * int_basis_[t];
      acc %= int_radical_modulus_;
      if (acc < 0) acc += int_radical_modulus_;
      return Element::residue(std::move(acc));
    }
    case RingKind::PolyQuotient: {
      const mpz_class& p = source_.prime();
      FpPoly acc;
      for (std::size_t t = 0; t < comps.size(); ++t)
        acc = fp_add(acc, fp_mul(comps[t].poly(), poly_basis_[t], p), p);
      return Element::poly(fp_mod(acc, poly_radical_modulus_, p));
    }
    case RingKind::Product: {
      Element::Tuple out;
      out.reserve(children_.size());
      std::size_t cursor = 0;
      for (const auto& child : children_) {
        std::vector<Element> local(comps.begin() + cursor, comps.begin() + cursor + child->components().size());
        cursor += child->components().size();
        out.push_back(child->lift(local));
      }
      return Element::tuple(std::move(out));
    }
    default:
      return comps[0];
  }
}

// ---------------------------------------------------------------------------
// unit streams
// ---------------------------------------------------------------------------

struct UnitStream::ProductState {
  std::vector<UnitStream> streams;
  std::vector<std::vector<Element>> prefix;
  std::vector<bool> exhausted;
  bool all_finite = false;
  long phase_a_step = 0;
  bool in_phase_b = false;
  std::vector<long> b_cursor;
  bool b_done = false;
  std::set<std::vector<long>> emitted;
};

UnitStream::UnitStream(RingSpec ring) : ring_(std::move(ring)), cursor_(0) {
  if (ring_.kind() == RingKind::Product) {
    product_ = std::make_shared<ProductState>();
    product_->all_finite = ring_.is_finite();
    for (const RingSpec& f : ring_.factors()) {
      product_->streams.emplace_back(f);
      product_->prefix.emplace_back();
      product_->exhausted.push_back(false);
    }
  }
}

std::optional<Element> UnitStream::next() {
  switch (ring_.kind()) {
    case RingKind::Rationals:
    case RingKind::RationalQuaternions: {
      ++cursor_;
      return ring_.from_integer(cursor_.get_si());
    }
    case RingKind::MatrixRing:
      if (!ring_.is_finite()) {
        ++cursor_;
        return ring_.from_integer(cursor_.get_si());
      }
      [[fallthrough]];
    case RingKind::PrimeField:
    case RingKind::ExtensionField:
    case RingKind::IntegerMod:
    case RingKind::PolyQuotient: {
      while (true) {
        ++cursor_;
        if (cursor_ >= ring_.cardinality()) return std::nullopt;
        Element cand = ring_.element_at(cursor_);
        if (ring_.is_unit(cand)) return cand;
      }
    }
    case RingKind::Product:
      break;
  }

  // Product: a diagonal-of-streams phase, then (finite products only) the
  // remaining index tuples in lexicographic order.
  ProductState& st = *product_;
  const std::size_t k = st.streams.size();
  auto extend_to = [&](std::size_t i, long want) {
    while (!st.exhausted[i] && st.prefix[i].size() <= static_cast<std::size_t>(want)) {
      auto u = st.streams[i].next();
      if (!u) {
        st.exhausted[i] = true;
        break;
      }
      st.prefix[i].push_back(std::move(*u));
    }
  };

  if (!st.in_phase_b) {
    const long t = st.phase_a_step;
    std::vector<long> idx(k);
    bool fresh = (t == 0);
    for (std::size_t i = 0; i < k; ++i) {
      extend_to(i, t);
      if (st.prefix[i].empty()) throw InternalError("unit stream: factor with no units");
      const long last = static_cast<long>(st.prefix[i].size()) - 1;
      idx[i] = std::min(t, last);
      if (idx[i] == t) fresh = true;  // some coordinate still advancing
    }
    if (fresh) {
      ++st.phase_a_step;
      if (st.all_finite) st.emitted.insert(idx);
      Element::Tuple out;
      out.reserve(k);
      for (std::size_t i = 0; i < k; ++i) out.push_back(st.prefix[i][idx[i]]);
      return Element::tuple(std::move(out));
    }
    // every factor clamped: the diagonal phase is over
    st.in_phase_b = true;
    st.b_cursor.assign(k, 0);
    st.b_done = false;
  }

  if (!st.all_finite) throw InternalError("unit stream: infinite product reached phase B");
  while (!st.b_done) {
    std::vector<long> idx = st.b_cursor;
    // advance odometer (last factor fastest)
    for (std::size_t i = k; i-- > 0;) {
      if (++st.b_cursor[i] < static_cast<long>(st.prefix[i].size())) break;
      st.b_cursor[i] = 0;
      if (i == 0) st.b_done = true;
    }
    if (st.emitted.find(idx) == st.emitted.end()) {
      Element::Tuple out;
      out.reserve(k);
      for (std::size_t i = 0; i < k; ++i) out.push_back(st.prefix[i][idx[i]]);
      return Element::tuple(std::move(out));
    }
  }
  return std::nullopt;
}

UnitStream RingSpec::units() const { return UnitStream(*this); }

}  // namespace sgwit
