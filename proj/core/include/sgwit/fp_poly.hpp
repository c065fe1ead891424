#pragma once

#include <gmpxx.h>

#include <utility>
#include <vector>

namespace sgwit {

/// Dense polynomial over F_p. Coefficients live in [0, p) and trailing zeros
/// are trimmed, so the zero polynomial has an empty coefficient vector.
struct FpPoly {
  std::vector<mpz_class> coeffs;  // coeffs[i] multiplies x^i

  FpPoly() = default;
  explicit FpPoly(std::vector<mpz_class> c) : coeffs(std::move(c)) { trim(); }

  bool is_zero() const { return coeffs.empty(); }
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  const mpz_class& leading() const { return coeffs.back(); }
  void trim() {
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
  }
  bool operator==(const FpPoly& o) const { return coeffs == o.coeffs; }
  bool operator!=(const FpPoly& o) const { return !(*this == o); }
};

FpPoly fp_reduce(FpPoly a, const mpz_class& p);
FpPoly fp_constant(const mpz_class& c, const mpz_class& p);
FpPoly fp_add(const FpPoly& a, const FpPoly& b, const mpz_class& p);
FpPoly fp_sub(const FpPoly& a, const FpPoly& b, const mpz_class& p);
FpPoly fp_neg(const FpPoly& a, const mpz_class& p);
FpPoly fp_mul(const FpPoly& a, const FpPoly& b, const mpz_class& p);

/// Division with remainder; the divisor must be nonzero.
std::pair<FpPoly, FpPoly> fp_divmod(const FpPoly& a, const FpPoly& b, const mpz_class& p);
FpPoly fp_mod(const FpPoly& a, const FpPoly& m, const mpz_class& p);
FpPoly fp_make_monic(const FpPoly& a, const mpz_class& p);

/// Monic gcd; fp_ext_gcd also returns u, v with u*a + v*b = g.
FpPoly fp_gcd(FpPoly a, FpPoly b, const mpz_class& p);
struct FpExtGcd {
  FpPoly g, u, v;
};
FpExtGcd fp_ext_gcd(const FpPoly& a, const FpPoly& b, const mpz_class& p);

bool fp_is_irreducible(const FpPoly& f, const mpz_class& p);

/// Monic irreducible factors with multiplicities, ordered by (degree, then
/// the coefficient vector read as base-p digits). Input must be nonzero.
std::vector<std::pair<FpPoly, int>> fp_factor(const FpPoly& f, const mpz_class& p);

/// All monic irreducibles over F_p of degree 1..max_degree in enumeration order.
std::vector<FpPoly> fp_monic_irreducibles(const mpz_class& p, int max_degree);

}  // namespace sgwit
