#include "sgwit/fp_poly.hpp"

#include <algorithm>

#include "sgwit/errors.hpp"

namespace sgwit {

namespace {

mpz_class mod_p(const mpz_class& x, const mpz_class& p) {
  mpz_class r = x % p;
  if (r < 0) r += p;
  return r;
}

mpz_class inv_mod_p(const mpz_class& x, const mpz_class& p) {
  mpz_class out;
  if (mpz_invert(out.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()) == 0)
    throw InternalError("fp_poly: non-invertible coefficient mod p");
  return out;
}

}  // namespace

FpPoly fp_reduce(FpPoly a, const mpz_class& p) {
  for (auto& c : a.coeffs) c = mod_p(c, p);
  a.trim();
  return a;
}

FpPoly fp_constant(const mpz_class& c, const mpz_class& p) {
  FpPoly out;
  out.coeffs = {mod_p(c, p)};
  out.trim();
  return out;
}

FpPoly fp_add(const FpPoly& a, const FpPoly& b, const mpz_class& p) {
  FpPoly out;
  out.coeffs.resize(std::max(a.coeffs.size(), b.coeffs.size()), mpz_class(0));
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) {
    mpz_class s = 0;
    if (i < a.coeffs.size()) s += a.coeffs[i];
    if (i < b.coeffs.size()) s += b.coeffs[i];
    out.coeffs[i] = mod_p(s, p);
  }
  out.trim();
  return out;
}

FpPoly fp_neg(const FpPoly& a, const mpz_class& p) {
  FpPoly out = a;
  for (auto& c : out.coeffs) c = mod_p(-c, p);
  out.trim();
  return out;
}

FpPoly fp_sub(const FpPoly& a, const FpPoly& b, const mpz_class& p) {
  return fp_add(a, fp_neg(b, p), p);
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, const mpz_class& p) {
  if (a.is_zero() || b.is_zero()) return {};
  FpPoly out;
  out.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, mpz_class(0));
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) out.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
  for (auto& c : out.coeffs) c = mod_p(c, p);
  out.trim();
  return out;
}

std::pair<FpPoly, FpPoly> fp_divmod(const FpPoly& a, const FpPoly& b, const mpz_class& p) {
  if (b.is_zero()) throw InternalError("fp_poly: division by zero polynomial");
  FpPoly rem = a;
  FpPoly quot;
  const int db = b.degree();
  if (rem.degree() >= db) quot.coeffs.assign(rem.degree() - db + 1, mpz_class(0));
  const mpz_class lead_inv = inv_mod_p(b.leading(), p);
  while (!rem.is_zero() && rem.degree() >= db) {
    const int shift = rem.degree() - db;
    const mpz_class factor = mod_p(rem.leading() * lead_inv, p);
    quot.coeffs[shift] = factor;
    for (int i = 0; i <= db; ++i)
      rem.coeffs[i + shift] = mod_p(rem.coeffs[i + shift] - factor * b.coeffs[i], p);
    rem.trim();
  }
  quot.trim();
  return {quot, rem};
}

FpPoly fp_mod(const FpPoly& a, const FpPoly& m, const mpz_class& p) { return fp_divmod(a, m, p).second; }

FpPoly fp_make_monic(const FpPoly& a, const mpz_class& p) {
  if (a.is_zero()) return a;
  const mpz_class inv = inv_mod_p(a.leading(), p);
  FpPoly out = a;
  for (auto& c : out.coeffs) c = mod_p(c * inv, p);
  return out;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, const mpz_class& p) {
  while (!b.is_zero()) {
    FpPoly r = fp_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return fp_make_monic(a, p);
}

FpExtGcd fp_ext_gcd(const FpPoly& a, const FpPoly& b, const mpz_class& p) {
  FpPoly r0 = a, r1 = b;
  FpPoly s0 = fp_constant(1, p), s1;
  FpPoly t0, t1 = fp_constant(1, p);
  while (!r1.is_zero()) {
    auto [q, r] = fp_divmod(r0, r1, p);
    FpPoly s = fp_sub(s0, fp_mul(q, s1, p), p);
    FpPoly t = fp_sub(t0, fp_mul(q, t1, p), p);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
    t0 = std::move(t1);
    t1 = std::move(t);
  }
  if (!r0.is_zero()) {
    const mpz_class inv = inv_mod_p(r0.leading(), p);
    const FpPoly scale = fp_constant(inv, p);
    r0 = fp_mul(r0, scale, p);
    s0 = fp_mul(s0, scale, p);
    t0 = fp_mul(t0, scale, p);
  }
  return {r0, s0, t0};
}

namespace {

// Enumerates monic polynomials of the given degree in index order: the index
// is read as base-p digits c_0, c_1, ..., c_{deg-1}.
std::vector<FpPoly> monic_of_degree(const mpz_class& p, int deg) {
  std::vector<FpPoly> out;
  mpz_class count = 1;
  for (int i = 0; i < deg; ++i) count *= p;
  for (mpz_class idx = 0; idx < count; ++idx) {
    std::vector<mpz_class> coeffs(deg + 1, mpz_class(0));
    mpz_class rest = idx;
    for (int i = 0; i < deg; ++i) {
      coeffs[i] = rest % p;
      rest /= p;
    }
    coeffs[deg] = 1;
    out.emplace_back(std::move(coeffs));
  }
  return out;
}

}  // namespace

std::vector<FpPoly> fp_monic_irreducibles(const mpz_class& p, int max_degree) {
  std::vector<FpPoly> irr;
  for (int d = 1; d <= max_degree; ++d) {
    for (FpPoly& cand : monic_of_degree(p, d)) {
      bool divisible = false;
      for (const FpPoly& g : irr) {
        if (2 * g.degree() > d) break;
        if (fp_mod(cand, g, p).is_zero()) {
          divisible = true;
          break;
        }
      }
      if (!divisible) irr.push_back(std::move(cand));
    }
  }
  return irr;
}

bool fp_is_irreducible(const FpPoly& f, const mpz_class& p) {
  if (f.degree() < 1) return false;
  if (f.degree() == 1) return true;
  for (const FpPoly& g : fp_monic_irreducibles(p, f.degree() / 2))
    if (fp_mod(f, g, p).is_zero()) return false;
  return true;
}

std::vector<std::pair<FpPoly, int>> fp_factor(const FpPoly& f, const mpz_class& p) {
  if (f.is_zero()) throw InternalError("fp_factor: zero polynomial");
  FpPoly rem = fp_make_monic(f, p);
  std::vector<std::pair<FpPoly, int>> factors;
  if (rem.degree() == 0) return factors;
  for (int d = 1; rem.degree() > 0 && d <= rem.degree(); ++d) {
    if (2 * d > rem.degree()) break;
    for (FpPoly& g : monic_of_degree(p, d)) {
      if (rem.degree() < d) break;
      int mult = 0;
      while (true) {
        auto [q, r] = fp_divmod(rem, g, p);
        if (!r.is_zero()) break;
        rem = std::move(q);
        ++mult;
      }
      if (mult > 0) factors.emplace_back(std::move(g), mult);
    }
  }
  if (rem.degree() > 0) factors.emplace_back(rem, 1);
  return factors;
}

}  // namespace sgwit
