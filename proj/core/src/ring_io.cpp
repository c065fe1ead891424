#include <cctype>
#include <map>
#include <sstream>

#include "sgwit/errors.hpp"
#include "sgwit/ring.hpp"

namespace sgwit {

namespace detail {

std::vector<std::string_view> split_top_level(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (depth == 0 && c == sep) {
      out.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(text.substr(start));
  return out;
}

mpz_class parse_mpz(std::string_view text) {
  if (text.empty()) throw ParseError("expected an integer");
  std::size_t i = 0;
  if (text[0] == '+' || text[0] == '-') i = 1;
  if (i == text.size()) throw ParseError("expected digits after sign");
  for (std::size_t j = i; j < text.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(text[j])))
      throw ParseError("bad integer '" + std::string(text) + "'");
  return mpz_class(std::string(text), 10);
}

}  // namespace detail

namespace {

std::string strip_spaces(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

// ---- polynomial text ------------------------------------------------------

std::string format_fp_poly(const FpPoly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  for (int d = 0; d <= f.degree(); ++d) {
    const mpz_class& c = f.coeffs[d];
    if (c == 0) continue;
    if (!out.empty()) out += '+';
    if (d == 0) {
      out += c.get_str();
    } else {
      if (c != 1) {
        out += c.get_str();
        out += '*';
      }
      out += 'x';
      if (d > 1) {
        out += '^';
        out += std::to_string(d);
      }
    }
  }
  return out;
}

// Accepts sums of terms c, c*x^k, x^k, x (the '*' is optional).
FpPoly parse_fp_poly(std::string_view text, const mpz_class& p) {
  const std::string s = strip_spaces(text);
  if (s.empty()) throw ParseError("empty polynomial");
  std::map<int, mpz_class> coeff;
  std::size_t i = 0;
  while (i < s.size()) {
    mpz_class sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      if (s[i] == '-') sign = -1;
      ++i;
    }
    std::string digits;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits.push_back(s[i++]);
    bool has_x = false;
    int deg = 0;
    if (i < s.size() && s[i] == '*') {
      ++i;
      if (i >= s.size() || s[i] != 'x') throw ParseError("expected x after '*' in polynomial");
    }
    if (i < s.size() && s[i] == 'x') {
      has_x = true;
      deg = 1;
      ++i;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::string ed;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ed.push_back(s[i++]);
        if (ed.empty()) throw ParseError("expected exponent digits in polynomial");
        deg = std::stoi(ed);
      }
    }
    if (digits.empty() && !has_x) throw ParseError("bad polynomial term in '" + s + "'");
    mpz_class c = digits.empty() ? mpz_class(1) : mpz_class(digits, 10);
    coeff[deg] += sign * c;
  }
  std::vector<mpz_class> v;
  if (!coeff.empty()) {
    v.assign(coeff.rbegin()->first + 1, mpz_class(0));
    for (const auto& [d, c] : coeff) v[d] = c;
  }
  return fp_reduce(FpPoly(std::move(v)), p);
}

// ---- rational / quaternion text -------------------------------------------

std::string format_rational(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

mpq_class parse_rational(std::string_view text) {
  const auto parts = detail::split_top_level(text, '/');
  if (parts.size() > 2) throw ParseError("bad rational '" + std::string(text) + "'");
  const mpz_class num = detail::parse_mpz(parts[0]);
  mpz_class den = 1;
  if (parts.size() == 2) den = detail::parse_mpz(parts[1]);
  if (den == 0) throw ParseError("rational with zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

std::string format_quaternion(const Quaternion& q) {
  struct Part {
    const mpq_class* c;
    const char* basis;
  };
  const Part parts[4] = {{&q.w, ""}, {&q.x, "i"}, {&q.y, "j"}, {&q.z, "k"}};
  std::string out;
  for (const Part& part : parts) {
    if (*part.c == 0) continue;
    std::string term;
    if (part.basis[0] == '\0') {
      term = format_rational(*part.c);
    } else if (*part.c == 1) {
      term = part.basis;
    } else if (*part.c == -1) {
      term = std::string("-") + part.basis;
    } else {
      term = format_rational(*part.c) + "*" + part.basis;
    }
    if (!out.empty() && term[0] != '-') out += '+';
    out += term;
  }
  return out.empty() ? "0" : out;
}

Quaternion parse_quaternion(std::string_view text) {
  const std::string s = strip_spaces(text);
  if (s.empty()) throw ParseError("empty quaternion");
  Quaternion out;
  std::size_t i = 0;
  while (i < s.size()) {
    mpq_class sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      if (s[i] == '-') sign = -1;
      ++i;
    }
    std::string body;
    while (i < s.size() && s[i] != '+' && s[i] != '-') body.push_back(s[i++]);
    if (body.empty()) throw ParseError("bad quaternion term in '" + s + "'");
    char basis = '1';
    const char last = body.back();
    if (last == 'i' || last == 'j' || last == 'k') {
      basis = last;
      body.pop_back();
      if (!body.empty() && body.back() == '*') body.pop_back();
    }
    mpq_class coeff = body.empty() ? mpq_class(1) : parse_rational(body);
    coeff *= sign;
    switch (basis) {
      case '1':
        out.w += coeff;
        break;
      case 'i':
        out.x += coeff;
        break;
      case 'j':
        out.y += coeff;
        break;
      default:
        out.z += coeff;
        break;
    }
  }
  return out;
}

std::string_view strip_outer(std::string_view s, char open, char close, const char* what) {
  if (s.size() < 2 || s.front() != open || s.back() != close)
    throw ParseError(std::string("expected ") + open + "..." + close + " around " + what + " in '" +
                     std::string(s) + "'");
  return s.substr(1, s.size() - 2);
}

}  // namespace

// ---------------------------------------------------------------------------
// element text
// ---------------------------------------------------------------------------

std::string RingSpec::format_element(const Element& x) const {
  switch (kind()) {
    case RingKind::PrimeField:
    case RingKind::IntegerMod:
      return x.residue().get_str();
    case RingKind::ExtensionField:
    case RingKind::PolyQuotient:
      return format_fp_poly(x.poly());
    case RingKind::Rationals:
      return format_rational(x.rational());
    case RingKind::RationalQuaternions:
      return format_quaternion(x.quaternion());
    case RingKind::Product: {
      std::string out = "(";
      for (std::size_t i = 0; i < factors().size(); ++i) {
        if (i) out += '|';
        out += factors()[i].format_element(x.tuple()[i]);
      }
      return out + ")";
    }
    case RingKind::MatrixRing: {
      const int k = block_dim();
      std::string out = "[";
      for (int i = 0; i < k; ++i) {
        if (i) out += ',';
        out += '[';
        for (int j = 0; j < k; ++j) {
          if (j) out += ',';
          out += base_ring().format_element(x.block().entries[i * k + j]);
        }
        out += ']';
      }
      return out + "]";
    }
  }
  throw InternalError("format_element: unreachable");
}

Element RingSpec::parse_element(std::string_view text) const {
  const std::string s = strip_spaces(text);
  if (s.empty()) throw ParseError("empty element");
  switch (kind()) {
    case RingKind::PrimeField:
    case RingKind::IntegerMod: {
      const mpz_class& mod = kind() == RingKind::PrimeField ? prime() : modulus();
      mpz_class r = detail::parse_mpz(s) % mod;
      if (r < 0) r += mod;
      return Element::residue(std::move(r));
    }
    case RingKind::ExtensionField:
    case RingKind::PolyQuotient:
      return Element::poly(fp_mod(parse_fp_poly(s, prime()), poly_modulus(), prime()));
    case RingKind::Rationals:
      return Element::rational(parse_rational(s));
    case RingKind::RationalQuaternions:
      return Element::quaternion(parse_quaternion(s));
    case RingKind::Product: {
      const auto inner = strip_outer(s, '(', ')', "product element");
      const auto parts = detail::split_top_level(inner, '|');
      if (parts.size() != factors().size())
        throw ParseError("product element arity mismatch in '" + s + "'");
      Element::Tuple t;
      t.reserve(parts.size());
      for (std::size_t i = 0; i < parts.size(); ++i) t.push_back(factors()[i].parse_element(parts[i]));
      return Element::tuple(std::move(t));
    }
    case RingKind::MatrixRing: {
      const int k = block_dim();
      const auto inner = strip_outer(s, '[', ']', "matrix-ring element");
      const auto rows = detail::split_top_level(inner, ',');
      if (static_cast<int>(rows.size()) != k)
        throw ParseError("matrix-ring element row count mismatch in '" + s + "'");
      std::vector<Element> entries;
      entries.reserve(static_cast<std::size_t>(k) * k);
      for (const auto& row : rows) {
        const auto row_inner = strip_outer(row, '[', ']', "matrix-ring row");
        const auto cells = detail::split_top_level(row_inner, ',');
        if (static_cast<int>(cells.size()) != k)
          throw ParseError("matrix-ring element column count mismatch in '" + s + "'");
        for (const auto& cell : cells) entries.push_back(base_ring().parse_element(cell));
      }
      return Element::block(k, std::move(entries));
    }
  }
  throw InternalError("parse_element: unreachable");
}

// ---------------------------------------------------------------------------
// ring spec text
// ---------------------------------------------------------------------------

std::string RingSpec::to_string() const {
  switch (kind()) {
    case RingKind::PrimeField:
      return "F" + prime().get_str();
    case RingKind::ExtensionField:
    case RingKind::PolyQuotient:
      return "F" + prime().get_str() + "[x]/(" + format_fp_poly(poly_modulus()) + ")";
    case RingKind::Rationals:
      return "Q";
    case RingKind::RationalQuaternions:
      return "HQ";
    case RingKind::IntegerMod:
      return "Z/" + modulus().get_str();
    case RingKind::Product: {
      std::string out;
      for (std::size_t i = 0; i < factors().size(); ++i) {
        if (i) out += 'x';
        out += factors()[i].to_string();
      }
      return out;
    }
    case RingKind::MatrixRing:
      return "M" + std::to_string(block_dim()) + "(" + base_ring().to_string() + ")";
  }
  throw InternalError("to_string: unreachable");
}

namespace {

RingSpec parse_ring_atom(std::string_view s) {
  if (s == "Q") return RingSpec::rationals();
  if (s == "HQ") return RingSpec::rational_quaternions();
  if (s.rfind("Z/", 0) == 0) return RingSpec::integer_mod(detail::parse_mpz(s.substr(2)));
  if (!s.empty() && s[0] == 'M') {
    std::size_t i = 1;
    std::string digits;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits.push_back(s[i++]);
    if (digits.empty() || i >= s.size() || s[i] != '(' || s.back() != ')')
      throw ParseError("bad matrix-ring spec '" + std::string(s) + "'");
    const auto inner = s.substr(i + 1, s.size() - i - 2);
    return RingSpec::matrix_ring(RingSpec::parse(inner), std::stoi(digits));
  }
  if (!s.empty() && s[0] == 'F') {
    std::size_t i = 1;
    std::string digits;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits.push_back(s[i++]);
    if (digits.empty()) throw ParseError("bad field spec '" + std::string(s) + "'");
    const mpz_class p(digits, 10);
    if (i == s.size()) return RingSpec::prime_field(p);
    const std::string_view rest = s.substr(i);
    if (rest.rfind("[x]/(", 0) != 0 || rest.back() != ')')
      throw ParseError("bad quotient spec '" + std::string(s) + "'");
    const auto poly_text = rest.substr(5, rest.size() - 6);
    return RingSpec::poly_quotient(p, parse_fp_poly(poly_text, p));
  }
  throw ParseError("unrecognised ring spec '" + std::string(s) + "'");
}

}  // namespace

RingSpec RingSpec::parse(std::string_view text) {
  const std::string s = strip_spaces(text);
  if (s.empty()) throw ParseError("empty ring spec");
  const auto parts = detail::split_top_level(s, 'x');
  if (parts.size() == 1) return parse_ring_atom(parts[0]);
  std::vector<RingSpec> factors;
  factors.reserve(parts.size());
  for (const auto& part : parts) factors.push_back(parse_ring_atom(part));
  return RingSpec::product(std::move(factors));
}

}  // namespace sgwit
