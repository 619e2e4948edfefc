#include "ade/numfield.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>

#include "ade/errors.hpp"

namespace ade::numfield {

std::string to_string(Splitting s) {
  switch (s) {
    case Splitting::Rational: return "rational";
    case Splitting::Split: return "split";
    case Splitting::Inert: return "inert";
    case Splitting::Ramified: return "ramified";
  }
  return "?";
}

namespace {

constexpr int kAllowed[] = {-1, -2, -3, -7, -11, -19, -43, -67, -163};

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  unsigned __int128 r = 1 % m, x = a % m;
  while (e) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
    e >>= 1;
  }
  return static_cast<std::uint64_t>(r);
}

// Square root of a quadratic residue a modulo an odd prime p.
std::uint64_t sqrt_mod(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  std::uint64_t q = p - 1;
  int s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  std::uint64_t z = 2;
  while (powmod_u64(z, (p - 1) / 2, p) != p - 1) ++z;
  std::uint64_t m = s;
  std::uint64_t c = powmod_u64(z, q, p);
  std::uint64_t t = powmod_u64(a, q, p);
  std::uint64_t r = powmod_u64(a, (q + 1) / 2, p);
  auto mul = [p](std::uint64_t x, std::uint64_t y) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * y % p);
  };
  while (t != 1) {
    std::uint64_t i = 0, tt = t;
    while (tt != 1) {
      tt = mul(tt, tt);
      ++i;
    }
    std::uint64_t b = c;
    for (std::uint64_t j = 0; j + i + 1 < m; ++j) b = mul(b, b);
    m = i;
    c = mul(b, b);
    t = mul(t, c);
    r = mul(r, b);
  }
  return r;
}

}  // namespace

FieldContext FieldContext::rationals() {
  FieldContext f;
  f.units_ = {RingInt(1), RingInt(-1)};
  return f;
}

FieldContext FieldContext::quadratic(int d) {
  if (std::find(std::begin(kAllowed), std::end(kAllowed), d) == std::end(kAllowed))
    throw ParseError("unsupported field Q(sqrt" + std::to_string(d) + ")");
  FieldContext f;
  f.d_ = d;
  if (((d % 4) + 4) % 4 == 1) {
    f.t_ = 1;
    f.n_ = (d - 1) / 4;
  } else {
    f.t_ = 0;
    f.n_ = d;
  }
  f.units_ = {RingInt(1), RingInt(-1)};
  if (d == -1) f.units_ = {RingInt(1), RingInt(0, 1), RingInt(-1), RingInt(0, -1)};
  // omega = (1 + sqrt(-3))/2 is a primitive sixth root of unity.
  if (d == -3)
    f.units_ = {RingInt(1),  RingInt(0, 1),  RingInt(-1, 1),
                RingInt(-1), RingInt(0, -1), RingInt(1, -1)};
  return f;
}

FieldContext FieldContext::parse(std::string_view tag) {
  std::string s;
  for (char c : tag)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s == "Q" || s == "QQ") return rationals();
  if (s == "Q(i)" || s == "Q(sqrt-1)" || s == "Q(sqrt(-1))") return quadratic(-1);
  std::string inner;
  if (s.rfind("Q(sqrt(", 0) == 0 && s.size() > 9 && s.substr(s.size() - 2) == "))")
    inner = s.substr(7, s.size() - 9);
  else if (s.rfind("Q(sqrt", 0) == 0 && s.back() == ')')
    inner = s.substr(6, s.size() - 7);
  else
    throw ParseError("unknown field tag: " + std::string(tag));
  char* end = nullptr;
  long d = std::strtol(inner.c_str(), &end, 10);
  if (inner.empty() || *end != '\0') throw ParseError("unknown field tag: " + std::string(tag));
  return quadratic(static_cast<int>(d));
}

int FieldContext::field_discriminant() const {
  if (d_ == 0) return 1;
  return t_ == 1 ? d_ : 4 * d_;
}

std::string FieldContext::tag() const {
  if (d_ == 0) return "Q";
  if (d_ == -1) return "Q(i)";
  return "Q(sqrt" + std::to_string(d_) + ")";
}

RingInt FieldContext::mul(const RingInt& x, const RingInt& y) const {
  if (d_ == 0) return RingInt(x.a * y.a);
  Int bb = x.b * y.b;
  return RingInt(x.a * y.a + n_ * bb, x.a * y.b + x.b * y.a + t_ * bb);
}

RingInt FieldContext::pow(RingInt x, unsigned e) const {
  RingInt r(1);
  while (e) {
    if (e & 1) r = mul(r, x);
    e >>= 1;
    if (e) x = mul(x, x);
  }
  return r;
}

RingInt FieldContext::conj(const RingInt& x) const {
  if (d_ == 0) return x;
  return RingInt(x.a + t_ * x.b, -x.b);
}

Int FieldContext::norm(const RingInt& x) const {
  if (d_ == 0) return x.a;
  return x.a * x.a + t_ * x.a * x.b - n_ * x.b * x.b;
}

std::optional<RingInt> FieldContext::divide(const RingInt& x, const RingInt& d) const {
  if (d.is_zero()) throw Error("division by zero");
  if (d_ == 0) {
    if (!mpz_divisible_p(x.a.get_mpz_t(), d.a.get_mpz_t())) return std::nullopt;
    Int q;
    mpz_divexact(q.get_mpz_t(), x.a.get_mpz_t(), d.a.get_mpz_t());
    return RingInt(q);
  }
  RingInt num = mul(x, conj(d));
  Int nd = norm(d);
  if (!mpz_divisible_p(num.a.get_mpz_t(), nd.get_mpz_t()) ||
      !mpz_divisible_p(num.b.get_mpz_t(), nd.get_mpz_t()))
    return std::nullopt;
  RingInt q;
  mpz_divexact(q.a.get_mpz_t(), num.a.get_mpz_t(), nd.get_mpz_t());
  mpz_divexact(q.b.get_mpz_t(), num.b.get_mpz_t(), nd.get_mpz_t());
  return q;
}

RingInt FieldContext::divexact(const RingInt& x, const RingInt& d) const {
  auto q = divide(x, d);
  if (!q) throw Error("inexact division " + format(x) + " / " + format(d));
  return *q;
}

std::complex<double> FieldContext::to_complex(const RingInt& x) const {
  double a = x.a.get_d(), b = x.b.get_d();
  if (d_ == 0) return {a, 0.0};
  double s = std::sqrt(static_cast<double>(-d_));
  if (t_ == 0) return {a, b * s};
  return {a + 0.5 * b, 0.5 * b * s};
}

double FieldContext::abs_v(const RingInt& x) const {
  if (d_ == 0) return std::fabs(x.a.get_d());
  return norm(x).get_d();
}

bool FieldContext::abs_below(const RingInt& x, const Rat& bound) const {
  Int v = d_ == 0 ? Int(abs(x.a)) : norm(x);
  return v * bound.get_den() < bound.get_num();
}

RingInt FieldContext::canonical_associate(const RingInt& x) const {
  RingInt best = x;
  for (const RingInt& u : units_) {
    RingInt y = mul(u, x);
    if (best < y) best = y;
  }
  return best;
}

std::string FieldContext::format(const RingInt& x) const {
  if (d_ == 0 || x.b == 0) return x.a.get_str();
  std::string sym = d_ == -1 ? "i" : "w";
  std::string coef;
  if (x.b == 1)
    coef = sym;
  else if (x.b == -1)
    coef = "-" + sym;
  else
    coef = x.b.get_str() + sym;
  if (x.a == 0) return coef;
  std::string s = x.a.get_str();
  if (coef[0] != '-') s += "+";
  return s + coef;
}

RingInt FieldContext::parse_element(std::string_view text) const {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != '*')
      s.push_back(c);
  if (s.empty()) throw ParseError("empty ring element");
  RingInt out;
  std::size_t i = 0;
  bool any = false;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      if (s[i] == '-') sign = -1;
      ++i;
    }
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    std::string digits = s.substr(start, i - start);
    bool is_omega = false;
    if (i < s.size() && (s[i] == 'i' || s[i] == 'w' || s[i] == 'I')) {
      if (d_ == 0 || (s[i] == 'i' && d_ != -1) || (s[i] == 'I' && d_ != -1))
        throw ParseError("element " + std::string(text) + " is not in " + tag());
      is_omega = true;
      ++i;
    }
    if (digits.empty() && !is_omega) throw ParseError("bad ring element: " + std::string(text));
    Int v = digits.empty() ? Int(1) : Int(digits);
    if (sign < 0) v = -v;
    (is_omega ? out.b : out.a) += v;
    any = true;
    if (i < s.size() && s[i] != '+' && s[i] != '-')
      throw ParseError("bad ring element: " + std::string(text));
  }
  if (!any) throw ParseError("bad ring element: " + std::string(text));
  return out;
}

std::vector<PrimeIdeal> FieldContext::primes_above(std::uint64_t p) const {
  std::vector<PrimeIdeal> out;
  if (d_ == 0) {
    out.push_back({RingInt(Int(static_cast<unsigned long>(p))), p, p, Splitting::Rational});
    return out;
  }
  const long disc = field_discriminant();
  // Roots of x^2 - t x - n modulo p.
  std::vector<std::uint64_t> roots;
  if (p == 2) {
    for (std::uint64_t s = 0; s < 2; ++s) {
      long v = static_cast<long>(s * s) - t_ * static_cast<long>(s) - n_;
      if (((v % 2) + 2) % 2 == 0) roots.push_back(s);
    }
  } else {
    long dm = ((disc % static_cast<long>(p)) + static_cast<long>(p)) % static_cast<long>(p);
    std::uint64_t dd = static_cast<std::uint64_t>(dm);
    if (dd == 0) {
      std::uint64_t inv2 = (p + 1) / 2;
      std::uint64_t tm = static_cast<std::uint64_t>(((t_ % static_cast<long>(p)) + static_cast<long>(p)) % static_cast<long>(p));
      roots.push_back(static_cast<std::uint64_t>(static_cast<unsigned __int128>(tm) * inv2 % p));
    } else if (powmod_u64(dd, (p - 1) / 2, p) == 1) {
      // t^2 + 4n equals the field discriminant.
      std::uint64_t r = sqrt_mod(dd, p);
      std::uint64_t inv2 = (p + 1) / 2;
      std::uint64_t tm = static_cast<std::uint64_t>(((t_ % static_cast<long>(p)) + static_cast<long>(p)) % static_cast<long>(p));
      roots.push_back(static_cast<std::uint64_t>(static_cast<unsigned __int128>((tm + r) % p) * inv2 % p));
      roots.push_back(static_cast<std::uint64_t>(static_cast<unsigned __int128>((tm + p - r) % p) * inv2 % p));
    }
  }
  Int pz(static_cast<unsigned long>(p));
  if (roots.empty()) {
    out.push_back({RingInt(pz), p * p, p, Splitting::Inert});
    return out;
  }
  Splitting kind = roots.size() == 1 || (roots.size() == 2 && roots[0] == roots[1])
                       ? Splitting::Ramified
                       : Splitting::Split;
  // Elements of (p, omega - s): a + b*s = 0 mod p. Lattice basis (p, 0), (-s, 1);
  // its shortest vector under the norm form generates the ideal.
  auto q = [&](const RingInt& v) -> Int { return norm(v); };
  auto b2 = [&](const RingInt& u, const RingInt& v) -> Int {
    return 2 * u.a * v.a + t_ * (u.a * v.b + u.b * v.a) - 2 * n_ * u.b * v.b;
  };
  for (std::size_t r = 0; r < (kind == Splitting::Split ? 2u : 1u); ++r) {
    RingInt u(pz, 0), v(-Int(static_cast<unsigned long>(roots[r])), 1);
    for (;;) {
      if (q(u) > q(v)) std::swap(u, v);
      Int num = b2(u, v);
      Int den = 2 * q(u);
      Int m = floor_div(2 * num + den, 2 * den);
      if (m == 0) break;
      v = v - m * u;
      if (q(v) >= q(u)) break;
    }
    if (q(u) > q(v)) std::swap(u, v);
    if (q(u) != pz) throw Error("failed to find a prime element above " + pz.get_str());
    RingInt g = canonical_associate(u);
    out.push_back({g, p, p, kind});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PrimeIdeal> FieldContext::primes_up_to(std::uint64_t norm_bound) const {
  std::vector<PrimeIdeal> out;
  if (norm_bound < 2) return out;
  for (std::uint32_t p : small_primes(static_cast<std::uint32_t>(norm_bound))) {
    for (const PrimeIdeal& P : primes_above(p))
      if (P.norm <= norm_bound) out.push_back(P);
  }
  std::sort(out.begin(), out.end());
  return out;
}

PrimeIdeal FieldContext::prime_of(const RingInt& generator) const {
  Int n = abs(norm(generator));
  if (!n.fits_ulong_p()) throw Error("prime norm too large");
  std::uint64_t nv = n.get_ui();
  std::uint64_t p = nv;
  if (!is_prime_u64(nv)) {
    p = isqrt_u64(nv);
    if (p * p != nv || !is_prime_u64(p)) throw ParseError(format(generator) + " is not prime");
  }
  for (const PrimeIdeal& P : primes_above(p)) {
    if (P.norm != nv) continue;
    if (divides(P.generator, generator) && divides(generator, P.generator)) return P;
  }
  throw ParseError(format(generator) + " is not prime");
}

int FieldContext::valuation(const PrimeIdeal& P, const RingInt& x) const {
  if (x.is_zero()) throw Error("valuation of zero");
  int v = 0;
  RingInt y = x;
  while (auto q = divide(y, P.generator)) {
    y = std::move(*q);
    ++v;
  }
  return v;
}

std::vector<RingInt> FieldContext::elements_with_abs_below(const Rat& bound) const {
  std::vector<RingInt> out;
  if (bound <= 0) return out;
  if (d_ == 0) {
    Int lim = floor_div(bound.get_num() - 1, bound.get_den());  // largest |a| with |a| < bound
    if (bound.get_den() == 1) lim = bound.get_num() - 1;
    for (Int a = -lim; a <= lim; ++a) out.emplace_back(a);
    return out;
  }
  // 4N = (2a + t b)^2 + |D'| b^2 with |D'| = -(t^2 + 4n).
  const long dprime = -(t_ * t_ + 4 * n_);
  const double bd = bound.get_d();
  long bmax = static_cast<long>(std::sqrt(4.0 * bd / static_cast<double>(dprime))) + 2;
  for (long b = -bmax; b <= bmax; ++b) {
    double rest = 4.0 * bd - static_cast<double>(dprime) * static_cast<double>(b) * static_cast<double>(b);
    if (rest < -4.0) continue;
    double w = std::sqrt(std::max(rest, 0.0));
    long lo = static_cast<long>(std::floor((-w - static_cast<double>(t_ * b)) / 2.0)) - 2;
    long hi = static_cast<long>(std::ceil((w - static_cast<double>(t_ * b)) / 2.0)) + 2;
    for (long a = lo; a <= hi; ++a) {
      RingInt x{Int(a), Int(b)};
      if (abs_below(x, bound)) out.push_back(std::move(x));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<PrimeIdeal, int>> factor(const FieldContext& ctx, const RingInt& x,
                                               const IntFactorOptions& opt) {
  if (x.is_zero()) throw Error("cannot factor zero");
  Int n = abs(ctx.norm(x));
  std::vector<std::pair<PrimeIdeal, int>> out;
  for (const auto& [q, e] : factor_int(n, opt)) {
    if (!q.fits_ulong_p())
      throw FactorBudgetExceeded("prime " + q.get_str() + " exceeds 64 bits");
    for (const PrimeIdeal& P : ctx.primes_above(q.get_ui())) {
      int v = ctx.valuation(P, x);
      if (v > 0) out.emplace_back(P, v);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  return out;
}

SquarefreeProfile squarefree_profile(const FieldContext& ctx, const RingInt& x,
                                     const IntFactorOptions& opt) {
  SquarefreeProfile sp;
  for (const auto& [P, e] : factor(ctx, x, opt)) {
    if (e >= 2) {
      sp.squarefree = false;
      sp.offending_primes.push_back(P);
    }
  }
  return sp;
}

bool is_zero_point(const InvariantPoint& b) {
  return std::all_of(b.begin(), b.end(), [](const RingInt& x) { return x.is_zero(); });
}

InvariantPoint act_unit(const FieldContext& ctx, const std::vector<int>& degrees,
                        const RingInt& u, const InvariantPoint& b) {
  InvariantPoint out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i)
    out[i] = ctx.mul(ctx.pow(u, static_cast<unsigned>(degrees[i])), b[i]);
  return out;
}

double archimedean_height(const FieldContext& ctx, const std::vector<int>& degrees,
                          const InvariantPoint& b) {
  double h = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i].is_zero()) continue;
    h = std::max(h, std::pow(ctx.abs_v(b[i]), 1.0 / degrees[i]));
  }
  return h;
}

namespace {

// For each prime ideal, k_p = min_i floor(v_p(p_i) / d_i) over nonzero coordinates.
std::vector<std::pair<PrimeIdeal, int>> content_exponents(const FieldContext& ctx,
                                                          const std::vector<int>& degrees,
                                                          const InvariantPoint& b) {
  Int g = 0;
  for (const RingInt& x : b)
    if (!x.is_zero()) g = gcd(g, abs(ctx.norm(x)));
  std::vector<std::pair<PrimeIdeal, int>> out;
  if (g <= 1) return out;
  for (const auto& [q, e] : factor_int(g)) {
    for (const PrimeIdeal& P : ctx.primes_above(q.get_ui())) {
      int k = -1;
      for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i].is_zero()) continue;
        int v = ctx.valuation(P, b[i]) / degrees[i];
        k = k < 0 ? v : std::min(k, v);
        if (k == 0) break;
      }
      if (k > 0) out.emplace_back(P, k);
    }
  }
  return out;
}

}  // namespace

Rat ideal_norm_ib(const FieldContext& ctx, const std::vector<int>& degrees,
                  const InvariantPoint& b) {
  if (is_zero_point(b)) throw ZeroPoint();
  Rat r = 1;
  for (const auto& [P, k] : content_exponents(ctx, degrees, b)) {
    Int nk;
    mpz_ui_pow_ui(nk.get_mpz_t(), P.norm, static_cast<unsigned long>(k));
    r /= nk;
  }
  r.canonicalize();
  return r;
}

double height(const FieldContext& ctx, const std::vector<int>& degrees, const InvariantPoint& b) {
  if (is_zero_point(b)) return 0.0;
  return ideal_norm_ib(ctx, degrees, b).get_d() * archimedean_height(ctx, degrees, b);
}

bool height_below(const FieldContext& ctx, const std::vector<int>& degrees,
                  const InvariantPoint& b, const Rat& X) {
  if (X <= 0) return false;
  for (std::size_t i = 0; i < b.size(); ++i) {
    Rat bound;
    mpz_pow_ui(mpq_numref(bound.get_mpq_t()), X.get_num_mpz_t(), static_cast<unsigned long>(degrees[i]));
    mpz_pow_ui(mpq_denref(bound.get_mpq_t()), X.get_den_mpz_t(), static_cast<unsigned long>(degrees[i]));
    if (!ctx.abs_below(b[i], bound)) return false;
  }
  return true;
}

bool is_primitive(const FieldContext& ctx, const std::vector<int>& degrees,
                  const InvariantPoint& b) {
  if (is_zero_point(b)) throw ZeroPoint();
  return content_exponents(ctx, degrees, b).empty();
}

bool is_unit_canonical(const FieldContext& ctx, const std::vector<int>& degrees,
                       const InvariantPoint& b) {
  for (const RingInt& u : ctx.units()) {
    InvariantPoint ub = act_unit(ctx, degrees, u, b);
    if (std::lexicographical_compare(ub.begin(), ub.end(), b.begin(), b.end())) return false;
  }
  return true;
}

bool in_sigma(const FieldContext& ctx, const std::vector<int>& degrees, const InvariantPoint& b) {
  if (is_zero_point(b)) throw ZeroPoint();
  return is_unit_canonical(ctx, degrees, b) && is_primitive(ctx, degrees, b);
}

Rat parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ParseError("empty number");
  try {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      Rat r(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
      if (r.get_den() == 0) throw ParseError("zero denominator");
      r.canonicalize();
      return r;
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rat(Int(s));
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    if (digits.empty() || digits == "-" || digits == "+") throw ParseError("bad number " + s);
    if (digits[0] == '+') digits.erase(0, 1);
    Int den = 1;
    for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
    Rat r(Int(digits), den);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw ParseError("bad number " + s);
  }
}

PrimeTable build_prime_table(const FieldContext& ctx, std::uint64_t bound) {
  PrimeTable t;
  t.field_tag = ctx.discriminant_tag();
  t.bound = bound;
  t.primes = ctx.primes_up_to(bound);
  return t;
}

namespace {

constexpr char kMagic[8] = {'A', 'D', 'E', 'P', 'R', 'I', 'M', 'E'};
constexpr std::uint32_t kVersion = 1;

void put_u64(std::ostream& os, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(buf, 8);
}

bool get_u64(std::istream& is, std::uint64_t& v) {
  unsigned char buf[8];
  if (!is.read(reinterpret_cast<char*>(buf), 8)) return false;
  v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return true;
}

}  // namespace

void write_prime_table(const PrimeTable& t, const std::filesystem::path& file) {
  std::ofstream os(file, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot write " + file.string());
  os.write(kMagic, 8);
  put_u64(os, (static_cast<std::uint64_t>(static_cast<std::uint32_t>(t.field_tag)) << 32) | kVersion);
  put_u64(os, t.bound);
  put_u64(os, t.primes.size());
  for (const PrimeIdeal& P : t.primes) {
    put_u64(os, P.norm);
    put_u64(os, static_cast<std::uint64_t>(P.generator.a.get_si()));
    put_u64(os, static_cast<std::uint64_t>(P.generator.b.get_si()));
  }
  if (!os) throw Error("short write to " + file.string());
}

std::optional<PrimeTable> read_prime_table(const FieldContext& ctx,
                                           const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) return std::nullopt;
  char magic[8];
  if (!is.read(magic, 8) || !std::equal(magic, magic + 8, kMagic)) return std::nullopt;
  std::uint64_t head = 0, bound = 0, count = 0;
  if (!get_u64(is, head) || !get_u64(is, bound) || !get_u64(is, count)) return std::nullopt;
  if ((head & 0xffffffffu) != kVersion) return std::nullopt;
  if (static_cast<int>(static_cast<std::int32_t>(head >> 32)) != ctx.discriminant_tag())
    return std::nullopt;
  if (count > (1ULL << 32)) return std::nullopt;
  PrimeTable t;
  t.field_tag = ctx.discriminant_tag();
  t.bound = bound;
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint64_t norm = 0, a = 0, b = 0;
    if (!get_u64(is, norm) || !get_u64(is, a) || !get_u64(is, b)) return std::nullopt;
    RingInt g{Int(static_cast<long>(a)), Int(static_cast<long>(b))};
    Int gn = abs(ctx.norm(g));
    if (!gn.fits_ulong_p() || gn.get_ui() != norm || norm > bound) return std::nullopt;
    PrimeIdeal P;
    try {
      P = ctx.prime_of(g);
    } catch (const Error&) {
      return std::nullopt;
    }
    if (P.generator != g) return std::nullopt;
    if (!t.primes.empty() && !(t.primes.back() < P)) return std::nullopt;
    t.primes.push_back(P);
  }
  char extra;
  if (is.read(&extra, 1)) return std::nullopt;
  return t;
}

PrimeTable cached_prime_table(const FieldContext& ctx, std::uint64_t bound) {
  const char* dir = std::getenv("ADE_CACHE_DIR");
  if (!dir || !*dir) return build_prime_table(ctx, bound);
  std::string tag = ctx.tag();
  std::string safe;
  for (char c : tag) safe.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' ? c : '_');
  std::filesystem::path file =
      std::filesystem::path(dir) / ("primes_" + safe + "_" + std::to_string(bound) + ".bin");
  if (auto t = read_prime_table(ctx, file); t && t->bound == bound) return *t;
  PrimeTable t = build_prime_table(ctx, bound);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  try {
    write_prime_table(t, file);
  } catch (const Error&) {
  }
  return t;
}

}  // namespace ade::numfield
