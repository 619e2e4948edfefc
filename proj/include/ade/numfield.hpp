#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ade/intfactor.hpp"
#include "ade/rational.hpp"

namespace ade::numfield {

// a + b*omega in the integral basis {1, omega} of the ring of integers.
struct RingInt {
  Int a = 0;
  Int b = 0;

  RingInt() = default;
  RingInt(long x) : a(x) {}  // NOLINT
  RingInt(Int x) : a(std::move(x)) {}  // NOLINT
  RingInt(Int x, Int y) : a(std::move(x)), b(std::move(y)) {}

  bool is_zero() const { return a == 0 && b == 0; }
  RingInt operator-() const { return {-a, -b}; }
  RingInt& operator+=(const RingInt& o) { a += o.a; b += o.b; return *this; }
  RingInt& operator-=(const RingInt& o) { a -= o.a; b -= o.b; return *this; }
  friend RingInt operator+(RingInt x, const RingInt& y) { return x += y; }
  friend RingInt operator-(RingInt x, const RingInt& y) { return x -= y; }
  friend RingInt operator*(const Int& k, const RingInt& x) { return {k * x.a, k * x.b}; }
  friend bool operator==(const RingInt& x, const RingInt& y) { return x.a == y.a && x.b == y.b; }
  friend bool operator!=(const RingInt& x, const RingInt& y) { return !(x == y); }
  // Fixed total order: lexicographic on (a, b).
  friend bool operator<(const RingInt& x, const RingInt& y) {
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  }
};

enum class Splitting { Rational, Split, Inert, Ramified };
std::string to_string(Splitting s);

struct PrimeIdeal {
  RingInt generator;
  std::uint64_t norm = 0;  // N p
  std::uint64_t p = 0;     // rational prime below
  Splitting splitting = Splitting::Rational;

  friend bool operator==(const PrimeIdeal& x, const PrimeIdeal& y) {
    return x.norm == y.norm && x.generator == y.generator;
  }
  friend bool operator<(const PrimeIdeal& x, const PrimeIdeal& y) {
    return x.norm != y.norm ? x.norm < y.norm : x.generator < y.generator;
  }
};

class FieldContext {
 public:
  static FieldContext rationals();
  static FieldContext quadratic(int d);
  // "Q", "Q(i)", "Q(sqrt-3)", "Q(sqrt(-7))"
  static FieldContext parse(std::string_view tag);

  int discriminant_tag() const { return d_; }
  int degree() const { return d_ == 0 ? 1 : 2; }
  int field_discriminant() const;
  std::string tag() const;
  const std::vector<RingInt>& units() const { return units_; }

  // omega^2 = t*omega + n
  long omega_trace() const { return t_; }
  long omega_norm_const() const { return n_; }

  RingInt mul(const RingInt& x, const RingInt& y) const;
  RingInt pow(RingInt x, unsigned e) const;
  RingInt conj(const RingInt& x) const;
  Int norm(const RingInt& x) const;
  std::optional<RingInt> divide(const RingInt& x, const RingInt& d) const;
  bool divides(const RingInt& d, const RingInt& x) const { return divide(x, d).has_value(); }
  RingInt divexact(const RingInt& x, const RingInt& d) const;

  std::complex<double> to_complex(const RingInt& x) const;
  // Normalized archimedean absolute value: |x| over Q, |x|^2 at the complex place.
  double abs_v(const RingInt& x) const;

  RingInt canonical_associate(const RingInt& x) const;

  std::string format(const RingInt& x) const;
  RingInt parse_element(std::string_view text) const;

  std::vector<PrimeIdeal> primes_above(std::uint64_t p) const;
  std::vector<PrimeIdeal> primes_up_to(std::uint64_t norm_bound) const;
  // Prime ideal generated by a rational prime or a prime element.
  PrimeIdeal prime_of(const RingInt& generator) const;
  int valuation(const PrimeIdeal& p, const RingInt& x) const;

  // Elements with abs_v(x) < bound, ordered by (a, b).
  std::vector<RingInt> elements_with_abs_below(const Rat& bound) const;
  // Exact test abs_v(x) < bound.
  bool abs_below(const RingInt& x, const Rat& bound) const;

 private:
  int d_ = 0;
  long t_ = 0;
  long n_ = 0;
  std::vector<RingInt> units_;
};

std::vector<std::pair<PrimeIdeal, int>> factor(const FieldContext& ctx, const RingInt& x,
                                               const IntFactorOptions& opt = {});

struct SquarefreeProfile {
  bool squarefree = true;
  std::vector<PrimeIdeal> offending_primes;
};

SquarefreeProfile squarefree_profile(const FieldContext& ctx, const RingInt& x,
                                     const IntFactorOptions& opt = {});

using InvariantPoint = std::vector<RingInt>;

bool is_zero_point(const InvariantPoint& b);

// u . b = (u^{d_i} p_i)
InvariantPoint act_unit(const FieldContext& ctx, const std::vector<int>& degrees,
                        const RingInt& u, const InvariantPoint& b);

// sup_i |p_i|_v^{1/d_i} at the archimedean place.
double archimedean_height(const FieldContext& ctx, const std::vector<int>& degrees,
                          const InvariantPoint& b);
// N I_b for integral b, with I_b = {a : a^{d_i} p_i integral}.
Rat ideal_norm_ib(const FieldContext& ctx, const std::vector<int>& degrees,
                  const InvariantPoint& b);
double height(const FieldContext& ctx, const std::vector<int>& degrees, const InvariantPoint& b);
// Exact test of archimedean_height(b) < X, used on Sigma where N I_b = 1.
bool height_below(const FieldContext& ctx, const std::vector<int>& degrees,
                  const InvariantPoint& b, const Rat& X);

bool is_primitive(const FieldContext& ctx, const std::vector<int>& degrees,
                  const InvariantPoint& b);
bool is_unit_canonical(const FieldContext& ctx, const std::vector<int>& degrees,
                       const InvariantPoint& b);
// Throws ZeroPoint for b = 0.
bool in_sigma(const FieldContext& ctx, const std::vector<int>& degrees, const InvariantPoint& b);

Rat parse_rational(std::string_view text);

// Binary prime tables, see README for the layout.
struct PrimeTable {
  int field_tag = 0;
  std::uint64_t bound = 0;
  std::vector<PrimeIdeal> primes;
};

PrimeTable build_prime_table(const FieldContext& ctx, std::uint64_t bound);
void write_prime_table(const PrimeTable& t, const std::filesystem::path& file);
// Returns nullopt when the file is missing, truncated or inconsistent.
std::optional<PrimeTable> read_prime_table(const FieldContext& ctx,
                                           const std::filesystem::path& file);
// Uses $ADE_CACHE_DIR when set and writable; falls back to building in memory.
PrimeTable cached_prime_table(const FieldContext& ctx, std::uint64_t bound);

}  // namespace ade::numfield
