#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ade/numfield.hpp"
#include "ade/poly.hpp"
#include "json.hpp"

namespace ade::orbits {

using numfield::FieldContext;
using numfield::RingInt;

// x^N + b_1 x^{N-1} + ... + b_N, stored as (b_1, ..., b_N).
struct MonicPoly {
  std::vector<RingInt> b;

  int degree() const { return static_cast<int>(b.size()); }
  poly::Poly to_poly() const;
  static MonicPoly from_poly(const poly::Poly& p);  // p must be monic
  // "1,0,-2,4": coefficients from the leading one down.
  static MonicPoly parse(const FieldContext& ctx, std::string_view text);
  std::string format(const FieldContext& ctx) const;
  friend bool operator==(const MonicPoly&, const MonicPoly&) = default;
};

// num / den with den > 0 and no common rational factor.
struct Frac {
  RingInt num;
  Int den = 1;

  Frac() = default;
  Frac(RingInt n) : num(std::move(n)) {}  // NOLINT
  Frac(RingInt n, Int d);
  bool is_zero() const { return num.is_zero(); }
  bool is_integral() const { return den == 1; }
  friend bool operator==(const Frac& x, const Frac& y) { return x.num == y.num && x.den == y.den; }
};

Frac add(const Frac& x, const Frac& y);
Frac mul(const FieldContext& ctx, const Frac& x, const Frac& y);
Frac div(const FieldContext& ctx, const Frac& x, const RingInt& d);
std::string format(const FieldContext& ctx, const Frac& x);

struct OrbitMatrix {
  std::vector<std::vector<Frac>> entries;
  Int denominator_bound = 1;  // 2 for odd size, 4 for even size

  int size() const { return static_cast<int>(entries.size()); }
};

struct QValue {
  Frac value;
};

// l with f'(l) = 0 mod m and f(l) = 0 mod m^2, i.e. f(x + l) = x^N + ... + m p_n x + m^2 p_{n+1}.
// Needs m squarefree and coprime to the excluded rational primes; throws
// NoShift unless m^2 weakly divides disc(f).
RingInt weak_shift(const FieldContext& ctx, const MonicPoly& f, const RingInt& m,
                   const std::vector<std::uint64_t>& excluded = {});

// Anti-band model: b_j sits on the (j-1)-th subdiagonal, centred on the
// antidiagonal, as -b_j or as two entries -b_j/2; ones on the superdiagonal.
// Even sizes carry the extra entry b_1^2/4 at the centre of b_2.
OrbitMatrix companion_matrix(const FieldContext& ctx, const MonicPoly& f);

// D (B(g) + l I) D^{-1} with g = f(x + l) and D = diag(m, 1, ..., 1, 1/m).
OrbitMatrix construct_orbit(const FieldContext& ctx, const MonicPoly& f, const RingInt& m,
                            const std::vector<std::uint64_t>& excluded = {});

// Product over theta-orbits of superdiagonal slots of one entry per orbit.
// Throws ShapeError when the matrix has entries above the superdiagonal or
// when slots in one orbit differ.
QValue q_invariant(const FieldContext& ctx, const OrbitMatrix& w);

// Characteristic polynomials of integral matrices, coefficients b_1..b_N.
std::vector<RingInt> charpoly_cofactor(const FieldContext& ctx, const std::vector<std::vector<RingInt>>& a);
std::vector<RingInt> charpoly_faddeev(const FieldContext& ctx, const std::vector<std::vector<RingInt>>& a);
// Characteristic polynomial of an OrbitMatrix through k * w for the common
// denominator k. Throws IdentityFailure if the two routines disagree.
MonicPoly characteristic_polynomial(const FieldContext& ctx, const OrbitMatrix& w);

struct OrbitCertificate {
  bool integral_after_clearing = false;
  bool charpoly_matches = false;
  bool superdiagonal_matches = false;
  bool q_matches = false;
  bool q_norm_matches = false;
  RingInt shift;
  QValue q;
  bool ok() const {
    return integral_after_clearing && charpoly_matches && superdiagonal_matches && q_matches && q_norm_matches;
  }
};

OrbitCertificate certify(const FieldContext& ctx, const MonicPoly& f, const RingInt& m,
                         const OrbitMatrix& w, const RingInt& shift);

// disc(f) mod p^2 from the Sylvester determinant over Z/p^2 (Q only).
std::uint64_t disc_mod_p2(const MonicPoly& f, std::uint64_t p);
// p^2 | disc(f) and some f + p c has p^2 not dividing its discriminant, tested
// on c = e_1, ..., e_N.
bool weakly_divisible_bruteforce(const MonicPoly& f, std::uint64_t p);

struct WeakPair {
  MonicPoly f;
  RingInt m;
};

// Random monic f of degree n + 1 over Z together with m built from the given
// primes, each accepted only after weakly_divisible_bruteforce holds at every
// prime of m.
std::vector<WeakPair> generate_weak_pairs(int n, std::size_t count, const std::vector<std::uint64_t>& primes,
                                          std::mt19937_64& rng);

nlohmann::json to_json(const FieldContext& ctx, const OrbitMatrix& w);

}  // namespace ade::orbits
