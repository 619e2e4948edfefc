#include "ade/residue.hpp"

#include "ade/errors.hpp"

namespace ade::numfield {

namespace {

__int128 floor_div(__int128 a, __int128 b) {
  __int128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

__int128 floor_mod(__int128 a, __int128 b) { return a - floor_div(a, b) * b; }

}  // namespace

ResidueRing::ResidueRing(const FieldContext& ctx, const RingInt& modulus)
    : t_(ctx.omega_trace()), n_(ctx.omega_norm_const()) {
  if (modulus.is_zero()) throw Error("residue ring modulo zero");
  Int nm = abs(ctx.norm(modulus));
  if (nm > Int(1) << 40) throw BudgetExceeded("residue ring too large");
  if (ctx.degree() == 1) {
    n1_ = Int(abs(modulus.a)).get_si();
    n2_ = 1;
    c_ = 0;
    return;
  }
  RingInt w = ctx.mul(modulus, RingInt(0, 1));
  long u1 = modulus.a.get_si(), u2 = modulus.b.get_si();
  long v1 = w.a.get_si(), v2 = w.b.get_si();
  // Extended gcd on the second coordinates.
  long g = u2, x = 1, y = 0, g1 = v2, x1 = 0, y1 = 1;
  while (g1 != 0) {
    long q = g / g1;
    long t;
    t = g - q * g1; g = g1; g1 = t;
    t = x - q * x1; x = x1; x1 = t;
    t = y - q * y1; y = y1; y1 = t;
  }
  if (g < 0) {
    g = -g;
    x = -x;
    y = -y;
  }
  if (g == 0) throw Error("degenerate ideal lattice");
  __int128 w1 = static_cast<__int128>(x) * u1 + static_cast<__int128>(y) * v1;
  __int128 z1 = static_cast<__int128>(v2 / g) * u1 - static_cast<__int128>(u2 / g) * v1;
  if (z1 < 0) z1 = -z1;
  n2_ = g;
  n1_ = static_cast<std::int64_t>(z1);
  c_ = static_cast<std::int64_t>(floor_mod(w1, z1));
  if (Int(static_cast<long>(n1_)) * n2_ != nm) throw Error("ideal lattice index mismatch");
}

ResidueRing::Elt ResidueRing::reduce(__int128 a, __int128 b) const {
  __int128 q = floor_div(b, n2_);
  b -= q * n2_;
  a -= q * c_;
  a = floor_mod(a, n1_);
  return {static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)};
}

ResidueRing::Elt ResidueRing::reduce(const RingInt& x) const {
  Int a, b;
  // Reduce big coordinates first so they fit in 128 bits.
  Int m = Int(static_cast<long>(n1_)) * n2_;
  mpz_fdiv_r(a.get_mpz_t(), x.a.get_mpz_t(), m.get_mpz_t());
  mpz_fdiv_r(b.get_mpz_t(), x.b.get_mpz_t(), m.get_mpz_t());
  return reduce(static_cast<__int128>(a.get_si()), static_cast<__int128>(b.get_si()));
}

ResidueRing::Elt ResidueRing::mul(const Elt& x, const Elt& y) const {
  __int128 bb = static_cast<__int128>(x.b) * y.b;
  __int128 a = static_cast<__int128>(x.a) * y.a + n_ * bb;
  __int128 b = static_cast<__int128>(x.a) * y.b + static_cast<__int128>(x.b) * y.a + t_ * bb;
  return reduce(a, b);
}

ResidueRing::Elt ResidueRing::pow(Elt x, std::uint64_t e) const {
  Elt r = one();
  while (e) {
    if (e & 1) r = mul(r, x);
    x = mul(x, x);
    e >>= 1;
  }
  return r;
}

}  // namespace ade::numfield
