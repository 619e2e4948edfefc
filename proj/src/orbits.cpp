#include "ade/orbits.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "ade/errors.hpp"
#include "ade/residue.hpp"
#include "ade/rootsys.hpp"

namespace ade::orbits {

using numfield::PrimeIdeal;
using numfield::ResidueRing;
using Elt = ResidueRing::Elt;

poly::Poly MonicPoly::to_poly() const {
  poly::Poly p(b.size() + 1);
  p[b.size()] = RingInt(1);
  for (std::size_t j = 0; j < b.size(); ++j) p[b.size() - 1 - j] = b[j];
  return p;
}

MonicPoly MonicPoly::from_poly(const poly::Poly& p) {
  int n = poly::degree(p);
  if (n < 1 || p[static_cast<std::size_t>(n)] != RingInt(1)) throw Error("polynomial is not monic");
  MonicPoly f;
  for (int j = 1; j <= n; ++j) f.b.push_back(p[static_cast<std::size_t>(n - j)]);
  return f;
}

MonicPoly MonicPoly::parse(const FieldContext& ctx, std::string_view text) {
  std::vector<RingInt> c;
  std::string s(text), item;
  std::stringstream ss(s);
  while (std::getline(ss, item, ',')) c.push_back(ctx.parse_element(item));
  if (c.size() < 2 || c[0] != RingInt(1)) throw ParseError("expected a monic coefficient list such as 1,0,-2,4");
  return MonicPoly{std::vector<RingInt>(c.begin() + 1, c.end())};
}

std::string MonicPoly::format(const FieldContext& ctx) const {
  std::string s = "1";
  for (const RingInt& x : b) s += "," + ctx.format(x);
  return s;
}

Frac::Frac(RingInt n, Int d) : num(std::move(n)), den(std::move(d)) {
  if (den == 0) throw Error("zero denominator");
  if (den < 0) {
    den = -den;
    num = -num;
  }
  Int g = gcd(gcd(num.a, num.b), den);
  if (g > 1) {
    num.a /= g;
    num.b /= g;
    den /= g;
  }
}

Frac add(const Frac& x, const Frac& y) {
  return Frac(x.den * y.num + y.den * x.num, x.den * y.den);
}

Frac mul(const FieldContext& ctx, const Frac& x, const Frac& y) {
  return Frac(ctx.mul(x.num, y.num), x.den * y.den);
}

Frac div(const FieldContext& ctx, const Frac& x, const RingInt& d) {
  if (d.is_zero()) throw Error("division by zero");
  return Frac(ctx.mul(x.num, ctx.conj(d)), x.den * ctx.mul(d, ctx.conj(d)).a);
}

std::string format(const FieldContext& ctx, const Frac& x) {
  if (x.den == 1) return ctx.format(x.num);
  std::string n = ctx.format(x.num);
  if (x.num.b != 0) n = "(" + n + ")";
  return n + "/" + x.den.get_str();
}

namespace {

// Polynomials over the residue field, lowest degree first.
using FPoly = std::vector<Elt>;

void ftrim(const ResidueRing& F, FPoly& p) {
  while (!p.empty() && F.is_zero(p.back())) p.pop_back();
}

Elt finv(const ResidueRing& F, const Elt& x) { return F.pow(x, F.size() - 2); }

FPoly fmod(const ResidueRing& F, FPoly a, const FPoly& b) {
  ftrim(F, a);
  Elt inv = finv(F, b.back());
  while (a.size() >= b.size()) {
    Elt c = F.mul(a.back(), inv);
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = F.sub(a[shift + i], F.mul(c, b[i]));
    ftrim(F, a);
  }
  return a;
}

FPoly fgcd(const ResidueRing& F, FPoly a, FPoly b) {
  ftrim(F, a);
  ftrim(F, b);
  while (!b.empty()) {
    FPoly r = fmod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Residues t mod p^2 with t = r mod p (r the double root of f mod p) and p^2 | f(t).
std::vector<RingInt> local_shifts(const FieldContext& ctx, const poly::Poly& f, const PrimeIdeal& P) {
  ResidueRing F(ctx, P.generator);
  FPoly fb, db;
  for (const RingInt& c : f) fb.push_back(F.reduce(c));
  poly::Poly df = poly::derivative(f);
  for (const RingInt& c : df) db.push_back(F.reduce(c));
  FPoly g = fgcd(F, fb, db);
  if (g.size() != 2) return {};
  Elt r = F.neg(F.mul(g[0], finv(F, g[1])));
  RingInt base = F.lift(r);
  RingInt pi2 = ctx.mul(P.generator, P.generator);
  ResidueRing R2(ctx, pi2);
  std::vector<RingInt> out;
  for (std::uint64_t s = 0; s < F.size(); ++s) {
    RingInt t = base + ctx.mul(P.generator, F.lift(F.element(s)));
    if (ctx.divides(pi2, poly::eval(ctx, f, t))) out.push_back(R2.lift(R2.reduce(t)));
  }
  return out;
}

// Representative of x mod M closest to zero, by rounding x / M in the integral basis.
RingInt centre(const FieldContext& ctx, const RingInt& x, const RingInt& M) {
  RingInt num = ctx.mul(x, ctx.conj(M));
  Int n = ctx.mul(M, ctx.conj(M)).a;
  auto round = [&](const Int& a) {
    Int q;
    Int twice = 2 * a + n;
    Int den = 2 * n;
    mpz_fdiv_q(q.get_mpz_t(), twice.get_mpz_t(), den.get_mpz_t());
    return q;
  };
  RingInt q(round(num.a), round(num.b));
  return x - ctx.mul(q, M);
}

bool smaller(const FieldContext& ctx, const RingInt& x, const RingInt& y) {
  Int nx = abs(ctx.norm(x)), ny = abs(ctx.norm(y));
  if (nx != ny) return nx < ny;
  // Prefer the nonnegative one, then the lexicographic order.
  return y < x;
}

}  // namespace

RingInt weak_shift(const FieldContext& ctx, const MonicPoly& f, const RingInt& m,
                   const std::vector<std::uint64_t>& excluded) {
  if (m.is_zero()) throw Error("m must be nonzero");
  if (abs(ctx.norm(m)) == 1) return RingInt(0);
  auto primes = numfield::factor(ctx, m);
  for (const auto& [P, e] : primes) {
    if (e > 1) throw Error("m must be squarefree");
    if (std::find(excluded.begin(), excluded.end(), P.p) != excluded.end())
      throw Error("m must be coprime to the excluded primes");
  }
  poly::Poly fp = f.to_poly();
  RingInt disc = poly::discriminant(ctx, fp);
  std::vector<std::vector<RingInt>> local;
  for (const auto& [P, e] : primes) {
    if (disc.is_zero() || ctx.valuation(P, disc) < 2)
      throw NoShift("m^2 does not divide disc(f) at " + ctx.format(P.generator));
    auto t = local_shifts(ctx, fp, P);
    if (t.empty()) throw NoShift("disc(f) is not weakly divisible at " + ctx.format(P.generator));
    local.push_back(std::move(t));
  }
  // CRT idempotents for the moduli pi^2.
  RingInt M = ctx.mul(m, m);
  std::vector<RingInt> idem;
  for (const auto& [P, e] : primes) {
    RingInt q = ctx.mul(P.generator, P.generator);
    RingInt Mi = ctx.divexact(M, q);
    ResidueRing R(ctx, q);
    std::uint64_t units = P.norm * (P.norm - 1);
    Elt inv = R.pow(R.reduce(Mi), units - 1);
    idem.push_back(ctx.mul(Mi, R.lift(inv)));
  }
  std::vector<std::size_t> pick(local.size(), 0);
  bool have = false;
  RingInt best;
  for (;;) {
    RingInt l(0);
    for (std::size_t i = 0; i < local.size(); ++i) l += ctx.mul(local[i][pick[i]], idem[i]);
    l = centre(ctx, l, M);
    if (!have || smaller(ctx, l, best)) {
      best = l;
      have = true;
    }
    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] == local[i].size()) pick[i++] = 0;
    if (i == pick.size()) break;
  }
  return best;
}

OrbitMatrix companion_matrix(const FieldContext& ctx, const MonicPoly& f) {
  const int N = f.degree();
  if (N < 2) throw Error("companion matrix needs degree at least 2");
  OrbitMatrix w;
  w.entries.assign(static_cast<std::size_t>(N), std::vector<Frac>(static_cast<std::size_t>(N)));
  w.denominator_bound = N % 2 == 0 ? 4 : 2;
  auto at = [&](int i, int k) -> Frac& { return w.entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]; };
  for (int i = 0; i + 1 < N; ++i) at(i, i + 1) = Frac(RingInt(1));
  for (int j = 1; j <= N; ++j) {
    const RingInt& bj = f.b[static_cast<std::size_t>(j - 1)];
    const int off = j - 1;
    if ((N - j) % 2 == 0) {
      int k = (N - j) / 2;
      at(k + off, k) = add(at(k + off, k), Frac(-bj));
    } else {
      int k = (N - j - 1) / 2;
      at(k + off, k) = add(at(k + off, k), Frac(-bj, 2));
      at(k + 1 + off, k + 1) = add(at(k + 1 + off, k + 1), Frac(-bj, 2));
    }
  }
  if (N % 2 == 0) {
    int k = (N - 2) / 2;
    at(k + 1, k) = add(at(k + 1, k), Frac(ctx.mul(f.b[0], f.b[0]), 4));
  }
  return w;
}

OrbitMatrix construct_orbit(const FieldContext& ctx, const MonicPoly& f, const RingInt& m,
                            const std::vector<std::uint64_t>& excluded) {
  RingInt l = weak_shift(ctx, f, m, excluded);
  MonicPoly g = MonicPoly::from_poly(poly::shift(ctx, f.to_poly(), l));
  OrbitMatrix w = companion_matrix(ctx, g);
  const int N = w.size();
  auto weight = [N](int i) { return i == 0 ? 1 : (i == N - 1 ? -1 : 0); };
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      Frac& x = w.entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (i == j) x = add(x, Frac(l));
      if (x.is_zero()) continue;
      int e = weight(i) - weight(j);
      for (; e > 0; --e) x = mul(ctx, x, Frac(m));
      for (; e < 0; ++e) x = div(ctx, x, m);
    }
  }
  return w;
}

QValue q_invariant(const FieldContext& ctx, const OrbitMatrix& w) {
  const int N = w.size();
  if (N < 3) throw ShapeError("Q-invariant needs size at least 3");
  for (int i = 0; i < N; ++i)
    for (int j = i + 2; j < N; ++j)
      if (!w.entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].is_zero())
        throw ShapeError("nonzero entry above the superdiagonal at (" + std::to_string(i) + "," +
                         std::to_string(j) + ")");
  auto slot = [&](int i) -> const Frac& {
    return w.entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(i + 1)];
  };
  rootsys::GradedData gd =
      rootsys::graded_decomposition(rootsys::DynkinType::make(rootsys::Kind::A, N - 1));
  Frac q(RingInt(1));
  for (const auto& orbit : gd.simple_orbits) {
    const Frac& rep = slot(orbit.front());
    for (int node : orbit)
      if (!(slot(node) == rep))
        throw ShapeError("superdiagonal slots " + std::to_string(orbit.front()) + " and " +
                         std::to_string(node) + " differ");
    q = mul(ctx, q, rep);
  }
  return {q};
}

std::vector<RingInt> charpoly_cofactor(const FieldContext& ctx, const std::vector<std::vector<RingInt>>& a) {
  const int N = static_cast<int>(a.size());
  if (N > 20) throw BudgetExceeded("cofactor expansion limited to size 20");
  std::map<std::uint32_t, poly::Poly> memo;
  // det of (x I - a) restricted to rows row..N-1 and the columns in mask.
  std::function<poly::Poly(int, std::uint32_t)> minor = [&](int row, std::uint32_t mask) -> poly::Poly {
    if (row == N) return {RingInt(1)};
    if (auto it = memo.find(mask); it != memo.end()) return it->second;
    poly::Poly total;
    int sign = 1;
    for (int c = 0; c < N; ++c) {
      if (!(mask >> c & 1)) continue;
      poly::Poly entry{-a[static_cast<std::size_t>(row)][static_cast<std::size_t>(c)]};
      if (c == row) entry.push_back(RingInt(1));
      poly::trim(entry);
      if (!entry.empty()) {
        poly::Poly term = poly::mul(ctx, entry, minor(row + 1, mask & ~(1u << c)));
        total = sign > 0 ? poly::add(total, term) : poly::sub(total, term);
      }
      sign = -sign;
    }
    memo[mask] = total;
    return total;
  };
  poly::Poly det = minor(0, (N == 32 ? 0u : (1u << N)) - 1);
  return MonicPoly::from_poly(det).b;
}

std::vector<RingInt> charpoly_faddeev(const FieldContext& ctx, const std::vector<std::vector<RingInt>>& a) {
  const std::size_t N = a.size();
  using Mat = std::vector<std::vector<RingInt>>;
  auto matmul = [&](const Mat& x, const Mat& y) {
    Mat z(N, std::vector<RingInt>(N));
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        if (x[i][k].is_zero()) continue;
        for (std::size_t j = 0; j < N; ++j) z[i][j] += ctx.mul(x[i][k], y[k][j]);
      }
    return z;
  };
  std::vector<RingInt> b(N + 1);
  b[0] = RingInt(1);
  Mat Mk(N, std::vector<RingInt>(N));
  for (std::size_t k = 1; k <= N; ++k) {
    Mat next = matmul(a, Mk);
    for (std::size_t i = 0; i < N; ++i) next[i][i] += b[k - 1];
    Mk = std::move(next);
    Mat AM = matmul(a, Mk);
    RingInt tr(0);
    for (std::size_t i = 0; i < N; ++i) tr += AM[i][i];
    b[k] = -ctx.divexact(tr, RingInt(static_cast<long>(k)));
  }
  return std::vector<RingInt>(b.begin() + 1, b.end());
}

MonicPoly characteristic_polynomial(const FieldContext& ctx, const OrbitMatrix& w) {
  Int k = 1;
  for (const auto& row : w.entries)
    for (const Frac& x : row) k = lcm(k, x.den);
  std::vector<std::vector<RingInt>> a;
  for (const auto& row : w.entries) {
    std::vector<RingInt> r;
    for (const Frac& x : row) r.push_back(Int(k / x.den) * x.num);
    a.push_back(std::move(r));
  }
  std::vector<RingInt> c1 = charpoly_cofactor(ctx, a);
  std::vector<RingInt> c2 = charpoly_faddeev(ctx, a);
  for (std::size_t j = 0; j < c1.size(); ++j)
    if (c1[j] != c2[j])
      throw IdentityFailure("matrix", "characteristic polynomial", static_cast<int>(j + 1),
                            ctx.format(c1[j]), ctx.format(c2[j]));
  // chi_{k w}(x) = k^N chi_w(x / k), so b_j(w) = b_j(k w) / k^j.
  MonicPoly f;
  Int kj = 1;
  for (const RingInt& c : c1) {
    kj *= k;
    auto q = ctx.divide(c, RingInt(kj));
    if (!q) throw Error("characteristic polynomial is not integral");
    f.b.push_back(*q);
  }
  return f;
}

OrbitCertificate certify(const FieldContext& ctx, const MonicPoly& f, const RingInt& m,
                         const OrbitMatrix& w, const RingInt& shift) {
  OrbitCertificate c;
  c.shift = shift;
  const int N = w.size();
  c.integral_after_clearing = true;
  for (const auto& row : w.entries)
    for (const Frac& x : row)
      if (w.denominator_bound % x.den != 0) c.integral_after_clearing = false;
  try {
    c.charpoly_matches = characteristic_polynomial(ctx, w) == f;
  } catch (const Error&) {
    c.charpoly_matches = false;
  }
  c.superdiagonal_matches = N >= 2;
  for (int i = 0; i + 1 < N; ++i) {
    const Frac& x = w.entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(i + 1)];
    Frac want = (i == 0 || i == N - 2) ? Frac(m) : Frac(RingInt(1));
    if (!(x == want)) c.superdiagonal_matches = false;
  }
  try {
    c.q = q_invariant(ctx, w);
    c.q_matches = c.q.value == Frac(m);
    c.q_norm_matches = c.q.value.den == 1 && abs(ctx.norm(c.q.value.num)) == abs(ctx.norm(m));
  } catch (const ShapeError&) {
    c.q_matches = c.q_norm_matches = false;
  }
  return c;
}

std::uint64_t disc_mod_p2(const MonicPoly& f, std::uint64_t p) {
  const int N = f.degree();
  const std::int64_t p2 = static_cast<std::int64_t>(p * p);
  std::vector<std::int64_t> fc(static_cast<std::size_t>(N + 1)), dc(static_cast<std::size_t>(N));
  auto red = [](const Int& x, std::int64_t q) {
    Int r;
    Int qq(static_cast<long>(q));
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), qq.get_mpz_t());
    return static_cast<std::int64_t>(r.get_si());
  };
  // High to low.
  fc[0] = 1;
  for (int j = 1; j <= N; ++j) fc[static_cast<std::size_t>(j)] = red(f.b[static_cast<std::size_t>(j - 1)].a, p2);
  for (int j = 0; j < N; ++j) dc[static_cast<std::size_t>(j)] = (fc[static_cast<std::size_t>(j)] * (N - j)) % p2;
  const int S = 2 * N - 1;
  std::vector<std::vector<std::int64_t>> s(static_cast<std::size_t>(S), std::vector<std::int64_t>(static_cast<std::size_t>(S), 0));
  for (int r = 0; r < N - 1; ++r)
    for (int j = 0; j <= N; ++j) s[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + j)] = fc[static_cast<std::size_t>(j)];
  for (int r = 0; r < N; ++r)
    for (int j = 0; j < N; ++j) s[static_cast<std::size_t>(N - 1 + r)][static_cast<std::size_t>(r + j)] = dc[static_cast<std::size_t>(j)];

  // Elimination over the local ring Z/p^2. A column without a unit is divided
  // by p and the rest of the computation only needs to hold mod p.
  std::int64_t q = p2;
  int pexp = 0;
  __int128 det = 1;
  auto inv_mod = [](std::int64_t a, std::int64_t m) {
    std::int64_t g = m, x = 0, x1 = 1, a1 = ((a % m) + m) % m;
    while (a1 != 0) {
      std::int64_t t = g / a1;
      std::swap(g, a1);
      a1 -= t * g;
      std::swap(x, x1);
      x1 -= t * x;
    }
    return ((x % m) + m) % m;
  };
  const std::int64_t P = static_cast<std::int64_t>(p);
  for (int c = 0; c < S; ++c) {
    int piv = -1;
    for (int r = c; r < S; ++r)
      if (s[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] % P != 0) {
        piv = r;
        break;
      }
    if (piv < 0) {
      if (pexp == 1) return 0;
      for (int r = c; r < S; ++r) s[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] /= P;
      for (auto& row : s)
        for (auto& x : row) x %= P;
      q = P;
      pexp = 1;
      for (int r = c; r < S; ++r)
        if (s[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] % P != 0) {
          piv = r;
          break;
        }
      if (piv < 0) return 0;
    }
    if (piv != c) {
      std::swap(s[static_cast<std::size_t>(piv)], s[static_cast<std::size_t>(c)]);
      det = -det;
    }
    std::int64_t pv = s[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
    det = (det * pv) % q;
    std::int64_t inv = inv_mod(pv, q);
    for (int r = c + 1; r < S; ++r) {
      std::int64_t factor = static_cast<std::int64_t>(static_cast<__int128>(s[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]) * inv % q);
      if (factor == 0) continue;
      for (int k = c; k < S; ++k) {
        __int128 v = s[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] -
                     static_cast<__int128>(factor) * s[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
        s[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] = static_cast<std::int64_t>(((v % q) + q) % q);
      }
    }
  }
  __int128 d = ((det % q) + q) % q;
  if (pexp == 1) d = d * P;
  // disc = (-1)^{N(N-1)/2} Res(f, f') for monic f.
  if ((static_cast<long>(N) * (N - 1) / 2) % 2 == 1) d = -d;
  return static_cast<std::uint64_t>(((d % p2) + p2) % p2);
}

bool weakly_divisible_bruteforce(const MonicPoly& f, std::uint64_t p) {
  if (disc_mod_p2(f, p) != 0) return false;
  // disc(f + p c) mod p^2 is affine in c mod p, so the unit vectors decide.
  Int P(static_cast<unsigned long>(p));
  for (std::size_t j = 0; j < f.b.size(); ++j) {
    MonicPoly g = f;
    g.b[j] = RingInt(f.b[j].a + P);
    if (disc_mod_p2(g, p) != 0) return true;
  }
  return false;
}

std::vector<WeakPair> generate_weak_pairs(int n, std::size_t count, const std::vector<std::uint64_t>& primes,
                                          std::mt19937_64& rng) {
  if (primes.empty()) throw Error("no primes for the generator");
  auto FQ = FieldContext::rationals();
  std::uniform_int_distribution<int> coef(-9, 9), shift(-30, 30), pick(0, static_cast<int>(primes.size()) - 1),
      kind(0, 3);
  std::vector<WeakPair> out;
  const int N = n + 1;
  while (out.size() < count) {
    std::vector<std::uint64_t> ps{primes[static_cast<std::size_t>(pick(rng))]};
    if (kind(rng) == 0) {
      std::uint64_t q = primes[static_cast<std::size_t>(pick(rng))];
      if (q != ps[0]) ps.push_back(q);
    }
    long mv = 1;
    for (auto q : ps) mv *= static_cast<long>(q);
    Int m(mv);
    // x^N + p_1 x^{N-1} + ... + p_{n-1} x^2 + m p_n x + m^2 p_{n+1}, then shifted.
    MonicPoly g;
    for (int j = 1; j <= N; ++j) {
      Int c(coef(rng));
      if (j == N - 1) c *= m;
      if (j == N) c *= m * m;
      g.b.push_back(RingInt(c));
    }
    MonicPoly f = MonicPoly::from_poly(poly::shift(FQ, g.to_poly(), RingInt(shift(rng))));
    bool ok = !poly::discriminant(FQ, f.to_poly()).is_zero();
    for (auto q : ps) ok = ok && weakly_divisible_bruteforce(f, q);
    if (ok) out.push_back({f, RingInt(m)});
  }
  return out;
}

nlohmann::json to_json(const FieldContext& ctx, const OrbitMatrix& w) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : w.entries) {
    nlohmann::json r = nlohmann::json::array();
    for (const Frac& x : row) r.push_back(format(ctx, x));
    rows.push_back(r);
  }
  return {{"size", w.size()}, {"denominator_bound", w.denominator_bound.get_str()}, {"rows", rows}};
}

}  // namespace ade::orbits
