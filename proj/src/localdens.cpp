#include "ade/localdens.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ade/errors.hpp"
#include "ade/kernels/quadratic.hpp"
#include "ade/residue.hpp"

namespace ade::localdens {

using numfield::ResidueRing;
using numfield::RingInt;
using Elt = ResidueRing::Elt;
using u128 = unsigned __int128;

namespace {

struct Setup {
  const FieldContext& ctx;
  curvefam::DiscriminantPolynomial disc;
  ResidueRing field;   // O/p
  ResidueRing square;  // O/p^2
  RingInt pi;
  int rank;
  int last_degree;  // degree of Delta in the last coordinate

  Setup(const FieldContext& c, const CurveFamily& fam, const PrimeIdeal& p)
      : ctx(c),
        disc(fam),
        field(c, p.generator),
        square(c, c.mul(p.generator, p.generator)),
        pi(p.generator),
        rank(fam.rank()),
        last_degree(fam.disc_degree / fam.degrees.back()) {}
};

// Coefficients of t -> Delta(prefix, t) reduced mod p^2, by Newton interpolation
// at t = 0, ..., D.
std::vector<Elt> restriction(const Setup& s, numfield::InvariantPoint point) {
  const int D = s.last_degree;
  std::vector<RingInt> diff(D + 1);
  for (int t = 0; t <= D; ++t) {
    point.back() = RingInt(t);
    diff[t] = s.disc.evaluate(s.ctx, point);
  }
  for (int k = 1; k <= D; ++k)
    for (int t = D; t >= k; --t) diff[t] = diff[t] - diff[t - 1];
  // sum_k diff[k] / k! * t (t-1) ... (t-k+1)
  std::vector<RingInt> coeff(D + 1);
  std::vector<Int> falling{1};
  Int fact = 1;
  for (int k = 0; k <= D; ++k) {
    if (k > 0) {
      fact *= k;
      std::vector<Int> next(falling.size() + 1, 0);
      for (std::size_t i = 0; i < falling.size(); ++i) {
        next[i + 1] += falling[i];
        next[i] -= Int(k - 1) * falling[i];
      }
      falling = std::move(next);
    }
    RingInt scaled = s.ctx.divexact(diff[k], RingInt(fact));
    for (std::size_t i = 0; i < falling.size(); ++i) coeff[i] += falling[i] * scaled;
  }
  std::vector<Elt> out;
  out.reserve(coeff.size());
  for (const RingInt& c : coeff) out.push_back(s.square.reduce(c));
  return out;
}

Elt horner(const ResidueRing& R, const std::vector<Elt>& g, const Elt& t) {
  Elt v = R.zero();
  for (std::size_t i = g.size(); i-- > 0;) v = R.add(R.mul(v, t), g[i]);
  return v;
}

std::vector<Elt> derivative(const ResidueRing& R, const std::vector<Elt>& g) {
  std::vector<Elt> d;
  for (std::size_t i = 1; i < g.size(); ++i) d.push_back(R.scale(static_cast<std::int64_t>(i), g[i]));
  return d;
}

bool in_prime(const Setup& s, const Elt& x) { return s.field.is_zero(s.field.reduce(s.square.lift(x))); }

u128 nonzero_enumerate(const Setup& s, const std::vector<Elt>& g) {
  const ResidueRing& R = s.square;
  const std::uint64_t q = R.size();
  if (s.ctx.degree() == 1 && g.size() <= 3 && q < (1ULL << 31)) {
    auto coef = [&](std::size_t i) { return i < g.size() ? static_cast<std::uint32_t>(g[i].a) : 0u; };
    return kernels::count_quadratic_nonzero(static_cast<std::uint32_t>(q), coef(0), coef(1), coef(2), q);
  }
  u128 count = 0;
  for (std::uint64_t i = 0; i < q; ++i) count += !R.is_zero(horner(R, g, R.element(i)));
  return count;
}

// Roots mod p lift to p^2 as follows: simple roots lift uniquely, multiple
// roots lift to all N p residues or to none.
u128 nonzero_accelerated(const Setup& s, const std::vector<Elt>& g, const std::vector<Elt>& reps,
                         std::uint64_t norm) {
  const ResidueRing& R = s.square;
  std::vector<Elt> dg = derivative(R, g);
  u128 zeros = 0;
  for (const Elt& t0 : reps) {
    Elt v = horner(R, g, t0);
    if (!in_prime(s, v)) continue;
    if (!in_prime(s, horner(R, dg, t0)))
      zeros += 1;
    else if (R.is_zero(v))
      zeros += norm;
  }
  return static_cast<u128>(R.size()) - zeros;
}

Int to_int(u128 x) {
  Int hi(static_cast<unsigned long>(x >> 64));
  return (hi << 64) + Int(static_cast<unsigned long>(static_cast<std::uint64_t>(x)));
}

}  // namespace

LocalDensity local_density(const FieldContext& ctx, const CurveFamily& fam, const PrimeIdeal& p,
                           const DensityOptions& opt) {
  Setup s(ctx, fam, p);
  const std::uint64_t q = s.square.size();
  const int r = s.rank;

  long double total_f = std::pow(static_cast<long double>(q), r);
  Method method = opt.method;
  if (method == Method::Auto)
    method = total_f <= static_cast<long double>(opt.enumerate_limit) ? Method::Enumerate : Method::Accelerated;
  if (method == Method::Enumerate && total_f > static_cast<long double>(opt.enumerate_budget))
    throw BudgetExceeded("enumeration of (O/p^2)^" + std::to_string(r) + " exceeds budget");
  long double prefixes_f = std::pow(static_cast<long double>(q), r - 1);
  if (prefixes_f > static_cast<long double>(1ULL << 32))
    throw BudgetExceeded("too many coordinate prefixes mod p^2");
  const std::uint64_t prefixes = static_cast<std::uint64_t>(prefixes_f);

  std::vector<Elt> reps;
  for (std::uint64_t i = 0; i < s.field.size(); ++i) reps.push_back(s.square.reduce(s.field.lift(s.field.element(i))));

  int workers = std::max(1, opt.workers);
  std::vector<u128> partial(workers, 0);
  auto work = [&](int w) {
    numfield::InvariantPoint point(r);
    for (std::uint64_t k = static_cast<std::uint64_t>(w); k < prefixes; k += static_cast<std::uint64_t>(workers)) {
      std::uint64_t idx = k;
      for (int i = 0; i + 1 < r; ++i) {
        point[i] = s.square.lift(s.square.element(idx % q));
        idx /= q;
      }
      std::vector<Elt> g = restriction(s, point);
      partial[w] += method == Method::Enumerate ? nonzero_enumerate(s, g)
                                                : nonzero_accelerated(s, g, reps, p.norm);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  u128 nonzero = 0;
  for (u128 x : partial) nonzero += x;

  LocalDensity out;
  out.prime = p;
  out.nonzero_count = to_int(nonzero);
  Int qz(static_cast<unsigned long>(q));
  mpz_pow_ui(out.total_count.get_mpz_t(), qz.get_mpz_t(), static_cast<unsigned long>(r));
  out.rho = Rat(out.nonzero_count, out.total_count);
  out.rho.canonicalize();
  return out;
}

double prime_square_tail(const FieldContext& ctx, std::uint64_t P) {
  const std::uint64_t L = std::max<std::uint64_t>(P, 1) * 64 + 1024;
  double sum = 0.0;
  for (const PrimeIdeal& p : ctx.primes_up_to(L))
    if (p.norm > P) sum += 1.0 / (static_cast<double>(p.norm) * static_cast<double>(p.norm));
  // At most [F:Q] prime ideals share a norm, so integers bound the rest.
  return sum + static_cast<double>(ctx.degree()) / static_cast<double>(L);
}

EulerProduct euler_product(const FieldContext& ctx, const CurveFamily& fam, std::uint64_t P,
                           const DensityOptions& opt) {
  EulerProduct e;
  e.truncation_bound = P;
  for (const PrimeIdeal& p : ctx.primes_up_to(P)) {
    LocalDensity d = local_density(ctx, fam, p, opt);
    e.exact *= d.rho;
    Rat n2(static_cast<unsigned long>(p.norm));
    n2 *= n2;
    e.tail_constant = std::max(e.tail_constant, Rat((1 - d.rho) * n2).get_d());
    e.factors.push_back(std::move(d));
  }
  e.exact.canonicalize();
  e.value = e.exact.get_d();
  e.tail_halfwidth = e.value * e.tail_constant * prime_square_tail(ctx, P);
  return e;
}

nlohmann::json to_json(const FieldContext& ctx, const LocalDensity& d) {
  return {{"prime", ctx.format(d.prime.generator)},
          {"norm", d.prime.norm},
          {"rho", to_string(d.rho)},
          {"rho_num", to_string(d.rho.get_num())},
          {"rho_den", to_string(d.rho.get_den())},
          {"nonzero_count", to_string(d.nonzero_count)},
          {"total_count", to_string(d.total_count)}};
}

nlohmann::json to_json(const FieldContext& ctx, const EulerProduct& e) {
  nlohmann::json primes = nlohmann::json::array();
  for (const auto& d : e.factors) primes.push_back(to_json(ctx, d));
  return {{"truncation_bound", e.truncation_bound},
          {"product", e.value},
          {"product_exact", to_string(e.exact)},
          {"tail", {{"halfwidth", e.tail_halfwidth}, {"constant", e.tail_constant}, {"kind", "heuristic"}}},
          {"primes", primes}};
}

}  // namespace ade::localdens
