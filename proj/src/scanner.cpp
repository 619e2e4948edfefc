#include "ade/scanner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <thread>

#include "ade/errors.hpp"
#include "ade/kernels/quadratic.hpp"
#include "ade/residue.hpp"

namespace ade::scanner {

using ade::to_string;
using numfield::ResidueRing;
using rootsys::Kind;

std::string to_string(DivisibilityClass c) {
  switch (c) {
    case DivisibilityClass::NotDivisible: return "NotDivisible";
    case DivisibilityClass::Weak: return "Weak";
    case DivisibilityClass::Strong: return "Strong";
  }
  return "?";
}

Int box_bound(const Rat& X, int d) {
  if (X <= 0) return -1;
  Int num, den;
  mpz_pow_ui(num.get_mpz_t(), X.get_num_mpz_t(), static_cast<unsigned long>(d));
  mpz_pow_ui(den.get_mpz_t(), X.get_den_mpz_t(), static_cast<unsigned long>(d));
  Int q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return r == 0 ? Int(q - 1) : q;
}

namespace {

Rat power(const Rat& X, int d) {
  Rat out;
  mpz_pow_ui(mpq_numref(out.get_mpq_t()), X.get_num_mpz_t(), static_cast<unsigned long>(d));
  mpz_pow_ui(mpq_denref(out.get_mpq_t()), X.get_den_mpz_t(), static_cast<unsigned long>(d));
  return out;
}

std::vector<std::vector<RingInt>> coordinate_boxes(const FieldContext& ctx, const CurveFamily& fam,
                                                   const Rat& X) {
  std::vector<std::vector<RingInt>> boxes;
  for (int d : fam.degrees) boxes.push_back(X > 0 ? ctx.elements_with_abs_below(power(X, d))
                                                  : std::vector<RingInt>{});
  return boxes;
}

// Visits the tail coordinates 1..r-1 for a fixed first coordinate.
template <class F>
void odometer(const std::vector<std::vector<RingInt>>& boxes, InvariantPoint& b, F&& f) {
  const std::size_t r = boxes.size();
  for (std::size_t i = 1; i < r; ++i)
    if (boxes[i].empty()) return;
  std::vector<std::size_t> idx(r, 0);
  for (std::size_t i = 1; i < r; ++i) b[i] = boxes[i][0];
  for (;;) {
    f(b);
    std::size_t i = r - 1;
    while (i >= 1) {
      if (++idx[i] < boxes[i].size()) {
        b[i] = boxes[i][idx[i]];
        break;
      }
      idx[i] = 0;
      b[i] = boxes[i][0];
      --i;
    }
    if (i == 0) return;
  }
}

bool is_a2_over_q(const FieldContext& ctx, const CurveFamily& fam) {
  return ctx.degree() == 1 && fam.type.kind == Kind::A && fam.type.rank == 2;
}

std::vector<RingInt> residue_reps(const FieldContext& ctx, const PrimeIdeal& p) {
  ResidueRing R(ctx, p.generator);
  std::vector<RingInt> out;
  for (std::uint64_t i = 0; i < R.size(); ++i) out.push_back(R.lift(R.element(i)));
  return out;
}

DivisibilityClass gradient_class(const FieldContext& ctx, const std::vector<RingInt>& grad,
                                 const PrimeIdeal& p) {
  for (const RingInt& g : grad)
    if (!ctx.divides(p.generator, g)) return DivisibilityClass::Weak;
  return DivisibilityClass::Strong;
}

// Closed-form A2 checks over Z.
__int128 a2_disc(__int128 p2, __int128 p3) { return -4 * p2 * p2 * p2 - 27 * p3 * p3; }

DivisibilityClass a2_gradient_class(std::int64_t p2, std::int64_t p3, std::uint64_t q) {
  __int128 g2 = -12 * static_cast<__int128>(p2) * p2;
  __int128 g3 = -54 * static_cast<__int128>(p3);
  __int128 Q = static_cast<__int128>(q);
  return g2 % Q == 0 && g3 % Q == 0 ? DivisibilityClass::Strong : DivisibilityClass::Weak;
}

DivisibilityClass a2_bruteforce_class(std::int64_t p2, std::int64_t p3, std::uint64_t q) {
  __int128 Q = static_cast<__int128>(q), Q2 = Q * Q;
  if (a2_disc(p2, p3) % Q2 != 0) return DivisibilityClass::NotDivisible;
  for (__int128 c2 = 0; c2 < Q; ++c2)
    for (__int128 c3 = 0; c3 < Q; ++c3)
      if (a2_disc(p2 + Q * c2, p3 + Q * c3) % Q2 != 0) return DivisibilityClass::Weak;
  return DivisibilityClass::Strong;
}

struct Hit {
  int small_index;  // -1 for primes above the bound
  std::uint64_t norm;
  std::uint64_t p;
  DivisibilityClass cls;
};

class Accumulator {
 public:
  Accumulator(std::size_t n_small, const std::vector<double>& M, const std::set<std::uint64_t>& excluded,
              double sieve_M)
      : excluded_(&excluded), weak_(n_small, 0), strong_(n_small, 0),
        tail_(M.size()) {
    for (std::size_t i = 0; i < M.size(); ++i) tail_[i].M = M[i];
    sieve_.M = sieve_M;
  }

  void add_zero_disc() {
    ++total_;
    ++zero_;
  }

  void add(bool squarefree, bool uncertain, const std::vector<Hit>& hits) {
    ++total_;
    ++nonzero_;
    if (squarefree) ++squarefree_;
    if (uncertain) ++uncertain_;
    double sp = 1, wp = 1, wx = 1;
    for (const Hit& h : hits) {
      bool strong = h.cls == DivisibilityClass::Strong;
      if (h.small_index >= 0)
        (strong ? strong_ : weak_)[static_cast<std::size_t>(h.small_index)]++;
      else
        ++(strong ? large_strong_ : large_weak_);
      double n = static_cast<double>(h.norm);
      if (strong) {
        sp *= n;
      } else {
        wp *= n;
        if (!excluded_->count(h.p)) wx *= n;
      }
    }
    auto bump = [&](TailRow& row) {
      if (sp > row.M) ++row.strong;
      if (wp > row.M) ++row.weak;
      if (wx > row.M) ++row.weak_excluded;
    };
    for (TailRow& row : tail_) bump(row);
    bump(sieve_);
  }

  void brute(bool agree) {
    ++brute_checked_;
    if (!agree) ++brute_disagreements_;
  }

  void merge(const Accumulator& o) {
    total_ += o.total_;
    zero_ += o.zero_;
    nonzero_ += o.nonzero_;
    squarefree_ += o.squarefree_;
    uncertain_ += o.uncertain_;
    large_weak_ += o.large_weak_;
    large_strong_ += o.large_strong_;
    brute_checked_ += o.brute_checked_;
    brute_disagreements_ += o.brute_disagreements_;
    for (std::size_t i = 0; i < weak_.size(); ++i) {
      weak_[i] += o.weak_[i];
      strong_[i] += o.strong_[i];
    }
    auto add_row = [](TailRow& a, const TailRow& b) {
      a.strong += b.strong;
      a.weak += b.weak;
      a.weak_excluded += b.weak_excluded;
    };
    for (std::size_t i = 0; i < tail_.size(); ++i) add_row(tail_[i], o.tail_[i]);
    add_row(sieve_, o.sieve_);
  }

  void finish(ScanReport& r, const std::vector<PrimeIdeal>& small) const {
    r.total = total_;
    r.zero_discriminant = zero_;
    r.squarefree_count = squarefree_;
    r.uncertain = uncertain_;
    if (total_ > 0) {
      r.empirical_density = static_cast<double>(squarefree_) / static_cast<double>(total_);
      r.band = static_cast<double>(uncertain_) / static_cast<double>(total_);
    }
    r.tallies.clear();
    for (std::size_t i = 0; i < small.size(); ++i)
      r.tallies.push_back({small[i], nonzero_ - weak_[i] - strong_[i], weak_[i], strong_[i]});
    r.large_weak = large_weak_;
    r.large_strong = large_strong_;
    r.tail = tail_;
    r.sieve_tail = sieve_;
    r.brute_checked = brute_checked_;
    r.brute_disagreements = brute_disagreements_;
  }

 private:
  const std::set<std::uint64_t>* excluded_;
  std::uint64_t total_ = 0, zero_ = 0, nonzero_ = 0, squarefree_ = 0, uncertain_ = 0;
  std::uint64_t large_weak_ = 0, large_strong_ = 0;
  std::uint64_t brute_checked_ = 0, brute_disagreements_ = 0;
  std::vector<std::uint64_t> weak_, strong_;
  std::vector<TailRow> tail_;
  TailRow sieve_;
};

struct ScanContext {
  const FieldContext& ctx;
  const CurveFamily& fam;
  const ScanOptions& opt;
  std::vector<PrimeIdeal> small;
  std::map<PrimeIdeal, int> small_index;
  std::set<std::uint64_t> excluded;
  std::vector<double> M;
  double sieve_M;
};

template <class Work>
void run_workers(int workers, std::size_t jobs, Work&& work) {
  workers = std::max(1, std::min<int>(workers, static_cast<int>(std::max<std::size_t>(jobs, 1))));
  if (workers == 1) {
    for (std::size_t j = 0; j < jobs; ++j) work(0, j);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t j = static_cast<std::size_t>(w); j < jobs; j += static_cast<std::size_t>(workers)) work(w, j);
    });
  for (auto& t : pool) t.join();
}

PointRecord process_generic(const ScanContext& sc, const curvefam::DiscriminantPolynomial& disc,
                            const InvariantPoint& b, Accumulator& acc) {
  const FieldContext& ctx = sc.ctx;
  PointRecord rec;
  rec.b = b;
  RingInt D = disc.evaluate(ctx, b);
  rec.disc = D;
  if (D.is_zero()) {
    acc.add_zero_disc();
    return rec;
  }
  std::vector<std::pair<PrimeIdeal, int>> squares;
  bool uncertain = false;
  try {
    for (auto& [P, e] : numfield::factor(ctx, D, sc.opt.factor_options))
      if (e >= 2) squares.emplace_back(P, e);
  } catch (const FactorBudgetExceeded&) {
    for (const PrimeIdeal& P : sc.small) {
      int v = ctx.valuation(P, D);
      if (v >= 2) squares.emplace_back(P, v);
    }
    uncertain = squares.empty();
  }
  std::vector<Hit> hits;
  std::vector<RingInt> grad;
  if (!squares.empty()) grad = disc.gradient(ctx, b);
  for (auto& [P, e] : squares) {
    DivisibilityClass cls = gradient_class(ctx, grad, P);
    if (P.norm <= sc.opt.brute_force_norm)
      acc.brute(classify_bruteforce(ctx, sc.fam, b, P) == cls);
    auto it = sc.small_index.find(P);
    hits.push_back({it == sc.small_index.end() ? -1 : it->second, P.norm, P.p, cls});
    rec.hits.push_back({P.generator, P.norm, P.p, e, cls});
  }
  rec.squarefree = squares.empty() && !uncertain;
  rec.uncertain = uncertain;
  acc.add(rec.squarefree, uncertain, hits);
  return rec;
}

void scan_generic(const ScanContext& sc, const Rat& X, std::vector<Accumulator>& accs,
                  std::vector<std::vector<PointRecord>>& rows) {
  auto boxes = coordinate_boxes(sc.ctx, sc.fam, X);
  if (boxes.empty() || boxes[0].empty()) return;
  curvefam::DiscriminantPolynomial disc(sc.fam);
  const std::vector<int>& deg = sc.fam.degrees;
  if (sc.opt.dump_points) rows.resize(boxes[0].size());
  run_workers(static_cast<int>(accs.size()), boxes[0].size(), [&](int w, std::size_t j) {
    InvariantPoint b(deg.size());
    b[0] = boxes[0][j];
    odometer(boxes, b, [&](const InvariantPoint& pt) {
      if (numfield::is_zero_point(pt) || !numfield::in_sigma(sc.ctx, deg, pt)) return;
      PointRecord rec = process_generic(sc, disc, pt, accs[static_cast<std::size_t>(w)]);
      if (sc.opt.dump_points) rows[j].push_back(std::move(rec));
    });
  });
}

// A2 over Q: Delta = -4 p2^3 - 27 p3^2 in machine integers, one row per p2.
// Sigma is p3 <= 0 (unit canonical) with no p such that p^2 | p2 and p^3 | p3.
void scan_a2_q(const ScanContext& sc, std::int64_t B2, std::int64_t B3, std::vector<Accumulator>& accs,
               std::vector<std::vector<PointRecord>>& rows) {
  if (B2 < 0 || B3 < 0) return;
  const std::size_t n_rows = static_cast<std::size_t>(2 * B2 + 1);
  const std::size_t L = static_cast<std::size_t>(B3 + 1);
  if (sc.opt.dump_points) rows.resize(n_rows);
  std::vector<std::uint64_t> small_p;
  for (const PrimeIdeal& P : sc.small) small_p.push_back(P.p);

  run_workers(static_cast<int>(accs.size()), n_rows, [&](int w, std::size_t j) {
    Accumulator& acc = accs[static_cast<std::size_t>(w)];
    const std::int64_t p2 = -B2 + static_cast<std::int64_t>(j);
    std::vector<std::uint64_t> square_primes;
    if (p2 != 0)
      for (auto [q, e] : factor_u64(static_cast<std::uint64_t>(p2 < 0 ? -p2 : p2)))
        if (e >= 2) square_primes.push_back(q);

    std::vector<std::uint8_t> in_sigma(L, 0);
    std::vector<std::uint64_t> cof(L, 0);
    for (std::size_t i = 0; i < L; ++i) {
      std::int64_t p3 = static_cast<std::int64_t>(i) - B3;
      bool prim = true;
      if (p2 == 0) {
        if (p3 == 0) continue;
        for (auto [q, e] : factor_u64(static_cast<std::uint64_t>(-p3)))
          if (e >= 3) prim = false;
      } else {
        for (std::uint64_t q : square_primes)
          if (p3 % static_cast<std::int64_t>(q * q * q) == 0) prim = false;
      }
      if (!prim) continue;
      in_sigma[i] = 1;
      __int128 D = a2_disc(p2, p3);
      cof[i] = static_cast<std::uint64_t>(D < 0 ? -D : D);
    }

    std::vector<std::vector<Hit>> hits(L);
    std::vector<std::vector<int>> vals(L);
    std::vector<std::uint8_t> mark(L);
    // Delta(i) = (-4 p2^3 - 27 B3^2) + 54 B3 i - 27 i^2 with p3 = i - B3.
    const __int128 A = -4 * static_cast<__int128>(p2) * p2 * p2 - 27 * static_cast<__int128>(B3) * B3;
    const __int128 Bc = 54 * static_cast<__int128>(B3);
    for (std::size_t k = 0; k < small_p.size(); ++k) {
      const std::uint64_t q = small_p[k];
      auto red = [q](__int128 x) {
        __int128 m = x % static_cast<__int128>(q);
        return static_cast<std::uint32_t>(m < 0 ? m + static_cast<__int128>(q) : m);
      };
      kernels::mark_quadratic_zeros(static_cast<std::uint32_t>(q), red(A), red(Bc), red(-27), L, mark.data());
      for (std::size_t i = 0; i < L; ++i) {
        if (!mark[i] || !in_sigma[i] || cof[i] == 0) continue;
        int v = 0;
        while (cof[i] % q == 0) {
          cof[i] /= q;
          ++v;
        }
        if (v >= 2) {
          hits[i].push_back({static_cast<int>(k), q, q, DivisibilityClass::NotDivisible});
          vals[i].push_back(v);
        }
      }
    }

    for (std::size_t i = 0; i < L; ++i) {
      if (!in_sigma[i]) continue;
      std::int64_t p3 = static_cast<std::int64_t>(i) - B3;
      if (cof[i] == 0) {
        acc.add_zero_disc();
        if (sc.opt.dump_points) rows[j].push_back({{RingInt(p2), RingInt(p3)}, RingInt(0), false, false, {}});
        continue;
      }
      std::uint64_t m = cof[i];
      if (m > 1 && !is_prime_u64(m)) {
        for (auto [q, e] : factor_u64(m)) {
          if (e >= 2) {
            hits[i].push_back({-1, q, q, DivisibilityClass::NotDivisible});
            vals[i].push_back(e);
          }
        }
      }
      for (Hit& h : hits[i]) {
        h.cls = a2_gradient_class(p2, p3, h.p);
        if (h.norm <= sc.opt.brute_force_norm) acc.brute(a2_bruteforce_class(p2, p3, h.p) == h.cls);
      }
      bool sf = hits[i].empty();
      acc.add(sf, false, hits[i]);
      if (sc.opt.dump_points) {
        PointRecord rec{{RingInt(p2), RingInt(p3)}, RingInt(from_i128(a2_disc(p2, p3))), sf, false, {}};
        for (std::size_t h = 0; h < hits[i].size(); ++h) {
          const Hit& x = hits[i][h];
          rec.hits.push_back({RingInt(Int(static_cast<unsigned long>(x.p))), x.norm, x.p, vals[i][h], x.cls});
        }
        std::sort(rec.hits.begin(), rec.hits.end(),
                  [](const PrimeHit& a, const PrimeHit& b) { return a.norm < b.norm; });
        rows[j].push_back(std::move(rec));
      }
    }
  });
}

}  // namespace

void enumerate_sigma(const FieldContext& ctx, const CurveFamily& fam, const Rat& X,
                     const std::function<void(const InvariantPoint&)>& visit) {
  auto boxes = coordinate_boxes(ctx, fam, X);
  if (boxes.empty() || boxes[0].empty()) return;
  InvariantPoint b(boxes.size());
  for (const RingInt& first : boxes[0]) {
    b[0] = first;
    odometer(boxes, b, [&](const InvariantPoint& pt) {
      if (!numfield::is_zero_point(pt) && numfield::in_sigma(ctx, fam.degrees, pt)) visit(pt);
    });
  }
}

std::vector<InvariantPoint> sigma_points(const FieldContext& ctx, const CurveFamily& fam, const Rat& X) {
  std::vector<InvariantPoint> out;
  enumerate_sigma(ctx, fam, X, [&](const InvariantPoint& b) { out.push_back(b); });
  return out;
}

namespace {

std::vector<int> mobius_table(std::uint64_t n) {
  std::vector<int> mu(n + 1, 1);
  std::vector<bool> composite(n + 1, false);
  for (std::uint64_t p = 2; p <= n; ++p) {
    if (composite[p]) continue;
    for (std::uint64_t k = p; k <= n; k += p) {
      if (k > p) composite[k] = true;
      mu[k] = -mu[k];
    }
    for (std::uint64_t k = p * p; k <= n; k += p * p) mu[k] = 0;
  }
  return mu;
}

Int ipow(const Int& b, int e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}

// #{1 <= t <= B : t is k-th power free}
Int power_free_count(const Int& B, int k) {
  if (B < 1) return 0;
  Int root;
  mpz_root(root.get_mpz_t(), B.get_mpz_t(), static_cast<unsigned long>(k));
  std::vector<int> mu = mobius_table(root.get_ui());
  Int total = 0;
  for (std::uint64_t n = 1; n < mu.size(); ++n) {
    if (mu[n] == 0) continue;
    Int q = B / ipow(Int(static_cast<unsigned long>(n)), k);
    total += mu[n] > 0 ? q : Int(-q);
  }
  return total;
}

Int multiples_in(const Int& lo, const Int& hi, const Int& m) {
  if (hi < lo) return 0;
  Int a, b;
  mpz_fdiv_q(a.get_mpz_t(), hi.get_mpz_t(), m.get_mpz_t());
  Int lo1 = lo - 1;
  mpz_fdiv_q(b.get_mpz_t(), lo1.get_mpz_t(), m.get_mpz_t());
  return a - b;
}

std::uint64_t count_sigma_q(const CurveFamily& fam, const Rat& X) {
  const std::vector<int>& deg = fam.degrees;
  const std::size_t r = deg.size();
  std::vector<Int> bound;
  for (int d : deg) bound.push_back(box_bound(X, d));
  for (const Int& b : bound)
    if (b < 0) return 0;
  const Int& Br = bound.back();
  const int dr = deg.back();

  Int total = 0;
  std::vector<Int> pre(r - 1);
  for (std::size_t i = 0; i + 1 < r; ++i) pre[i] = -bound[i];
  for (;;) {
    bool all_zero = true;
    int sign_fixed = 0;
    for (std::size_t i = 0; i + 1 < r; ++i) {
      if (pre[i] == 0) continue;
      all_zero = false;
      if (sign_fixed == 0 && deg[i] % 2 == 1) sign_fixed = pre[i] < 0 ? 1 : -1;
    }
    if (sign_fixed >= 0) {
      // t ranges over [lo, hi]; Sigma needs no p with p^{d_i} | p_i for every nonzero coordinate.
      Int lo = -Br;
      Int hi = sign_fixed == 1 || dr % 2 == 0 ? Br : Int(0);
      if (all_zero) {
        Int one_side = power_free_count(Br, dr);
        total += (dr % 2 == 0) ? Int(2 * one_side) : one_side;
      } else {
        Int g = 0;
        for (std::size_t i = 0; i + 1 < r; ++i) g = gcd(g, pre[i]);
        std::vector<Int> bad;
        for (auto& [q, e] : factor_int(g)) {
          bool all = true;
          for (std::size_t i = 0; i + 1 < r && all; ++i) {
            if (pre[i] == 0) continue;
            all = mpz_divisible_p(pre[i].get_mpz_t(), ipow(q, deg[i]).get_mpz_t()) != 0;
          }
          if (all) bad.push_back(ipow(q, dr));
        }
        for (std::size_t mask = 0; mask < (std::size_t{1} << bad.size()); ++mask) {
          Int m = 1;
          int bits = 0;
          for (std::size_t k = 0; k < bad.size(); ++k)
            if (mask >> k & 1) {
              m *= bad[k];
              ++bits;
            }
          Int c = multiples_in(lo, hi, m);
          total += bits % 2 == 0 ? c : Int(-c);
        }
      }
    }
    std::size_t i = r - 1;
    while (i > 0) {
      --i;
      if (pre[i] < bound[i]) {
        ++pre[i];
        break;
      }
      pre[i] = -bound[i];
      if (i == 0) return total.get_ui();
    }
    if (r == 1) return total.get_ui();
  }
}

}  // namespace

std::uint64_t count_sigma(const FieldContext& ctx, const CurveFamily& fam, const Rat& X) {
  if (ctx.degree() == 1 && fam.rank() >= 2) return count_sigma_q(fam, X);
  std::uint64_t n = 0;
  enumerate_sigma(ctx, fam, X, [&](const InvariantPoint&) { ++n; });
  return n;
}

DivisibilityClass classify(const FieldContext& ctx, const CurveFamily& fam, const InvariantPoint& b,
                           const PrimeIdeal& p) {
  curvefam::DiscriminantPolynomial disc(fam);
  RingInt D = disc.evaluate(ctx, b);
  if (D.is_zero()) throw ZeroDiscriminant();
  if (ctx.valuation(p, D) <= 1) return DivisibilityClass::NotDivisible;
  return gradient_class(ctx, disc.gradient(ctx, b), p);
}

DivisibilityClass classify_bruteforce(const FieldContext& ctx, const CurveFamily& fam,
                                      const InvariantPoint& b, const PrimeIdeal& p) {
  curvefam::DiscriminantPolynomial disc(fam);
  RingInt D = disc.evaluate(ctx, b);
  if (D.is_zero()) throw ZeroDiscriminant();
  const RingInt pi2 = ctx.mul(p.generator, p.generator);
  if (!ctx.divides(pi2, D)) return DivisibilityClass::NotDivisible;
  std::vector<RingInt> reps = residue_reps(ctx, p);
  const std::size_t r = b.size();
  std::vector<std::size_t> idx(r, 0);
  InvariantPoint c(r);
  for (;;) {
    for (std::size_t i = 0; i < r; ++i) c[i] = b[i] + ctx.mul(p.generator, reps[idx[i]]);
    if (!ctx.divides(pi2, disc.evaluate(ctx, c))) return DivisibilityClass::Weak;
    std::size_t i = 0;
    while (i < r && ++idx[i] == reps.size()) idx[i++] = 0;
    if (i == r) break;
  }
  return DivisibilityClass::Strong;
}

std::vector<std::uint64_t> default_excluded_primes(const CurveFamily& fam) {
  if (fam.type.kind != Kind::A) return {};
  std::uint64_t m = static_cast<std::uint64_t>(fam.type.rank);
  std::vector<std::uint64_t> out;
  for (auto [q, e] : factor_u64(m * (m + 1))) out.push_back(q);
  return out;
}

bool loglog_slope(const std::vector<double>& x, const std::vector<double>& y, double& slope) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
    if (x[i] > 0 && y[i] > 0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  if (lx.size() < 2) return false;
  double n = static_cast<double>(lx.size()), sx = 0, sy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
  }
  double mx = sx / n, my = sy / n, sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0) return false;
  slope = sxy / sxx;
  return true;
}

ScanReport scan(const FieldContext& ctx, const CurveFamily& fam, const Rat& X, const ScanOptions& opt) {
  if (fam.type.kind != Kind::A) throw NotImplemented("scanning needs a discriminant evaluator (type A)");
  ScanContext sc{ctx, fam, opt, {}, {}, {}, {}, 0.0};
  sc.small = ctx.primes_up_to(opt.prime_bound);
  for (std::size_t i = 0; i < sc.small.size(); ++i) sc.small_index[sc.small[i]] = static_cast<int>(i);
  std::vector<std::uint64_t> excl = opt.excluded_primes;
  if (opt.use_default_exclusion)
    for (std::uint64_t q : default_excluded_primes(fam)) excl.push_back(q);
  sc.excluded.insert(excl.begin(), excl.end());
  for (std::uint64_t m : opt.M_grid) sc.M.push_back(static_cast<double>(m));
  sc.sieve_M = X > 0 ? std::pow(X.get_d(), 4.0 / (2.0 * opt.kappa + 3.0)) : 0.0;

  ScanReport r;
  r.field = ctx.tag();
  r.type = fam.type.name();
  r.X = X;
  r.prime_bound = opt.prime_bound;
  r.excluded_primes.assign(sc.excluded.begin(), sc.excluded.end());
  r.isa = kernels::to_string(kernels::active_isa());

  const int workers = std::max(1, opt.workers);
  std::vector<Accumulator> accs(static_cast<std::size_t>(workers),
                                Accumulator(sc.small.size(), sc.M, sc.excluded, sc.sieve_M));
  std::vector<std::vector<PointRecord>> rows;

  Int B2 = box_bound(X, 2), B3 = box_bound(X, 3);
  bool fast = opt.allow_fast_path && is_a2_over_q(ctx, fam) && B3 < 100'000'000;
  if (opt.dump_points) {
    Int box = 1;
    for (int d : fam.degrees) box *= 2 * std::max(box_bound(X, d), Int(0)) + 1;
    if (ctx.degree() == 2) box *= box;
    if (box > Int(static_cast<unsigned long>(opt.dump_limit)))
      throw BudgetExceeded("point dump is limited to small X");
  }
  if (fast) {
    r.path = "a2-rows";
    scan_a2_q(sc, to_i64(B2), to_i64(B3), accs, rows);
  } else {
    r.path = "generic";
    scan_generic(sc, X, accs, rows);
  }
  for (std::size_t w = 1; w < accs.size(); ++w) accs[0].merge(accs[w]);
  accs[0].finish(r, sc.small);
  for (auto& row : rows)
    for (auto& rec : row) r.points.push_back(std::move(rec));

  TailDecay td = tail_decay(r);
  r.fitted_exponent = td.exponent;
  r.exponent_defined = td.exponent_defined;
  return r;
}

TailDecay tail_decay(const ScanReport& report) {
  TailDecay t;
  t.rows = report.tail;
  std::vector<double> x, y;
  for (const TailRow& row : t.rows) {
    x.push_back(row.M);
    y.push_back(static_cast<double>(row.combined()));
  }
  t.exponent_defined = loglog_slope(x, y, t.exponent);
  return t;
}

TailDecay tail_decay(const FieldContext& ctx, const CurveFamily& fam, const Rat& X,
                     const std::vector<std::uint64_t>& M_grid, ScanOptions opt) {
  opt.M_grid = M_grid;
  return tail_decay(scan(ctx, fam, X, opt));
}

namespace {

nlohmann::json tail_json(const TailRow& t) {
  return {{"M", t.M},
          {"strong", t.strong},
          {"weak", t.weak},
          {"weak_excluded", t.weak_excluded},
          {"combined", t.combined()}};
}

std::string hits_string(const FieldContext& ctx, const PointRecord& p) {
  std::string s;
  for (const PrimeHit& h : p.hits) {
    if (!s.empty()) s += ';';
    s += ctx.format(h.generator) + "^" + std::to_string(h.valuation) + ":" +
         (h.cls == DivisibilityClass::Strong ? "S" : "W");
  }
  return s;
}

}  // namespace

nlohmann::json to_json(const FieldContext& ctx, const ScanReport& r) {
  nlohmann::json j;
  j["field"] = r.field;
  j["type"] = r.type;
  j["X"] = to_string(r.X);
  j["prime_bound"] = r.prime_bound;
  j["excluded_primes"] = r.excluded_primes;
  j["path"] = r.path;
  j["isa"] = r.isa;
  j["total"] = r.total;
  j["squarefree_count"] = r.squarefree_count;
  j["zero_discriminant"] = r.zero_discriminant;
  j["uncertain"] = r.uncertain;
  if (r.total > 0) {
    j["empirical_density"] = r.empirical_density;
    j["band"] = r.band;
  } else {
    j["empirical_density"] = nullptr;
    j["band"] = nullptr;
  }
  nlohmann::json tallies = nlohmann::json::array();
  for (const PrimeTally& t : r.tallies)
    tallies.push_back({{"prime", ctx.format(t.prime.generator)},
                       {"norm", t.prime.norm},
                       {"not_divisible", t.not_divisible},
                       {"weak", t.weak},
                       {"strong", t.strong}});
  j["tallies"] = tallies;
  j["large_primes"] = {{"weak", r.large_weak}, {"strong", r.large_strong}};
  nlohmann::json tail = nlohmann::json::array();
  for (const TailRow& t : r.tail) tail.push_back(tail_json(t));
  j["tail_counts"] = tail;
  j["sieve_cut"] = tail_json(r.sieve_tail);
  j["tail_exponent"] = r.exponent_defined ? nlohmann::json(r.fitted_exponent) : nlohmann::json(nullptr);
  j["brute_force"] = {{"checked", r.brute_checked}, {"disagreements", r.brute_disagreements}};
  return j;
}

void write_csv(const FieldContext& ctx, const ScanReport& r, std::ostream& os) {
  std::size_t rank = r.points.empty() ? 0 : r.points.front().b.size();
  for (std::size_t i = 0; i < rank; ++i) os << "c" << i << ",";
  os << "disc,squarefree,uncertain,square_primes\n";
  for (const PointRecord& p : r.points) {
    for (const RingInt& x : p.b) os << '"' << ctx.format(x) << "\",";
    os << '"' << ctx.format(p.disc) << "\"," << p.squarefree << "," << p.uncertain << "," << hits_string(ctx, p) << "\n";
  }
}

}  // namespace ade::scanner
