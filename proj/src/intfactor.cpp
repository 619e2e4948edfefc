#include "ade/intfactor.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "ade/errors.hpp"

namespace ade {

std::vector<std::uint32_t> small_primes(std::uint32_t bound) {
  std::vector<std::uint32_t> out;
  if (bound < 2) return out;
  std::vector<bool> comp(bound + 1, false);
  for (std::uint64_t i = 2; i <= bound; ++i) {
    if (comp[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= bound; j += i) comp[j] = true;
  }
  return out;
}

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

u64 pollard_brent(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    u64 r = 1;
    const u64 m = 128;
    auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split(u64 n, std::map<u64, int>& acc) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    ++acc[n];
    return;
  }
  u64 d = pollard_brent(n);
  split(d, acc);
  split(n / d, acc);
}

}  // namespace

std::uint64_t isqrt_u64(std::uint64_t n) {
  u64 r = static_cast<u64>(__builtin_sqrtl(static_cast<long double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    u64 x = powmod(a % n, d, n);
    if (a % n == 0 || x == 1 || x == n - 1) continue;
    bool comp = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        comp = false;
        break;
      }
    }
    if (comp) return false;
  }
  return true;
}

std::vector<std::pair<std::uint64_t, int>> factor_u64(std::uint64_t n) {
  std::map<u64, int> acc;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}) {
    while (n % p == 0) {
      ++acc[p];
      n /= p;
    }
  }
  split(n, acc);
  return {acc.begin(), acc.end()};
}

std::vector<std::pair<Int, int>> factor_int(const Int& n_in, const IntFactorOptions& opt) {
  if (n_in == 0) throw Error("cannot factor zero");
  Int n = abs(n_in);
  std::map<Int, int> acc;
  static const std::vector<std::uint32_t> table = small_primes(1u << 20);
  for (std::uint32_t p : table) {
    if (p > opt.trial_bound) break;
    if (Int(p) * p > n) break;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      int e = 0;
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
        mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        ++e;
      }
      acc[Int(p)] += e;
    }
  }
  if (n > 1) {
    if (n < opt.budget && n.fits_ulong_p()) {
      for (auto [p, e] : factor_u64(n.get_ui())) acc[Int(static_cast<unsigned long>(p))] += e;
    } else if (mpz_probab_prime_p(n.get_mpz_t(), 40) > 0) {
      acc[n] += 1;
    } else {
      bool done = false;
      for (unsigned k = 2; k < 64 && !done; ++k) {
        Int root;
        if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0 &&
            mpz_probab_prime_p(root.get_mpz_t(), 40) > 0) {
          acc[root] += static_cast<int>(k);
          done = true;
        }
      }
      if (!done) throw FactorBudgetExceeded("composite cofactor " + n.get_str() + " above budget");
    }
  }
  return {acc.begin(), acc.end()};
}

}  // namespace ade
