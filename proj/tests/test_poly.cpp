#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "ade/poly.hpp"

using namespace ade;
using namespace ade::poly;

namespace {

Poly random_poly(std::mt19937_64& rng, int deg, bool gaussian, int range = 9) {
  std::uniform_int_distribution<long> c(-range, range);
  Poly p;
  for (int i = 0; i <= deg; ++i) p.push_back(RingInt(Int(c(rng)), gaussian ? Int(c(rng)) : Int(0)));
  if (p.back().is_zero()) p.back() = RingInt(1);
  return p;
}

// Bareiss fraction-free determinant of the Sylvester matrix over Z.
Int sylvester_resultant(const Poly& a, const Poly& b) {
  const int m = degree(a), n = degree(b);
  const int N = m + n;
  std::vector<std::vector<Int>> s(N, std::vector<Int>(N, 0));
  for (int r = 0; r < n; ++r)
    for (int j = 0; j <= m; ++j) s[r][r + j] = a[m - j].a;
  for (int r = 0; r < m; ++r)
    for (int j = 0; j <= n; ++j) s[n + r][r + j] = b[n - j].a;
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k + 1 < N; ++k) {
    if (s[k][k] == 0) {
      int r = k + 1;
      while (r < N && s[r][k] == 0) ++r;
      if (r == N) return 0;
      std::swap(s[k], s[r]);
      sign = -sign;
    }
    for (int i = k + 1; i < N; ++i)
      for (int j = k + 1; j < N; ++j) s[i][j] = (s[i][j] * s[k][k] - s[i][k] * s[k][j]) / prev;
    prev = s[k][k];
  }
  return sign * s[N - 1][N - 1];
}

}  // namespace

TEST_CASE("basic arithmetic") {
  auto Q = FieldContext::rationals();
  Poly f{RingInt(4), RingInt(-2), RingInt(0), RingInt(1)};
  CHECK(degree(f) == 3);
  CHECK(degree(Poly{}) == -1);
  Poly z{RingInt(0), RingInt(0)};
  trim(z);
  CHECK(z.empty());
  CHECK(eval(Q, f, RingInt(2)) == RingInt(8));
  CHECK(derivative(f) == Poly{RingInt(-2), RingInt(0), RingInt(3)});
  CHECK(sub(add(f, f), f) == f);
}

TEST_CASE("shift evaluates at x + l") {
  std::mt19937_64 rng(1);
  for (const char* tag : {"Q", "Q(i)"}) {
    auto ctx = FieldContext::parse(tag);
    for (int i = 0; i < 100; ++i) {
      Poly f = random_poly(rng, 1 + static_cast<int>(rng() % 6), ctx.degree() == 2);
      RingInt l(Int(static_cast<long>(rng() % 21) - 10), ctx.degree() == 2 ? Int(static_cast<long>(rng() % 21) - 10) : Int(0));
      Poly g = shift(ctx, f, l);
      for (long x = -3; x <= 3; ++x) CHECK(eval(ctx, g, RingInt(x)) == eval(ctx, f, RingInt(x) + l));
    }
  }
}

TEST_CASE("resultant equals the Sylvester determinant") {
  auto Q = FieldContext::rationals();
  std::mt19937_64 rng(2);
  for (int i = 0; i < 300; ++i) {
    Poly a = random_poly(rng, 1 + static_cast<int>(rng() % 7), false);
    Poly b = random_poly(rng, 1 + static_cast<int>(rng() % 7), false);
    CHECK(resultant(Q, a, b) == RingInt(sylvester_resultant(a, b)));
  }
  // Common root gives zero.
  Poly a = mul(Q, Poly{RingInt(-3), RingInt(1)}, Poly{RingInt(5), RingInt(2), RingInt(1)});
  Poly b = mul(Q, Poly{RingInt(-3), RingInt(1)}, Poly{RingInt(1), RingInt(1)});
  CHECK(resultant(Q, a, b).is_zero());
}

TEST_CASE("resultant is multiplicative over Q(i)") {
  auto G = FieldContext::parse("Q(i)");
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    Poly f = random_poly(rng, 1 + static_cast<int>(rng() % 4), true, 5);
    Poly g = random_poly(rng, 1 + static_cast<int>(rng() % 4), true, 5);
    Poly h = random_poly(rng, 1 + static_cast<int>(rng() % 4), true, 5);
    CHECK(resultant(G, f, mul(G, g, h)) == G.mul(resultant(G, f, g), resultant(G, f, h)));
  }
}

TEST_CASE("discriminants") {
  auto Q = FieldContext::rationals();
  CHECK(discriminant(Q, Poly{RingInt(1), RingInt(0), RingInt(0), RingInt(0), RingInt(1)}) == RingInt(256));
  CHECK(discriminant(Q, Poly{RingInt(4), RingInt(-2), RingInt(0), RingInt(1)}) == RingInt(-400));
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    long b = static_cast<long>(rng() % 41) - 20, c = static_cast<long>(rng() % 41) - 20;
    CHECK(discriminant(Q, Poly{RingInt(c), RingInt(b), RingInt(1)}) == RingInt(b * b - 4 * c));
  }
  // disc(fg) = disc(f) disc(g) Res(f, g)^2 for monic f, g.
  for (const char* tag : {"Q", "Q(i)"}) {
    auto ctx = FieldContext::parse(tag);
    for (int i = 0; i < 100; ++i) {
      Poly f = random_poly(rng, 1 + static_cast<int>(rng() % 4), ctx.degree() == 2, 6);
      Poly g = random_poly(rng, 1 + static_cast<int>(rng() % 4), ctx.degree() == 2, 6);
      f.back() = RingInt(1);
      g.back() = RingInt(1);
      RingInt r = resultant(ctx, f, g);
      CHECK(discriminant(ctx, mul(ctx, f, g)) ==
            ctx.mul(ctx.mul(discriminant(ctx, f), discriminant(ctx, g)), ctx.mul(r, r)));
    }
  }
}

TEST_CASE("pseudo remainder") {
  auto Q = FieldContext::rationals();
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    Poly a = random_poly(rng, 3 + static_cast<int>(rng() % 4), false);
    Poly b = random_poly(rng, 1 + static_cast<int>(rng() % 3), false);
    Poly r = pseudo_remainder(Q, a, b);
    CHECK(degree(r) < degree(b));
    // Any common root of a and b is a root of r: check with b = (x - t) h.
    long t = static_cast<long>(rng() % 7) - 3;
    Poly lin{RingInt(-t), RingInt(1)};
    Poly a2 = mul(Q, lin, a), b2 = mul(Q, lin, b);
    CHECK(eval(Q, pseudo_remainder(Q, a2, b2), RingInt(t)).is_zero());
  }
}
