#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "ade/curvefam.hpp"
#include "ade/errors.hpp"

using namespace ade;
using namespace ade::curvefam;

namespace {

DynkinType T(const char* s) { return DynkinType::parse(s); }

InvariantPoint random_point(const FieldContext& ctx, std::mt19937_64& rng, int r, int range) {
  std::uniform_int_distribution<long> c(-range, range);
  InvariantPoint b;
  for (int i = 0; i < r; ++i) b.push_back(RingInt(Int(c(rng)), ctx.degree() == 2 ? Int(c(rng)) : Int(0)));
  return b;
}

// d/dt Delta(b + t e_i) at t = 0 from Newton forward differences at t = 0..D.
Rat derivative_by_interpolation(const FieldContext& ctx, DynkinType t, InvariantPoint b, int i, int D,
                                bool imaginary_part) {
  std::vector<Rat> v;
  for (int k = 0; k <= D; ++k) {
    InvariantPoint x = b;
    x[i] += RingInt(k);
    RingInt d = discriminant_A(ctx, t, x);
    v.push_back(Rat(imaginary_part ? d.b : d.a));
  }
  Rat out = 0;
  for (int k = 1; k <= D; ++k) {
    for (int j = D; j >= k; --j) v[j] -= v[j - 1];
    out += (k % 2 == 1 ? Rat(1) : Rat(-1)) * v[k] / k;
  }
  return out;
}

}  // namespace

TEST_CASE("curve templates") {
  CHECK(family(T("A2")).equation_string() == "y^2 = x^3 + p2*x + p3");
  CHECK(family(T("A3")).equation_string() == "y^2 = x^4 + p2*x^2 + p3*x + p4");
  CHECK(family(T("D5")).equation_string() == "x*y^2 + p5*y = x^4 + p2*x^3 + p4*x^2 + p6*x + p8");
  CHECK(family(T("D4")).equation_string() == "x*y^2 + p4*y = x^3 + p2*x^2 + p4*x + p6");
  CHECK(family(T("E6")).equation_string() == "y^3 = x^4 + p2*x^2*y + p5*x*y + p8*y + p6*x^2 + p9*x + p12");
  CHECK(family(T("E7")).equation_string() ==
        "y^3 = x^3*y + p10*x^2 + p2*x*y^2 + p8*x*y + p14*x + p6*y^2 + p12*y + p18");
  CHECK(family(T("E8")).equation_string() ==
        "y^3 = x^5 + p2*x^3*y + p8*x^2*y + p14*x*y + p20*y + p12*x^3 + p18*x^2 + p24*x + p30");
  CHECK(family(T("D6")).degrees == std::vector<int>{2, 4, 6, 6, 8, 10});
  CHECK(family(T("A4")).to_json()["degrees"] == nlohmann::json({2, 3, 4, 5}));
}

TEST_CASE("A2 discriminant and gradient") {
  auto Q = FieldContext::rationals();
  CHECK(discriminant_A(Q, T("A2"), {-2, 4}) == RingInt(-400));
  auto g = gradient_A(Q, T("A2"), {-2, 4});
  REQUIRE(g.size() == 2);
  CHECK(g[0] == RingInt(-48));
  CHECK(g[1] == RingInt(-216));
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    long p2 = static_cast<long>(rng() % 201) - 100, p3 = static_cast<long>(rng() % 201) - 100;
    CHECK(discriminant_A(Q, T("A2"), {p2, p3}) == RingInt(from_i128(disc_a2(p2, p3))));
  }
}

TEST_CASE("A3 discriminant against the quartic formula") {
  auto Q = FieldContext::rationals();
  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i) {
    Int a = static_cast<long>(rng() % 41) - 20, b = static_cast<long>(rng() % 41) - 20,
        c = static_cast<long>(rng() % 41) - 20;
    Int want = 256 * c * c * c - 128 * a * a * c * c + 144 * a * b * b * c - 27 * b * b * b * b +
               16 * a * a * a * a * c - 4 * a * a * a * b * b;
    CHECK(discriminant_A(Q, T("A3"), {RingInt(a), RingInt(b), RingInt(c)}) == RingInt(want));
  }
  CHECK(discriminant_A(Q, T("A3"), {0, 0, 1}) == RingInt(256));
}

TEST_CASE("discriminant is weighted homogeneous") {
  std::mt19937_64 rng(3);
  for (const char* tag : {"Q", "Q(i)"}) {
    auto ctx = FieldContext::parse(tag);
    for (const char* t : {"A2", "A3", "A4", "A5"}) {
      auto fam = family(T(t));
      for (int i = 0; i < 20; ++i) {
        InvariantPoint b = random_point(ctx, rng, fam.rank(), 6);
        RingInt u = ctx.degree() == 2 ? RingInt(1, 1) : RingInt(2);
        InvariantPoint ub = numfield::act_unit(ctx, fam.degrees, u, b);
        CHECK(discriminant_A(ctx, fam.type, ub) ==
              ctx.mul(ctx.pow(u, static_cast<unsigned>(fam.disc_degree)), discriminant_A(ctx, fam.type, b)));
      }
    }
  }
}

TEST_CASE("gradient against interpolated derivatives") {
  std::mt19937_64 rng(4);
  for (const char* tag : {"Q", "Q(i)"}) {
    auto ctx = FieldContext::parse(tag);
    for (const char* t : {"A2", "A3", "A4"}) {
      auto fam = family(T(t));
      DiscriminantPolynomial dp(fam);
      CHECK(dp.weighted_degree() == fam.disc_degree);
      for (int k = 0; k < 10; ++k) {
        InvariantPoint b = random_point(ctx, rng, fam.rank(), 5);
        auto g = dp.gradient(ctx, b);
        CHECK(dp.evaluate(ctx, b) == discriminant_A(ctx, fam.type, b));
        for (int i = 0; i < fam.rank(); ++i) {
          int D = fam.disc_degree / fam.degrees[static_cast<std::size_t>(i)];
          CHECK(Rat(g[static_cast<std::size_t>(i)].a) == derivative_by_interpolation(ctx, fam.type, b, i, D, false));
          CHECK(Rat(g[static_cast<std::size_t>(i)].b) == derivative_by_interpolation(ctx, fam.type, b, i, D, true));
        }
      }
    }
  }
}

TEST_CASE("non-A families are rejected") {
  auto Q = FieldContext::rationals();
  CHECK_THROWS_AS(DiscriminantPolynomial(family(T("D4"))), NotImplemented);
  CHECK_THROWS_AS(discriminant_A(Q, T("E6"), {1, 1, 1, 1, 1, 1}), NotImplemented);
  CHECK_THROWS_AS(discriminant_D4(Q, {1, 1, 1, 1}), NotImplemented);
  CHECK_THROWS_AS(discriminant_A(Q, T("A2"), {1, 1, 1}), Error);
}
