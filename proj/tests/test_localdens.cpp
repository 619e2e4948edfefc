#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ade/errors.hpp"
#include "ade/localdens.hpp"

using namespace ade;
using namespace ade::localdens;

namespace {

DensityOptions with(Method m, int workers = 1) {
  DensityOptions o;
  o.method = m;
  o.workers = workers;
  return o;
}

CurveFamily fam(const char* t) { return curvefam::family(rootsys::DynkinType::parse(t)); }

// Direct count over Z/p^2 with the closed-form A2 discriminant.
Rat a2_oracle(long p) {
  long q = p * p;
  long nonzero = 0;
  for (long a = 0; a < q; ++a)
    for (long b = 0; b < q; ++b) {
      long d = (-4 * a * a % q * a - 27 * b * b) % q;
      nonzero += d != 0;
    }
  Rat r(nonzero, q * q);
  r.canonicalize();
  return r;
}

// Direct count over Z[i]/(n) for a rational integer n, representatives a + b i with 0 <= a, b < n.
Rat a2_gaussian_oracle(long n) {
  std::vector<std::pair<long, long>> elts;
  for (long a = 0; a < n; ++a)
    for (long b = 0; b < n; ++b) elts.push_back({a, b});
  auto mul = [](std::pair<long, long> x, std::pair<long, long> y) {
    return std::pair<long, long>{x.first * y.first - x.second * y.second, x.first * y.second + x.second * y.first};
  };
  long nonzero = 0;
  for (auto p2 : elts)
    for (auto p3 : elts) {
      auto c = mul(mul(p2, p2), p2);
      auto s = mul(p3, p3);
      long re = -4 * c.first - 27 * s.first, im = -4 * c.second - 27 * s.second;
      nonzero += !(re % n == 0 && im % n == 0);
    }
  Rat r(nonzero, static_cast<long>(elts.size() * elts.size()));
  r.canonicalize();
  return r;
}

}  // namespace

TEST_CASE("A2 densities at 2 and 3 against the direct count") {
  auto Q = numfield::FieldContext::rationals();
  Rat r2 = a2_oracle(2), r3 = a2_oracle(3);
  CHECK(r2 == Rat(1, 2));
  CHECK(r3 == Rat(2, 3));
  for (Method m : {Method::Enumerate, Method::Accelerated, Method::Auto}) {
    CHECK(local_density(Q, fam("A2"), Q.prime_of(2), with(m)).rho == r2);
    CHECK(local_density(Q, fam("A2"), Q.prime_of(3), with(m)).rho == r3);
  }
  LocalDensity d = local_density(Q, fam("A2"), Q.prime_of(2), with(Method::Enumerate));
  CHECK(d.total_count == 16);
  CHECK(d.nonzero_count == 8);
}

TEST_CASE("A2 densities at larger primes") {
  auto Q = numfield::FieldContext::rationals();
  for (long p : {5, 7, 11, 13}) {
    CAPTURE(p);
    Rat want = a2_oracle(p);
    Rat P(p);
    CHECK(want == 1 - 2 / (P * P) + 1 / (P * P * P));
    CHECK(local_density(Q, fam("A2"), Q.prime_of(p), with(Method::Accelerated)).rho == want);
  }
}

TEST_CASE("accelerated count equals enumeration") {
  auto Q = numfield::FieldContext::rationals();
  auto G = numfield::FieldContext::parse("Q(i)");
  for (const auto& P : Q.primes_up_to(13)) {
    CAPTURE(P.p);
    for (const char* t : {"A2", "A3"})
      CHECK(local_density(Q, fam(t), P, with(Method::Enumerate)).rho ==
            local_density(Q, fam(t), P, with(Method::Accelerated)).rho);
  }
  for (const auto& P : Q.primes_up_to(5))
    CHECK(local_density(Q, fam("A4"), P, with(Method::Enumerate)).rho ==
          local_density(Q, fam("A4"), P, with(Method::Accelerated)).rho);
  for (const auto& P : G.primes_up_to(13)) {
    CAPTURE(G.format(P.generator));
    CHECK(local_density(G, fam("A2"), P, with(Method::Enumerate)).rho ==
          local_density(G, fam("A2"), P, with(Method::Accelerated)).rho);
  }
}

TEST_CASE("Gaussian densities") {
  auto G = numfield::FieldContext::parse("Q(i)");
  // (1+i)^2 = (2) and 3 is inert with 3^2 = (9).
  Rat at_1pi = a2_gaussian_oracle(2);
  Rat at_3 = a2_gaussian_oracle(9);
  CHECK(at_1pi == Rat(1, 2));
  CHECK(at_3 == Rat(8, 9));
  CHECK(local_density(G, fam("A2"), G.prime_of(G.parse_element("1+i"))).rho == at_1pi);
  CHECK(local_density(G, fam("A2"), G.prime_of(3)).rho == at_3);
  CHECK(local_density(G, fam("A2"), G.prime_of(3)).prime.norm == 9);
}

TEST_CASE("workers do not change the count") {
  auto Q = numfield::FieldContext::rationals();
  for (long p : {3, 7}) {
    auto a = local_density(Q, fam("A3"), Q.prime_of(p), with(Method::Enumerate, 1));
    auto b = local_density(Q, fam("A3"), Q.prime_of(p), with(Method::Enumerate, 3));
    CHECK(a.nonzero_count == b.nonzero_count);
  }
}

TEST_CASE("budgets and unsupported families") {
  auto Q = numfield::FieldContext::rationals();
  DensityOptions o = with(Method::Enumerate);
  o.enumerate_budget = 1000;
  CHECK_THROWS_AS(local_density(Q, fam("A3"), Q.prime_of(5), o), BudgetExceeded);
  CHECK_THROWS_AS(local_density(Q, fam("A8"), Q.prime_of(101), with(Method::Accelerated)), BudgetExceeded);
  CHECK_THROWS_AS(local_density(Q, fam("D4"), Q.prime_of(5)), NotImplemented);
}

TEST_CASE("Euler product") {
  auto Q = numfield::FieldContext::rationals();
  EulerProduct e = euler_product(Q, fam("A2"), 30);
  CHECK(e.factors.size() == 10);
  Rat prod = 1;
  for (const auto& d : e.factors) prod *= d.rho;
  CHECK(prod == e.exact);
  CHECK(e.value == doctest::Approx(e.exact.get_d()));
  CHECK(e.tail_halfwidth > 0);
  // (1 - rho) p^2 is 2 at p = 2, 3 at p = 3 and 2 - 1/p beyond.
  CHECK(e.tail_constant == doctest::Approx(3.0));
  CHECK(prime_square_tail(Q, 30) > 0);
  CHECK(prime_square_tail(Q, 30) < 1.0 / 30);
  nlohmann::json j = to_json(Q, e);
  CHECK(j["primes"].size() == 10);
  CHECK(j["primes"][0]["rho"] == "1/2");
  CHECK(j["tail"]["kind"] == "heuristic");
}
