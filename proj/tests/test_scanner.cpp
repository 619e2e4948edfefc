#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "ade/errors.hpp"
#include "ade/scanner.hpp"

using namespace ade;
using namespace ade::scanner;

namespace {

CurveFamily fam(const char* t) { return curvefam::family(rootsys::DynkinType::parse(t)); }

long ipow(long x, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

// Sigma points over Q with integral X by a plain box walk.
std::set<InvariantPoint> sigma_oracle_q(const CurveFamily& f, long X) {
  auto Q = FieldContext::rationals();
  std::set<InvariantPoint> out;
  InvariantPoint b(f.degrees.size());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == b.size()) {
      if (numfield::is_zero_point(b)) return;
      if (numfield::in_sigma(Q, f.degrees, b)) out.insert(b);
      return;
    }
    long B = ipow(X, f.degrees[i]);
    for (long v = -B + 1; v < B; ++v) {
      b[i] = RingInt(v);
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

// Same over Q(i), where |x|_v = a^2 + b^2.
std::set<InvariantPoint> sigma_oracle_gaussian(const CurveFamily& f, long X) {
  auto G = FieldContext::parse("Q(i)");
  std::set<InvariantPoint> out;
  InvariantPoint b(f.degrees.size());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == b.size()) {
      if (numfield::is_zero_point(b)) return;
      if (numfield::in_sigma(G, f.degrees, b)) out.insert(b);
      return;
    }
    long B = ipow(X, f.degrees[i]);
    long r = static_cast<long>(std::sqrt(static_cast<double>(B))) + 1;
    for (long x = -r; x <= r; ++x)
      for (long y = -r; y <= r; ++y) {
        if (x * x + y * y >= B) continue;
        b[i] = RingInt(Int(x), Int(y));
        rec(i + 1);
      }
  };
  rec(0);
  return out;
}

bool squarefree_by_trial(long n) {
  n = std::labs(n);
  for (long p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
    while (n % p == 0) n /= p;
  }
  return true;
}

std::string strip_path(nlohmann::json j) {
  j.erase("path");
  return j.dump();
}

}  // namespace

TEST_CASE("box bound") {
  CHECK(box_bound(Rat(3), 2) == 8);
  CHECK(box_bound(Rat(3), 3) == 26);
  CHECK(box_bound(Rat(3, 2), 2) == 2);
  CHECK(box_bound(Rat(1), 2) == 0);
  CHECK(box_bound(Rat(0), 2) == -1);
}

TEST_CASE("Sigma enumeration against the box oracle") {
  auto Q = FieldContext::rationals();
  for (long X : {1, 2, 3, 4}) {
    CAPTURE(X);
    auto pts = sigma_points(Q, fam("A2"), Rat(X));
    CHECK(std::set<InvariantPoint>(pts.begin(), pts.end()) == sigma_oracle_q(fam("A2"), X));
    CHECK(pts.size() == std::set<InvariantPoint>(pts.begin(), pts.end()).size());
  }
  for (long X : {1, 2}) {
    auto pts = sigma_points(Q, fam("A3"), Rat(X));
    CHECK(std::set<InvariantPoint>(pts.begin(), pts.end()) == sigma_oracle_q(fam("A3"), X));
  }
  auto G = FieldContext::parse("Q(i)");
  for (long X : {1, 2, 3}) {
    CAPTURE(X);
    auto pts = sigma_points(G, fam("A2"), Rat(X));
    CHECK(std::set<InvariantPoint>(pts.begin(), pts.end()) == sigma_oracle_gaussian(fam("A2"), X));
  }
  // Fractional heights cut the boxes below X^d.
  auto half = sigma_points(Q, fam("A2"), Rat(5, 2));
  for (const auto& b : half) CHECK(numfield::height_below(Q, {2, 3}, b, Rat(5, 2)));
}

TEST_CASE("count_sigma matches enumeration") {
  auto Q = FieldContext::rationals();
  auto G = FieldContext::parse("Q(i)");
  for (long X : {2, 3, 5, 7}) CHECK(count_sigma(Q, fam("A2"), Rat(X)) == sigma_points(Q, fam("A2"), Rat(X)).size());
  CHECK(count_sigma(Q, fam("A2"), Rat(2)) == 55);
  CHECK(count_sigma(Q, fam("A2"), Rat(3)) == 439);
  CHECK(count_sigma(Q, fam("A2"), Rat(5)) == 5893);
  CHECK(count_sigma(Q, fam("A2"), Rat(7, 2)) == sigma_points(Q, fam("A2"), Rat(7, 2)).size());
  for (long X : {2, 3}) CHECK(count_sigma(Q, fam("A3"), Rat(X)) == sigma_points(Q, fam("A3"), Rat(X)).size());
  for (long X : {2, 3}) CHECK(count_sigma(G, fam("A2"), Rat(X)) == sigma_points(G, fam("A2"), Rat(X)).size());
  CHECK(count_sigma(Q, fam("A2"), Rat(0)) == 0);
  CHECK(count_sigma(Q, fam("A2"), Rat(1)) == 0);
}

TEST_CASE("classification examples") {
  auto Q = FieldContext::rationals();
  auto A2 = fam("A2");
  CHECK(classify(Q, A2, {-2, 4}, Q.prime_of(5)) == DivisibilityClass::Weak);
  CHECK(classify(Q, A2, {-2, 4}, Q.prime_of(2)) == DivisibilityClass::Strong);
  CHECK(classify(Q, A2, {3, 0}, Q.prime_of(3)) == DivisibilityClass::Strong);
  CHECK(classify(Q, A2, {-2, 4}, Q.prime_of(3)) == DivisibilityClass::NotDivisible);
  CHECK(classify_bruteforce(Q, A2, {-2, 4}, Q.prime_of(5)) == DivisibilityClass::Weak);
  CHECK(classify_bruteforce(Q, A2, {-2, 4}, Q.prime_of(2)) == DivisibilityClass::Strong);
  CHECK_THROWS_AS(classify(Q, A2, {-3, 2}, Q.prime_of(2)), ZeroDiscriminant);
  CHECK(to_string(DivisibilityClass::Weak) == "Weak");
}

TEST_CASE("gradient criterion equals brute force") {
  auto Q = FieldContext::rationals();
  auto G = FieldContext::parse("Q(i)");
  struct Run {
    const FieldContext* ctx;
    const char* type;
    long X;
  };
  std::size_t checked = 0;
  for (Run run : {Run{&Q, "A2", 5}, Run{&Q, "A3", 2}, Run{&Q, "A4", 1}, Run{&G, "A2", 3}}) {
    auto f = fam(run.type);
    auto primes = run.ctx->primes_up_to(13);
    enumerate_sigma(*run.ctx, f, Rat(run.X), [&](const InvariantPoint& b) {
      RingInt d = curvefam::discriminant_A(*run.ctx, f.type, b);
      if (d.is_zero()) return;
      for (const auto& P : primes) {
        if (run.ctx->valuation(P, d) < 2) continue;
        ++checked;
        CHECK(classify(*run.ctx, f, b, P) == classify_bruteforce(*run.ctx, f, b, P));
      }
    });
  }
  CHECK(checked > 1000);
}

TEST_CASE("fast path equals generic path") {
  auto Q = FieldContext::rationals();
  for (long X : {3, 6}) {
    ScanOptions a;
    ScanOptions b;
    b.allow_fast_path = false;
    ScanReport ra = scan(Q, fam("A2"), Rat(X), a);
    ScanReport rb = scan(Q, fam("A2"), Rat(X), b);
    CHECK(ra.path == "a2-rows");
    CHECK(rb.path == "generic");
    CHECK(strip_path(to_json(Q, ra)) == strip_path(to_json(Q, rb)));
  }
}

TEST_CASE("worker count does not change the report") {
  auto Q = FieldContext::rationals();
  auto G = FieldContext::parse("Q(i)");
  ScanOptions one, three;
  three.workers = 3;
  CHECK(to_json(Q, scan(Q, fam("A2"), Rat(6), one)).dump() == to_json(Q, scan(Q, fam("A2"), Rat(6), three)).dump());
  CHECK(to_json(Q, scan(Q, fam("A3"), Rat(2), one)).dump() == to_json(Q, scan(Q, fam("A3"), Rat(2), three)).dump());
  CHECK(to_json(G, scan(G, fam("A2"), Rat(3), one)).dump() == to_json(G, scan(G, fam("A2"), Rat(3), three)).dump());
}

TEST_CASE("scan report against dumped points") {
  auto Q = FieldContext::rationals();
  ScanOptions opt;
  opt.dump_points = true;
  opt.M_grid = {5, 10, 40};
  ScanReport r = scan(Q, fam("A2"), Rat(6), opt);
  CHECK(r.points.size() == r.total);
  CHECK(r.total == count_sigma(Q, fam("A2"), Rat(6)));
  CHECK(r.excluded_primes == std::vector<std::uint64_t>{2, 3});
  std::uint64_t sf = 0;
  std::vector<TailRow> tail(3);
  for (const PointRecord& p : r.points) {
    long d = static_cast<long>(p.disc.a.get_si());
    CHECK(p.disc == curvefam::discriminant_A(Q, fam("A2").type, p.b));
    if (d == 0) continue;
    CHECK(p.squarefree == squarefree_by_trial(d));
    sf += p.squarefree;
    double sp = 1, wx = 1;
    for (const PrimeHit& h : p.hits) {
      CHECK(h.valuation == Q.valuation(Q.prime_of(static_cast<long>(h.p)), p.disc));
      CHECK(h.valuation >= 2);
      if (h.cls == DivisibilityClass::Strong)
        sp *= static_cast<double>(h.norm);
      else if (h.p != 2 && h.p != 3)
        wx *= static_cast<double>(h.norm);
    }
    for (std::size_t i = 0; i < 3; ++i) {
      tail[i].strong += sp > static_cast<double>(opt.M_grid[i]);
      tail[i].weak_excluded += wx > static_cast<double>(opt.M_grid[i]);
    }
  }
  CHECK(sf == r.squarefree_count);
  REQUIRE(r.tail.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(r.tail[i].strong == tail[i].strong);
    CHECK(r.tail[i].weak_excluded == tail[i].weak_excluded);
  }
  std::ostringstream csv;
  write_csv(Q, r, csv);
  std::string text = csv.str();
  CHECK(text.rfind("c0,c1,disc,squarefree", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) == r.total + 1);

  ScanOptions big;
  big.dump_points = true;
  big.dump_limit = 100;
  CHECK_THROWS_AS(scan(Q, fam("A2"), Rat(6), big), BudgetExceeded);
}

TEST_CASE("empty scans and unsupported families") {
  auto Q = FieldContext::rationals();
  ScanReport r = scan(Q, fam("A2"), Rat(0));
  CHECK(r.total == 0);
  nlohmann::json j = to_json(Q, r);
  CHECK(j["empirical_density"].is_null());
  CHECK(j["tail_exponent"].is_null());
  CHECK_THROWS_AS(scan(Q, fam("D4"), Rat(2)), NotImplemented);
}

TEST_CASE("log-log slope") {
  std::vector<double> x{1, 2, 4, 8}, y;
  for (double v : x) y.push_back(3 * std::pow(v, 5));
  double s = 0;
  REQUIRE(loglog_slope(x, y, s));
  CHECK(s == doctest::Approx(5.0));
  CHECK(!loglog_slope({1, 2}, {0, 3}, s));
  CHECK(!loglog_slope({2, 2}, {1, 3}, s));
}

TEST_CASE("tail decay and default exclusions") {
  auto Q = FieldContext::rationals();
  CHECK(default_excluded_primes(fam("A2")) == std::vector<std::uint64_t>{2, 3});
  CHECK(default_excluded_primes(fam("A4")) == std::vector<std::uint64_t>{2, 5});
  ScanReport r = scan(Q, fam("A2"), Rat(8));
  TailDecay t = tail_decay(r);
  CHECK(t.rows.size() == 5);
  CHECK(t.exponent_defined == r.exponent_defined);
  CHECK(t.exponent == doctest::Approx(r.fitted_exponent));
  TailDecay t2 = tail_decay(Q, fam("A2"), Rat(8), {10, 20, 40, 80, 160});
  CHECK(t2.exponent == doctest::Approx(t.exponent));
  for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(t.rows[i].combined() <= t.rows[i - 1].combined());
  CHECK(r.sieve_tail.M == doctest::Approx(std::pow(8.0, 4.0 / 7.0)));
}
