#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ade/curvefam.hpp"
#include "ade/intfactor.hpp"
#include "ade/numfield.hpp"
#include "ade/rational.hpp"
#include "json.hpp"

namespace ade::scanner {

using curvefam::CurveFamily;
using numfield::FieldContext;
using numfield::InvariantPoint;
using numfield::PrimeIdeal;
using numfield::RingInt;

enum class DivisibilityClass { NotDivisible, Weak, Strong };
std::string to_string(DivisibilityClass c);

// Calls visit(b) for every b in Sigma with Ht(b) < X, in lexicographic order
// of the coordinate boxes |p_i|_v < X^{d_i}.
void enumerate_sigma(const FieldContext& ctx, const CurveFamily& fam, const Rat& X,
                     const std::function<void(const InvariantPoint&)>& visit);
std::vector<InvariantPoint> sigma_points(const FieldContext& ctx, const CurveFamily& fam, const Rat& X);

// #{b in Sigma : Ht(b) < X}. Over Q the last coordinate is counted by
// inclusion-exclusion instead of being enumerated.
std::uint64_t count_sigma(const FieldContext& ctx, const CurveFamily& fam, const Rat& X);

// Largest integer strictly below X^d.
Int box_bound(const Rat& X, int d);

// Gradient criterion. Throws ZeroDiscriminant when Delta(b) = 0.
DivisibilityClass classify(const FieldContext& ctx, const CurveFamily& fam, const InvariantPoint& b,
                           const PrimeIdeal& p);
// Direct test of p^2 | Delta(b + pi c) over all c in (O/p)^r.
DivisibilityClass classify_bruteforce(const FieldContext& ctx, const CurveFamily& fam,
                                      const InvariantPoint& b, const PrimeIdeal& p);

std::vector<std::uint64_t> default_excluded_primes(const CurveFamily& fam);

struct ScanOptions {
  std::uint64_t prime_bound = 100;
  std::vector<std::uint64_t> excluded_primes;  // rational primes
  bool use_default_exclusion = true;
  std::vector<std::uint64_t> M_grid{10, 20, 40, 80, 160};
  int kappa = 2;
  int workers = 1;
  // Every (b, p) with v_p(Delta) >= 2 and N p <= this is also classified by brute force.
  std::uint64_t brute_force_norm = 13;
  bool dump_points = false;
  std::uint64_t dump_limit = 10'000'000;
  bool allow_fast_path = true;
  IntFactorOptions factor_options{};
};

struct PrimeTally {
  PrimeIdeal prime;
  std::uint64_t not_divisible = 0;
  std::uint64_t weak = 0;
  std::uint64_t strong = 0;
};

struct TailRow {
  double M = 0;
  std::uint64_t strong = 0;
  std::uint64_t weak = 0;           // all weak primes
  std::uint64_t weak_excluded = 0;  // weak primes coprime to the excluded set
  std::uint64_t combined() const { return strong + weak_excluded; }
};

struct PrimeHit {
  RingInt generator;
  std::uint64_t norm = 0;
  std::uint64_t p = 0;
  int valuation = 0;
  DivisibilityClass cls = DivisibilityClass::NotDivisible;
};

struct PointRecord {
  InvariantPoint b;
  RingInt disc;
  bool squarefree = false;
  bool uncertain = false;
  std::vector<PrimeHit> hits;  // primes with v >= 2
};

struct ScanReport {
  std::string field;
  std::string type;
  Rat X;
  std::uint64_t prime_bound = 0;
  std::vector<std::uint64_t> excluded_primes;
  std::string path;
  std::string isa;

  std::uint64_t total = 0;
  std::uint64_t squarefree_count = 0;
  std::uint64_t zero_discriminant = 0;
  std::uint64_t uncertain = 0;
  double empirical_density = 0.0;
  double band = 0.0;

  std::vector<PrimeTally> tallies;  // N p <= prime_bound
  std::uint64_t large_weak = 0;
  std::uint64_t large_strong = 0;

  std::vector<TailRow> tail;
  TailRow sieve_tail;  // at M = X^{4/(2 kappa + 3)}
  double fitted_exponent = 0.0;
  bool exponent_defined = false;

  std::uint64_t brute_checked = 0;
  std::uint64_t brute_disagreements = 0;

  std::vector<PointRecord> points;  // only with dump_points
};

ScanReport scan(const FieldContext& ctx, const CurveFamily& fam, const Rat& X, const ScanOptions& opt = {});

// Least-squares slope of log y against log x over the pairs with y > 0.
// Returns false when fewer than two such pairs exist.
bool loglog_slope(const std::vector<double>& x, const std::vector<double>& y, double& slope);

struct TailDecay {
  std::vector<TailRow> rows;
  double exponent = 0.0;
  bool exponent_defined = false;
};

TailDecay tail_decay(const FieldContext& ctx, const CurveFamily& fam, const Rat& X,
                     const std::vector<std::uint64_t>& M_grid, ScanOptions opt = {});
TailDecay tail_decay(const ScanReport& report);

nlohmann::json to_json(const FieldContext& ctx, const ScanReport& r);
void write_csv(const FieldContext& ctx, const ScanReport& r, std::ostream& os);

}  // namespace ade::scanner
