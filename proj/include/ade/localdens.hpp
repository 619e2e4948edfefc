#pragma once

#include <cstdint>
#include <vector>

#include "ade/curvefam.hpp"
#include "ade/numfield.hpp"
#include "ade/rational.hpp"
#include "json.hpp"

namespace ade::localdens {

using curvefam::CurveFamily;
using numfield::FieldContext;
using numfield::PrimeIdeal;

struct LocalDensity {
  PrimeIdeal prime;
  Rat rho;
  Int total_count;
  Int nonzero_count;
};

enum class Method { Auto, Enumerate, Accelerated };

struct DensityOptions {
  Method method = Method::Auto;
  // Auto enumerates when (N p)^{2r} is at most this, and counts roots otherwise.
  std::uint64_t enumerate_limit = 1ULL << 24;
  // Hard cap on (N p)^{2r} for Method::Enumerate.
  std::uint64_t enumerate_budget = 1ULL << 34;
  int workers = 1;
};

// rho = #{b in (O/p^2)^r : Delta(b) != 0 mod p^2} / (N p)^{2r}.
// Throws NotImplemented for families without a discriminant evaluator and
// BudgetExceeded when the enumeration is too large.
LocalDensity local_density(const FieldContext& ctx, const CurveFamily& fam, const PrimeIdeal& p,
                           const DensityOptions& opt = {});

struct EulerProduct {
  double value = 1.0;
  Rat exact = 1;
  std::uint64_t truncation_bound = 0;
  // Heuristic: c * sum_{N p > P} (N p)^{-2} with c = max over computed primes of (1 - rho)(N p)^2.
  double tail_constant = 0.0;
  double tail_halfwidth = 0.0;
  std::vector<LocalDensity> factors;
};

EulerProduct euler_product(const FieldContext& ctx, const CurveFamily& fam, std::uint64_t P,
                           const DensityOptions& opt = {});

// Upper bound for sum over prime ideals with N p > P of (N p)^{-2}.
double prime_square_tail(const FieldContext& ctx, std::uint64_t P);

nlohmann::json to_json(const FieldContext& ctx, const LocalDensity& d);
nlohmann::json to_json(const FieldContext& ctx, const EulerProduct& e);

}  // namespace ade::localdens
