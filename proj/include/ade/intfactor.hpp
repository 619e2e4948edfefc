#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ade/rational.hpp"

namespace ade {

std::vector<std::uint32_t> small_primes(std::uint32_t bound);

bool is_prime_u64(std::uint64_t n);
std::uint64_t isqrt_u64(std::uint64_t n);

// Prime factorization of n >= 1, sorted by prime.
std::vector<std::pair<std::uint64_t, int>> factor_u64(std::uint64_t n);

struct IntFactorOptions {
  std::uint32_t trial_bound = 1u << 16;
  Int budget = Int(1) << 63;  // cofactors below this are split completely
};

// Factorization of |n| (n != 0). A cofactor above the budget is accepted when
// it is a probable prime or a perfect power of one; otherwise
// FactorBudgetExceeded is thrown.
std::vector<std::pair<Int, int>> factor_int(const Int& n, const IntFactorOptions& opt = {});

}  // namespace ade
