#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace ade {

using Int = mpz_class;
using Rat = mpq_class;

std::string to_string(const Int& x);
std::string to_string(const Rat& x);

std::int64_t to_i64(const Int& x);
bool fits_i64(const Int& x);
Int from_i128(__int128 x);

// Solves A x = b exactly. A is square and must be invertible.
std::vector<Rat> solve_exact(std::vector<std::vector<Rat>> a, std::vector<Rat> b);

}  // namespace ade
