#include "ade/rational.hpp"

#include <utility>

#include "ade/errors.hpp"

namespace ade {

std::string to_string(const Int& x) { return x.get_str(); }

std::string to_string(const Rat& x) {
  Rat c = x;
  c.canonicalize();
  return c.get_str();
}

bool fits_i64(const Int& x) { return x.fits_slong_p(); }

std::int64_t to_i64(const Int& x) {
  if (!x.fits_slong_p()) throw Error("integer does not fit in 64 bits: " + x.get_str());
  return x.get_si();
}

Int from_i128(__int128 x) {
  bool neg = x < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(x + 1)) + 1
                            : static_cast<unsigned __int128>(x);
  Int hi = static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64));
  Int lo = static_cast<unsigned long>(static_cast<std::uint64_t>(u));
  Int r = (hi << 64) + lo;
  return neg ? Int(-r) : r;
}

std::vector<Rat> solve_exact(std::vector<std::vector<Rat>> a, std::vector<Rat> b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw Error("singular system");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rat f = a[r][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[r][k] -= f * a[col][k];
      b[r] -= f * b[col];
    }
  }
  std::vector<Rat> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = b[i] / a[i][i];
    x[i].canonicalize();
  }
  return x;
}

}  // namespace ade
