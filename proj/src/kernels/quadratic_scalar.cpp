#include "ade/kernels/quadratic.hpp"

namespace ade::kernels::scalar {

namespace {

inline std::uint32_t eval(std::uint64_t q, std::uint64_t a, std::uint64_t b, std::uint64_t c,
                          std::uint64_t x) {
  std::uint64_t xm = x % q;
  std::uint64_t v = (c * xm) % q;
  v = (v * xm + b * xm + a) % q;
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::uint64_t count_quadratic_nonzero(std::uint32_t q, std::uint32_t a, std::uint32_t b,
                                      std::uint32_t c, std::uint64_t n) {
  std::uint64_t count = 0;
  for (std::uint64_t x = 0; x < n; ++x) count += eval(q, a, b, c, x) != 0;
  return count;
}

void mark_quadratic_zeros(std::uint32_t q, std::uint32_t a, std::uint32_t b, std::uint32_t c,
                          std::size_t n, std::uint8_t* out) {
  for (std::size_t x = 0; x < n; ++x) out[x] = eval(q, a, b, c, x) == 0;
}

}  // namespace ade::kernels::scalar
