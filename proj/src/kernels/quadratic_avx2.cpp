#include <immintrin.h>

#include <cstring>

#include "ade/kernels/quadratic.hpp"

namespace ade::kernels::avx2 {

namespace {

constexpr int kLanes = 8;

inline std::uint32_t eval(std::uint64_t q, std::uint64_t a, std::uint64_t b, std::uint64_t c,
                          std::uint64_t x) {
  std::uint64_t xm = x % q;
  return static_cast<std::uint32_t>(((c * xm) % q * xm + b * xm + a) % q);
}

// Second differences: with step s, f(x+s) - f(x) = b s + c (2 x s + s^2) and
// the step of that is the constant 2 c s^2.
struct Walker {
  __m256i v0, d0, v1, d1, e, q;

  Walker(std::uint32_t qq, std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    const std::uint64_t Q = qq, s = 2 * kLanes;
    alignas(32) std::uint32_t v[2][kLanes], d[2][kLanes];
    for (int r = 0; r < 2; ++r) {
      for (int j = 0; j < kLanes; ++j) {
        std::uint64_t x = static_cast<std::uint64_t>(r * kLanes + j);
        std::uint32_t fx = eval(Q, a, b, c, x);
        std::uint32_t fxs = eval(Q, a, b, c, x + s);
        v[r][j] = fx;
        d[r][j] = static_cast<std::uint32_t>((fxs + Q - fx) % Q);
      }
    }
    std::uint64_t ee = (2 * (c % Q) % Q) * ((s * s) % Q) % Q;
    v0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(v[0]));
    v1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(v[1]));
    d0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(d[0]));
    d1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(d[1]));
    e = _mm256_set1_epi32(static_cast<int>(ee));
    q = _mm256_set1_epi32(static_cast<int>(qq));
  }

  static inline __m256i addmod(__m256i x, __m256i y, __m256i q) {
    __m256i s = _mm256_add_epi32(x, y);
    return _mm256_min_epu32(s, _mm256_sub_epi32(s, q));
  }

  inline void step() {
    v0 = addmod(v0, d0, q);
    d0 = addmod(d0, e, q);
    v1 = addmod(v1, d1, q);
    d1 = addmod(d1, e, q);
  }
};

inline unsigned zero_mask(__m256i v) {
  __m256i z = _mm256_cmpeq_epi32(v, _mm256_setzero_si256());
  return static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(z)));
}

struct ByteTable {
  std::uint64_t bytes[256];
  ByteTable() {
    for (unsigned m = 0; m < 256; ++m) {
      std::uint64_t w = 0;
      for (int k = 0; k < 8; ++k)
        if (m & (1u << k)) w |= 1ULL << (8 * k);
      bytes[m] = w;
    }
  }
};

const ByteTable kBytes;

}  // namespace

std::uint64_t count_quadratic_nonzero(std::uint32_t q, std::uint32_t a, std::uint32_t b,
                                      std::uint32_t c, std::uint64_t n) {
  const std::uint64_t block = 2 * kLanes;
  const std::uint64_t full = n / block;
  std::uint64_t zeros = 0;
  if (full > 0) {
    Walker w(q, a, b, c);
    for (std::uint64_t i = 0; i < full; ++i) {
      zeros += static_cast<std::uint64_t>(__builtin_popcount(zero_mask(w.v0)) +
                                          __builtin_popcount(zero_mask(w.v1)));
      w.step();
    }
  }
  for (std::uint64_t x = full * block; x < n; ++x) zeros += eval(q, a, b, c, x) == 0;
  return n - zeros;
}

void mark_quadratic_zeros(std::uint32_t q, std::uint32_t a, std::uint32_t b, std::uint32_t c,
                          std::size_t n, std::uint8_t* out) {
  const std::size_t block = 2 * kLanes;
  const std::size_t full = n / block;
  if (full > 0) {
    Walker w(q, a, b, c);
    for (std::size_t i = 0; i < full; ++i) {
      std::memcpy(out + i * block, &kBytes.bytes[zero_mask(w.v0)], 8);
      std::memcpy(out + i * block + kLanes, &kBytes.bytes[zero_mask(w.v1)], 8);
      w.step();
    }
  }
  for (std::size_t x = full * block; x < n; ++x) out[x] = eval(q, a, b, c, x) == 0;
}

}  // namespace ade::kernels::avx2
