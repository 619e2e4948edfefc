#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <cstring>
#include <random>
#include <stdexcept>
#include <string>

#include "ade/kernels/quadratic.hpp"

using namespace ade::kernels;

namespace {

std::uint64_t naive_value(std::uint64_t q, std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t x) {
  std::uint64_t xm = x % q;
  return (a + b * xm % q + c * (xm * xm % q) % q) % q;
}

std::uint64_t naive_count(std::uint32_t q, std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint64_t n) {
  std::uint64_t k = 0;
  for (std::uint64_t x = 0; x < n; ++x) k += naive_value(q, a, b, c, x) != 0;
  return k;
}

struct Case {
  std::uint32_t q, a, b, c;
  std::uint64_t n;
};

std::vector<Case> cases() {
  std::mt19937_64 rng(42);
  std::vector<Case> out;
  std::vector<std::uint32_t> moduli = {1, 2, 3, 4, 5, 7, 9, 16, 17, 25, 49, 121, 169, 1024, 65537, 1000003,
                                       (1u << 31) - 1, (1u << 31) - 19, 2147395600u};
  for (std::uint32_t q : moduli) {
    for (int i = 0; i < 12; ++i) {
      std::uint32_t a = static_cast<std::uint32_t>(rng() % q), b = static_cast<std::uint32_t>(rng() % q),
                    c = static_cast<std::uint32_t>(rng() % q);
      if (i == 0) c = 0;
      if (i == 1) a = b = c = 0;
      if (i == 2) c = q - 1;
      std::uint64_t n = i < 6 ? static_cast<std::uint64_t>(rng() % 70) : static_cast<std::uint64_t>(rng() % 3000);
      out.push_back({q, a, b, c, n});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("scalar kernel matches the naive evaluation") {
  for (const Case& k : cases()) {
    CAPTURE(k.q);
    CAPTURE(k.n);
    CHECK(scalar::count_quadratic_nonzero(k.q, k.a, k.b, k.c, k.n) == naive_count(k.q, k.a, k.b, k.c, k.n));
    std::vector<std::uint8_t> out(k.n + 1, 7);
    scalar::mark_quadratic_zeros(k.q, k.a, k.b, k.c, k.n, out.data());
    for (std::uint64_t x = 0; x < k.n; ++x) CHECK(out[x] == (naive_value(k.q, k.a, k.b, k.c, x) == 0));
    CHECK(out[k.n] == 7);
  }
}

TEST_CASE("avx2 kernel matches the scalar kernel") {
  if (!isa_supported(Isa::Avx2)) {
    MESSAGE("AVX2 not available, skipping");
    return;
  }
  for (const Case& k : cases()) {
    CAPTURE(k.q);
    CAPTURE(k.a);
    CAPTURE(k.b);
    CAPTURE(k.c);
    CAPTURE(k.n);
    CHECK(avx2::count_quadratic_nonzero(k.q, k.a, k.b, k.c, k.n) ==
          scalar::count_quadratic_nonzero(k.q, k.a, k.b, k.c, k.n));
    std::vector<std::uint8_t> s(k.n + 1, 7), v(k.n + 1, 7);
    scalar::mark_quadratic_zeros(k.q, k.a, k.b, k.c, k.n, s.data());
    avx2::mark_quadratic_zeros(k.q, k.a, k.b, k.c, k.n, v.data());
    CHECK(s == v);
  }
  // Full periods for small moduli, every coefficient triple.
  for (std::uint32_t q : {2u, 3u, 4u, 8u, 9u}) {
    for (std::uint32_t a = 0; a < q; ++a)
      for (std::uint32_t b = 0; b < q; ++b)
        for (std::uint32_t c = 0; c < q; ++c)
          CHECK(avx2::count_quadratic_nonzero(q, a, b, c, 5 * q + 33) == naive_count(q, a, b, c, 5 * q + 33));
  }
}

TEST_CASE("dispatch") {
  const char* env = std::getenv("ADE_ISA");
  if (env && std::string(env) == "scalar") CHECK(detected_isa() == Isa::Scalar);
  CHECK(std::strcmp(to_string(Isa::Scalar), "scalar") == 0);
  CHECK(std::strcmp(to_string(Isa::Avx2), "avx2") == 0);
  CHECK(isa_supported(Isa::Scalar));
  Isa before = active_isa();
  set_active_isa(Isa::Scalar);
  CHECK(active_isa() == Isa::Scalar);
  CHECK(count_quadratic_nonzero(25, 4, 23, 0, 25) == naive_count(25, 4, 23, 0, 25));
  if (isa_supported(Isa::Avx2)) {
    set_active_isa(Isa::Avx2);
    CHECK(active_isa() == Isa::Avx2);
    CHECK(count_quadratic_nonzero(25, 4, 23, 0, 100) == naive_count(25, 4, 23, 0, 100));
  } else {
    CHECK_THROWS_AS(set_active_isa(Isa::Avx2), std::invalid_argument);
  }
  set_active_isa(before);
}
