#pragma once

#include <cstddef>
#include <cstdint>

namespace ade::kernels {

// Row kernels over f(x) = a + b*x + c*x^2 mod q for x = 0, 1, ..., n-1.
// Preconditions: 1 <= q < 2^31 and a, b, c < q.

enum class Isa { Scalar, Avx2 };

const char* to_string(Isa isa);
bool isa_supported(Isa isa);
// Best supported variant, unless ADE_ISA=scalar is set in the environment.
Isa detected_isa();
Isa active_isa();
// Throws std::invalid_argument when the CPU lacks the instruction set.
void set_active_isa(Isa isa);

std::uint64_t count_quadratic_nonzero(std::uint32_t q, std::uint32_t a, std::uint32_t b,
                                      std::uint32_t c, std::uint64_t n);
// out[i] = 1 if f(i) == 0 mod q, else 0.
void mark_quadratic_zeros(std::uint32_t q, std::uint32_t a, std::uint32_t b, std::uint32_t c,
                          std::size_t n, std::uint8_t* out);

namespace scalar {
std::uint64_t count_quadratic_nonzero(std::uint32_t q, std::uint32_t a, std::uint32_t b,
                                      std::uint32_t c, std::uint64_t n);
void mark_quadratic_zeros(std::uint32_t q, std::uint32_t a, std::uint32_t b, std::uint32_t c,
                          std::size_t n, std::uint8_t* out);
}  // namespace scalar

namespace avx2 {
std::uint64_t count_quadratic_nonzero(std::uint32_t q, std::uint32_t a, std::uint32_t b,
                                      std::uint32_t c, std::uint64_t n);
void mark_quadratic_zeros(std::uint32_t q, std::uint32_t a, std::uint32_t b, std::uint32_t c,
                          std::size_t n, std::uint8_t* out);
}  // namespace avx2

}  // namespace ade::kernels
