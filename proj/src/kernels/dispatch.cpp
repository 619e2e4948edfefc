#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "ade/kernels/quadratic.hpp"

namespace ade::kernels {

namespace {

std::atomic<int>& active_slot() {
  static std::atomic<int> slot{static_cast<int>(detected_isa())};
  return slot;
}

}  // namespace

const char* to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_supported(Isa isa) {
  if (isa == Isa::Scalar) return true;
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
  return false;
#endif
}

Isa detected_isa() {
  const char* env = std::getenv("ADE_ISA");
  if (env && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
  return isa_supported(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

Isa active_isa() { return static_cast<Isa>(active_slot().load(std::memory_order_relaxed)); }

void set_active_isa(Isa isa) {
  if (!isa_supported(isa)) throw std::invalid_argument(std::string("unsupported ISA ") + to_string(isa));
  active_slot().store(static_cast<int>(isa), std::memory_order_relaxed);
}

std::uint64_t count_quadratic_nonzero(std::uint32_t q, std::uint32_t a, std::uint32_t b,
                                      std::uint32_t c, std::uint64_t n) {
  if (active_isa() == Isa::Avx2) return avx2::count_quadratic_nonzero(q, a, b, c, n);
  return scalar::count_quadratic_nonzero(q, a, b, c, n);
}

void mark_quadratic_zeros(std::uint32_t q, std::uint32_t a, std::uint32_t b, std::uint32_t c,
                          std::size_t n, std::uint8_t* out) {
  if (active_isa() == Isa::Avx2) return avx2::mark_quadratic_zeros(q, a, b, c, n, out);
  scalar::mark_quadratic_zeros(q, a, b, c, n, out);
}

}  // namespace ade::kernels
