#pragma once

#include <cstdint>

#include "ade/numfield.hpp"

namespace ade::numfield {

// The finite ring O/(g). Elements are reduced against the Hermite basis
// {(n1, 0), (c, n2)} of the ideal lattice, so that 0 <= a < n1, 0 <= b < n2.
class ResidueRing {
 public:
  struct Elt {
    std::int64_t a = 0;
    std::int64_t b = 0;
    friend bool operator==(const Elt&, const Elt&) = default;
  };

  ResidueRing(const FieldContext& ctx, const RingInt& modulus);

  std::uint64_t size() const { return static_cast<std::uint64_t>(n1_) * static_cast<std::uint64_t>(n2_); }
  std::int64_t n1() const { return n1_; }
  std::int64_t n2() const { return n2_; }

  Elt reduce(__int128 a, __int128 b) const;
  Elt reduce(const RingInt& x) const;
  RingInt lift(const Elt& x) const { return RingInt(Int(static_cast<long>(x.a)), Int(static_cast<long>(x.b))); }

  Elt zero() const { return {}; }
  Elt one() const { return reduce(1, 0); }
  Elt add(const Elt& x, const Elt& y) const { return reduce(static_cast<__int128>(x.a) + y.a, static_cast<__int128>(x.b) + y.b); }
  Elt sub(const Elt& x, const Elt& y) const { return reduce(static_cast<__int128>(x.a) - y.a, static_cast<__int128>(x.b) - y.b); }
  Elt neg(const Elt& x) const { return reduce(-static_cast<__int128>(x.a), -static_cast<__int128>(x.b)); }
  Elt mul(const Elt& x, const Elt& y) const;
  Elt scale(std::int64_t k, const Elt& x) const { return reduce(static_cast<__int128>(k) * x.a, static_cast<__int128>(k) * x.b); }
  Elt pow(Elt x, std::uint64_t e) const;
  bool is_zero(const Elt& x) const { return x.a == 0 && x.b == 0; }

  std::uint64_t index(const Elt& x) const { return static_cast<std::uint64_t>(x.a) + static_cast<std::uint64_t>(n1_) * static_cast<std::uint64_t>(x.b); }
  Elt element(std::uint64_t i) const {
    return {static_cast<std::int64_t>(i % static_cast<std::uint64_t>(n1_)),
            static_cast<std::int64_t>(i / static_cast<std::uint64_t>(n1_))};
  }

 private:
  long t_ = 0;
  long n_ = 0;
  std::int64_t n1_ = 1;
  std::int64_t n2_ = 1;
  std::int64_t c_ = 0;
};

}  // namespace ade::numfield
