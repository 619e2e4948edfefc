#pragma once

#include <vector>

#include "ade/numfield.hpp"

namespace ade::poly {

using numfield::FieldContext;
using numfield::RingInt;

// Coefficients from the constant term upwards; the zero polynomial is empty.
using Poly = std::vector<RingInt>;

int degree(const Poly& p);
void trim(Poly& p);
const RingInt& leading(const Poly& p);

Poly add(const Poly& a, const Poly& b);
Poly sub(const Poly& a, const Poly& b);
Poly mul(const FieldContext& ctx, const Poly& a, const Poly& b);
Poly scale(const FieldContext& ctx, const RingInt& k, const Poly& a);
Poly derivative(const Poly& p);
RingInt eval(const FieldContext& ctx, const Poly& p, const RingInt& x);
// f(x + l)
Poly shift(const FieldContext& ctx, const Poly& f, const RingInt& l);
Poly divexact(const FieldContext& ctx, const Poly& a, const RingInt& d);

// lc(b)^(deg a - deg b + 1) a mod b
Poly pseudo_remainder(const FieldContext& ctx, Poly a, const Poly& b);

// Subresultant algorithm; exact in any integral domain.
RingInt resultant(const FieldContext& ctx, Poly a, Poly b);

// (-1)^(n(n-1)/2) Res(f, f') / lc(f)
RingInt discriminant(const FieldContext& ctx, const Poly& f);

}  // namespace ade::poly
