#include "ade/poly.hpp"

#include <algorithm>

#include "ade/errors.hpp"

namespace ade::poly {

int degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

void trim(Poly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

const RingInt& leading(const Poly& p) {
  if (p.empty()) throw Error("leading coefficient of zero polynomial");
  return p.back();
}

Poly add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

Poly sub(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

Poly mul(const FieldContext& ctx, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += ctx.mul(a[i], b[j]);
  }
  trim(r);
  return r;
}

Poly scale(const FieldContext& ctx, const RingInt& k, const Poly& a) {
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = ctx.mul(k, a[i]);
  trim(r);
  return r;
}

Poly derivative(const Poly& p) {
  if (p.size() <= 1) return {};
  Poly r(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) r[i - 1] = Int(static_cast<unsigned long>(i)) * p[i];
  trim(r);
  return r;
}

RingInt eval(const FieldContext& ctx, const Poly& p, const RingInt& x) {
  RingInt acc;
  for (std::size_t i = p.size(); i-- > 0;) acc = ctx.mul(acc, x) + p[i];
  return acc;
}

Poly shift(const FieldContext& ctx, const Poly& f, const RingInt& l) {
  // Horner in the ring of polynomials: acc = acc * (x + l) + f_i.
  Poly acc;
  const Poly lin{l, RingInt(1)};
  for (std::size_t i = f.size(); i-- > 0;) {
    acc = mul(ctx, acc, lin);
    if (acc.empty()) acc.resize(1);
    acc[0] += f[i];
    trim(acc);
  }
  return acc;
}

Poly divexact(const FieldContext& ctx, const Poly& a, const RingInt& d) {
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = ctx.divexact(a[i], d);
  return r;
}

Poly pseudo_remainder(const FieldContext& ctx, Poly a, const Poly& b) {
  if (b.empty()) throw Error("pseudo-division by zero polynomial");
  const int db = degree(b);
  const RingInt& lb = leading(b);
  int e = degree(a) - db + 1;
  while (!a.empty() && degree(a) >= db) {
    RingInt la = a.back();
    int shift_by = degree(a) - db;
    for (auto& c : a) c = ctx.mul(lb, c);
    for (int i = 0; i <= db; ++i) a[i + shift_by] -= ctx.mul(la, b[i]);
    trim(a);
    --e;
  }
  if (e > 0) {
    RingInt f = ctx.pow(lb, static_cast<unsigned>(e));
    for (auto& c : a) c = ctx.mul(f, c);
  }
  return a;
}

RingInt resultant(const FieldContext& ctx, Poly a, Poly b) {
  trim(a);
  trim(b);
  if (a.empty() || b.empty()) return RingInt(0);
  int s = 1;
  if (degree(a) < degree(b)) {
    std::swap(a, b);
    if (degree(a) % 2 == 1 && degree(b) % 2 == 1) s = -s;
  }
  if (degree(b) == 0) {
    RingInt r = ctx.pow(b[0], static_cast<unsigned>(degree(a)));
    return s < 0 ? -r : r;
  }
  RingInt g(1), h(1);
  for (;;) {
    int delta = degree(a) - degree(b);
    if (degree(a) % 2 == 1 && degree(b) % 2 == 1) s = -s;
    Poly r = pseudo_remainder(ctx, a, b);
    a = std::move(b);
    RingInt div = ctx.mul(g, ctx.pow(h, static_cast<unsigned>(delta)));
    b = divexact(ctx, r, div);
    g = leading(a);
    if (delta == 0) {
    } else if (delta == 1) {
      h = g;
    } else {
      h = ctx.divexact(ctx.pow(g, static_cast<unsigned>(delta)),
                       ctx.pow(h, static_cast<unsigned>(delta - 1)));
    }
    if (b.empty()) return RingInt(0);
    if (degree(b) == 0) break;
  }
  int da = degree(a);
  RingInt res = ctx.divexact(ctx.pow(b[0], static_cast<unsigned>(da)),
                             ctx.pow(h, static_cast<unsigned>(da - 1)));
  return s < 0 ? -res : res;
}

RingInt discriminant(const FieldContext& ctx, const Poly& f_in) {
  Poly f = f_in;
  trim(f);
  const int n = degree(f);
  if (n < 1) throw Error("discriminant of a constant");
  RingInt r = resultant(ctx, f, derivative(f));
  RingInt d = ctx.divexact(r, leading(f));
  return ((n * (n - 1) / 2) % 2 == 1) ? -d : d;
}

}  // namespace ade::poly
