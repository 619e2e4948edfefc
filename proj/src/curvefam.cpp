#include "ade/curvefam.hpp"

#include <algorithm>
#include <map>

#include "ade/errors.hpp"

namespace ade::curvefam {

using rootsys::Kind;

namespace {

std::vector<CurveTerm> curve_template(DynkinType t) {
  std::vector<CurveTerm> eq;
  auto lhs = [&](int c, int x, int y) { eq.push_back({c, x, y, true}); };
  auto rhs = [&](int c, int x, int y) { eq.push_back({c, x, y, false}); };
  switch (t.kind) {
    case Kind::A: {
      const int N = t.rank + 1;
      lhs(0, 0, 2);
      rhs(0, N, 0);
      for (int j = 2; j <= N; ++j) rhs(j, N - j, 0);
      break;
    }
    case Kind::D: {
      // y(xy + p_r) = x^{r-1} + p_2 x^{r-2} + ... + p_{2r-2}
      const int r = t.rank;
      lhs(0, 1, 2);
      lhs(r, 0, 1);
      rhs(0, r - 1, 0);
      for (int j = 1; j <= r - 1; ++j) rhs(2 * j, r - 1 - j, 0);
      break;
    }
    case Kind::E:
      lhs(0, 0, 3);
      if (t.rank == 6) {
        rhs(0, 4, 0);
        rhs(2, 2, 1);
        rhs(5, 1, 1);
        rhs(8, 0, 1);
        rhs(6, 2, 0);
        rhs(9, 1, 0);
        rhs(12, 0, 0);
      } else if (t.rank == 7) {
        rhs(0, 3, 1);
        rhs(10, 2, 0);
        rhs(2, 1, 2);
        rhs(8, 1, 1);
        rhs(14, 1, 0);
        rhs(6, 0, 2);
        rhs(12, 0, 1);
        rhs(18, 0, 0);
      } else {
        rhs(0, 5, 0);
        rhs(2, 3, 1);
        rhs(8, 2, 1);
        rhs(14, 1, 1);
        rhs(20, 0, 1);
        rhs(12, 3, 0);
        rhs(18, 2, 0);
        rhs(24, 1, 0);
        rhs(30, 0, 0);
      }
      break;
  }
  return eq;
}

std::string monomial(int x, int y) {
  std::string s;
  auto part = [&](const char* v, int e) {
    if (e == 0) return;
    if (!s.empty()) s += "*";
    s += v;
    if (e > 1) s += "^" + std::to_string(e);
  };
  part("x", x);
  part("y", y);
  return s;
}

void check_a_point(DynkinType type, const InvariantPoint& b) {
  if (type.kind != Kind::A) throw NotImplemented("discriminant only for type A");
  if (static_cast<int>(b.size()) != type.rank)
    throw Error("point has " + std::to_string(b.size()) + " coordinates, expected " +
                std::to_string(type.rank));
}

}  // namespace

std::vector<int> template_degrees(const std::vector<CurveTerm>& equation) {
  std::vector<int> d;
  for (const CurveTerm& t : equation)
    if (t.coeff_degree > 0) d.push_back(t.coeff_degree);
  std::sort(d.begin(), d.end());
  return d;
}

CurveFamily family(DynkinType type) {
  type = DynkinType::make(type.kind, type.rank);
  CurveFamily f;
  f.type = type;
  f.equation = curve_template(type);
  f.degrees = template_degrees(f.equation);
  f.disc_degree = static_cast<int>(rootsys::build_root_system(type).root_count());
  return f;
}

std::string CurveFamily::equation_string() const {
  auto side = [&](bool want_lhs) {
    std::string s;
    for (const CurveTerm& t : equation) {
      if (t.lhs != want_lhs) continue;
      std::string term;
      if (t.coeff_degree > 0) term = "p" + std::to_string(t.coeff_degree);
      std::string m = monomial(t.x_exp, t.y_exp);
      if (!m.empty()) term += term.empty() ? m : "*" + m;
      if (term.empty()) term = "1";
      s += s.empty() ? term : " + " + term;
    }
    return s;
  };
  return side(true) + " = " + side(false);
}

nlohmann::json CurveFamily::to_json() const {
  return {{"type", type.name()},
          {"degrees", degrees},
          {"disc_degree", disc_degree},
          {"equation", equation_string()}};
}

poly::Poly a_type_polynomial(DynkinType type, const InvariantPoint& b) {
  check_a_point(type, b);
  const int N = type.rank + 1;
  poly::Poly f(N + 1);
  f[N] = RingInt(1);
  // b[j-2] = p_j is the coefficient of x^{N-j}.
  for (int j = 2; j <= N; ++j) f[N - j] = b[j - 2];
  return f;
}

RingInt discriminant_A(const FieldContext& ctx, DynkinType type, const InvariantPoint& b) {
  return poly::discriminant(ctx, a_type_polynomial(type, b));
}

std::vector<RingInt> gradient_A(const FieldContext& ctx, DynkinType type, const InvariantPoint& b) {
  check_a_point(type, b);
  // t -> disc(b + t e_j) has degree <= 2m; differentiate its interpolant at 0.
  const int D = 2 * type.rank;
  std::vector<Rat> w(D + 1);
  for (int k = 0; k <= D; ++k) {
    if (k == 0) {
      Rat s = 0;
      for (int j = 1; j <= D; ++j) s -= Rat(1, j);
      w[0] = s;
      continue;
    }
    Rat num = 1, den = 1;
    for (int j = 0; j <= D; ++j) {
      if (j == k) continue;
      den *= (k - j);
      if (j != 0) num *= -j;
    }
    w[k] = num / den;
  }
  std::vector<RingInt> grad(b.size());
  for (std::size_t coord = 0; coord < b.size(); ++coord) {
    Rat sa = 0, sb = 0;
    for (int k = 0; k <= D; ++k) {
      InvariantPoint bk = b;
      bk[coord] += RingInt(k);
      RingInt v = discriminant_A(ctx, type, bk);
      sa += w[k] * Rat(v.a);
      sb += w[k] * Rat(v.b);
    }
    sa.canonicalize();
    sb.canonicalize();
    if (sa.get_den() != 1 || sb.get_den() != 1) throw Error("non-integral gradient");
    grad[coord] = RingInt(sa.get_num(), sb.get_num());
  }
  return grad;
}

RingInt discriminant_D4(const FieldContext&, const InvariantPoint&) {
  throw NotImplemented("D4 plane-curve discriminant is not implemented");
}

DiscriminantPolynomial::DiscriminantPolynomial(const CurveFamily& fam) : fam_(fam) {
  if (fam.type.kind != Kind::A)
    throw NotImplemented("discriminant evaluation is only available for type A families");
  weighted_degree_ = fam.disc_degree;
}

RingInt DiscriminantPolynomial::evaluate(const FieldContext& ctx, const InvariantPoint& b) const {
  return discriminant_A(ctx, fam_.type, b);
}

std::vector<RingInt> DiscriminantPolynomial::gradient(const FieldContext& ctx,
                                                      const InvariantPoint& b) const {
  return gradient_A(ctx, fam_.type, b);
}

}  // namespace ade::curvefam
