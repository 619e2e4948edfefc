#pragma once

#include <string>
#include <vector>

#include "ade/numfield.hpp"
#include "ade/poly.hpp"
#include "ade/rootsys.hpp"
#include "json.hpp"

namespace ade::curvefam {

using numfield::FieldContext;
using numfield::InvariantPoint;
using numfield::RingInt;
using rootsys::DynkinType;

// coeff * x^x_exp * y^y_exp, where coeff is the invariant p_{coeff_degree}
// (or 1 when coeff_degree == 0).
struct CurveTerm {
  int coeff_degree = 0;
  int x_exp = 0;
  int y_exp = 0;
  bool lhs = false;
};

struct CurveFamily {
  DynkinType type;
  std::vector<int> degrees;  // d_1 <= ... <= d_r
  std::vector<CurveTerm> equation;
  int disc_degree = 0;  // #Phi_H

  int rank() const { return static_cast<int>(degrees.size()); }
  std::string equation_string() const;
  nlohmann::json to_json() const;
};

CurveFamily family(DynkinType type);

// Invariant degrees read off a template: the subscripts of its coefficients.
std::vector<int> template_degrees(const std::vector<CurveTerm>& equation);

// x^{m+1} + p_2 x^{m-1} + ... + p_{m+1}, coefficients from the constant term up.
poly::Poly a_type_polynomial(DynkinType type, const InvariantPoint& b);

RingInt discriminant_A(const FieldContext& ctx, DynkinType type, const InvariantPoint& b);
std::vector<RingInt> gradient_A(const FieldContext& ctx, DynkinType type, const InvariantPoint& b);
RingInt discriminant_D4(const FieldContext& ctx, const InvariantPoint& b);

class DiscriminantPolynomial {
 public:
  explicit DiscriminantPolynomial(const CurveFamily& fam);
  RingInt evaluate(const FieldContext& ctx, const InvariantPoint& b) const;
  std::vector<RingInt> gradient(const FieldContext& ctx, const InvariantPoint& b) const;
  int weighted_degree() const { return weighted_degree_; }
  const CurveFamily& family() const { return fam_; }

 private:
  CurveFamily fam_;
  int weighted_degree_ = 0;
};

// A2 closed forms, used by the scanner fast path.
inline __int128 disc_a2(__int128 p2, __int128 p3) { return -4 * p2 * p2 * p2 - 27 * p3 * p3; }

}  // namespace ade::curvefam
