#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ade/rational.hpp"
#include "json.hpp"

namespace ade::rootsys {

enum class Kind { A, D, E };

struct DynkinType {
  Kind kind = Kind::A;
  int rank = 2;

  // Throws InvalidRank unless A_n (n >= 2), D_n (n >= 4) or E_6, E_7, E_8.
  static DynkinType make(Kind kind, int rank);
  // Accepts "A2", "D5", "E8" (case-insensitive kind letter).
  static DynkinType parse(std::string_view text);

  std::string name() const;
  friend bool operator==(const DynkinType&, const DynkinType&) = default;
};

using Root = std::vector<int>;  // coordinates in the simple-root basis

struct RootSystem {
  DynkinType type;
  std::vector<std::vector<int>> cartan;
  std::vector<Root> simple_roots;
  std::vector<Root> positive_roots;  // sorted by height, then lexicographically

  int rank() const { return type.rank; }
  int height(const Root& r) const;
  int inner(const Root& a, const Root& b) const;
  std::size_t root_count() const { return 2 * positive_roots.size(); }
  std::vector<Root> all_roots() const;
};

std::vector<std::vector<int>> cartan_matrix(DynkinType type);
RootSystem build_root_system(DynkinType type);

// Simple reflection s_i applied to a vector in the simple-root basis.
Root reflect(const RootSystem& rs, int i, const Root& v);

// Reduced word of the longest Weyl element, found by walking 2*rho to the
// antidominant chamber. With prefer_last the largest eligible node is taken
// at each step, which yields a different word for the same element.
std::vector<int> longest_element_word(const RootSystem& rs, bool prefer_last = false);

// theta[i] is the node that simple root i is sent to by -w0.
std::vector<int> pinned_automorphism(DynkinType type);

enum class RootCase { GOnly, VOnly, Mixed };
std::string to_string(RootCase c);

struct RestrictedRoot {
  std::vector<Root> orbit;      // one or two roots of the theta-orbit
  int height = 0;
  RootCase rcase = RootCase::GOnly;
  int v_multiplicity = 0;
  std::vector<int> restricted;  // coordinates on the theta-orbits of simple roots
};

struct GradedData {
  DynkinType type;
  std::vector<int> theta;
  std::vector<std::vector<int>> simple_orbits;  // ordered by smallest node
  int h_dim = 0;
  int theta_fixed_dim = 0;
  int v_dim = 0;
  int v0_dim = 0;
  std::vector<RestrictedRoot> restricted_roots;
  std::vector<std::vector<int>> g_root_basis;  // S_G in restricted coordinates
  std::vector<std::string> g_root_labels;
};

GradedData graded_decomposition(DynkinType type);

// Simple roots of the positive G-roots, computed from the decomposition.
std::vector<std::vector<int>> indecomposable_g_roots(const GradedData& gd);

struct WeightVector {
  std::vector<Rat> coords;  // in the basis S_G
  int height = 0;
};

// One weight per coordinate of V, including the zero weights of V_0.
std::vector<WeightVector> v_weights(DynkinType type);

struct W0Coordinates {
  std::vector<RestrictedRoot> coords;   // V-contributing restricted roots of height <= 1
  std::vector<std::size_t> height_one;  // indices into coords
  int v0_dim = 0;
};

W0Coordinates w0_coordinates(DynkinType type);

struct CuspExponents {
  DynkinType type;
  std::vector<Rat> volume_exponents;  // sum of negative V-weights, S_G basis
  std::vector<Rat> delta_exponents;   // 2 rho_G, S_G basis
  std::vector<Rat> z_exponents;
  std::vector<std::vector<int>> height_one_weights;  // restricted coordinates, beta order
  int negative_weight_count = 0;
  int w_flat_dim = 0;
  int x_power = 0;
};

CuspExponents cusp_exponents(DynkinType type);

// Tabulated exponents for D and E types, as closed forms in n for D_{2n+1}
// and D_{2n}. delta for D_{2n} is stated with positive exponents.
struct ReferenceExponents {
  std::vector<Rat> volume;
  std::vector<Rat> delta;
  std::vector<int> z;
  int x_power = 0;
};

std::optional<ReferenceExponents> reference_exponents(DynkinType type);

struct ExponentReport {
  CuspExponents exponents;
  int v_dim = 0;
  bool matched_reference = false;
  std::vector<int> beta_pairing;  // beta_j -> index of its simple-root theta-orbit
};

// Throws IdentityFailure naming the first mismatching coordinate.
ExponentReport verify_exponent_identity(DynkinType type);

nlohmann::json to_json(const ExponentReport& report);

}  // namespace ade::rootsys
