#include "ade/rootsys.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "ade/errors.hpp"

namespace ade::rootsys {

using ade::to_string;

DynkinType DynkinType::make(Kind kind, int rank) {
  bool ok = false;
  switch (kind) {
    case Kind::A: ok = rank >= 2; break;
    case Kind::D: ok = rank >= 4; break;
    case Kind::E: ok = rank >= 6 && rank <= 8; break;
  }
  if (!ok) {
    DynkinType t;
    t.kind = kind;
    t.rank = rank;
    throw InvalidRank("invalid rank for type " + t.name());
  }
  DynkinType t;
  t.kind = kind;
  t.rank = rank;
  return t;
}

DynkinType DynkinType::parse(std::string_view text) {
  if (text.size() < 2) throw ParseError("bad Dynkin type: " + std::string(text));
  char k = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
  std::string_view digits = text.substr(1);
  if (digits.front() == '(' && digits.back() == ')') digits = digits.substr(1, digits.size() - 2);
  int rank = 0;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ParseError("bad Dynkin type: " + std::string(text));
    rank = rank * 10 + (c - '0');
    if (rank > 1000) throw ParseError("bad Dynkin type: " + std::string(text));
  }
  if (digits.empty()) throw ParseError("bad Dynkin type: " + std::string(text));
  switch (k) {
    case 'A': return make(Kind::A, rank);
    case 'D': return make(Kind::D, rank);
    case 'E': return make(Kind::E, rank);
    default: throw ParseError("bad Dynkin type: " + std::string(text));
  }
}

std::string DynkinType::name() const {
  const char* k = kind == Kind::A ? "A" : kind == Kind::D ? "D" : "E";
  return k + std::to_string(rank);
}

int RootSystem::height(const Root& r) const {
  int h = 0;
  for (int c : r) h += c;
  return h;
}

int RootSystem::inner(const Root& a, const Root& b) const {
  int s = 0;
  const int n = rank();
  for (int i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < n; ++j) s += a[i] * cartan[i][j] * b[j];
  }
  return s;
}

std::vector<Root> RootSystem::all_roots() const {
  std::vector<Root> out = positive_roots;
  for (const Root& r : positive_roots) {
    Root neg(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) neg[i] = -r[i];
    out.push_back(std::move(neg));
  }
  return out;
}

std::vector<std::vector<int>> cartan_matrix(DynkinType type) {
  const int n = type.rank;
  std::vector<std::vector<int>> c(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i) c[i][i] = 2;
  auto edge = [&](int i, int j) { c[i][j] = c[j][i] = -1; };
  switch (type.kind) {
    case Kind::A:
      for (int i = 0; i + 1 < n; ++i) edge(i, i + 1);
      break;
    case Kind::D:
      for (int i = 0; i + 2 < n; ++i) edge(i, i + 1);
      edge(n - 3, n - 1);
      break;
    case Kind::E:
      // Bourbaki numbering: 1-3-4-5-...-n with 2 attached to 4.
      edge(0, 2);
      edge(1, 3);
      edge(2, 3);
      for (int i = 3; i + 1 < n; ++i) edge(i, i + 1);
      break;
  }
  return c;
}

RootSystem build_root_system(DynkinType type) {
  type = DynkinType::make(type.kind, type.rank);
  RootSystem rs;
  rs.type = type;
  rs.cartan = cartan_matrix(type);
  const int n = type.rank;
  for (int i = 0; i < n; ++i) {
    Root r(n, 0);
    r[i] = 1;
    rs.simple_roots.push_back(r);
  }
  // Simply laced: alpha + alpha_i is a root iff (alpha, alpha_i) = -1.
  std::set<Root> seen(rs.simple_roots.begin(), rs.simple_roots.end());
  std::vector<Root> frontier = rs.simple_roots;
  while (!frontier.empty()) {
    std::vector<Root> next;
    for (const Root& a : frontier) {
      for (int i = 0; i < n; ++i) {
        if (rs.inner(a, rs.simple_roots[i]) != -1) continue;
        Root b = a;
        ++b[i];
        if (seen.insert(b).second) next.push_back(std::move(b));
      }
    }
    frontier = std::move(next);
  }
  rs.positive_roots.assign(seen.begin(), seen.end());
  std::sort(rs.positive_roots.begin(), rs.positive_roots.end(),
            [&](const Root& a, const Root& b) {
              int ha = rs.height(a), hb = rs.height(b);
              return ha != hb ? ha < hb : a < b;
            });
  return rs;
}

Root reflect(const RootSystem& rs, int i, const Root& v) {
  int c = rs.inner(v, rs.simple_roots[i]);
  Root out = v;
  out[i] -= c;
  return out;
}

std::vector<int> longest_element_word(const RootSystem& rs, bool prefer_last) {
  const int n = rs.rank();
  Root v(n, 0);
  for (const Root& r : rs.positive_roots)
    for (int i = 0; i < n; ++i) v[i] += r[i];
  std::vector<int> word;
  for (;;) {
    int pick = -1;
    for (int k = 0; k < n; ++k) {
      int i = prefer_last ? n - 1 - k : k;
      if (rs.inner(v, rs.simple_roots[i]) > 0) {
        pick = i;
        break;
      }
    }
    if (pick < 0) break;
    v = reflect(rs, pick, v);
    word.push_back(pick);
  }
  return word;
}

std::vector<int> pinned_automorphism(DynkinType type) {
  RootSystem rs = build_root_system(type);
  std::vector<int> word = longest_element_word(rs);
  const int n = rs.rank();
  std::vector<int> theta(n, -1);
  for (int j = 0; j < n; ++j) {
    Root v = rs.simple_roots[j];
    for (int i : word) v = reflect(rs, i, v);
    for (int k = 0; k < n; ++k) {
      Root neg(n);
      for (int t = 0; t < n; ++t) neg[t] = -v[t];
      if (neg == rs.simple_roots[k]) theta[j] = k;
    }
    if (theta[j] < 0) throw Error("longest element does not permute -simple roots");
  }
  return theta;
}

std::string to_string(RootCase c) {
  switch (c) {
    case RootCase::GOnly: return "g-only";
    case RootCase::VOnly: return "v-only";
    case RootCase::Mixed: return "mixed";
  }
  return "?";
}

namespace {

Root apply_theta(const std::vector<int>& theta, const Root& r) {
  Root out(r.size(), 0);
  for (std::size_t i = 0; i < r.size(); ++i) out[theta[i]] += r[i];
  return out;
}

struct Basis {
  std::vector<std::vector<int>> nodes;  // 1-based node lists
  std::vector<std::string> labels;
};

// Fixed change of basis for D and E types; each entry is a G-root written
// as a sum of simple roots.
std::optional<Basis> fixed_g_basis(DynkinType t) {
  Basis b;
  auto gamma = [&](std::vector<std::vector<int>> g) {
    b.nodes = std::move(g);
    for (std::size_t i = 0; i < b.nodes.size(); ++i)
      b.labels.push_back("gamma" + std::to_string(i + 1));
  };
  if (t.kind == Kind::E) {
    if (t.rank == 6) gamma({{3, 4}, {1}, {3}, {2, 4}});
    if (t.rank == 7) gamma({{3, 4}, {5, 6}, {2, 4}, {1, 3}, {4, 5}, {6, 7}, {2, 3, 4, 5}});
    if (t.rank == 8)
      gamma({{2, 3, 4, 5}, {6, 7}, {4, 5}, {1, 3}, {2, 4}, {5, 6}, {7, 8}, {3, 4}});
    return b;
  }
  if (t.kind != Kind::D) return std::nullopt;
  const int n = t.rank / 2;
  if (t.rank % 2 == 1) {
    for (int i = 1; i <= n; ++i) {
      b.nodes.push_back({2 * i - 1, 2 * i});
      b.labels.push_back("alpha" + std::to_string(i));
    }
    for (int i = 1; i < n; ++i) {
      b.nodes.push_back({2 * i, 2 * i + 1});
      b.labels.push_back("gamma" + std::to_string(i));
    }
    b.nodes.push_back({2 * n});
    b.labels.push_back("gamma" + std::to_string(n));
  } else {
    for (int i = 1; i < n; ++i) {
      b.nodes.push_back({2 * i - 1, 2 * i});
      b.labels.push_back("alpha" + std::to_string(i));
    }
    b.nodes.push_back({2 * n - 3, 2 * n - 2, 2 * n - 1, 2 * n});
    b.labels.push_back("alpha" + std::to_string(n));
    for (int i = 1; i < n; ++i) {
      b.nodes.push_back({2 * i, 2 * i + 1});
      b.labels.push_back("gamma" + std::to_string(i));
    }
    b.nodes.push_back({2 * n - 2, 2 * n});
    b.labels.push_back("gamma" + std::to_string(n));
  }
  return b;
}

std::vector<int> restrict_root(const std::vector<std::vector<int>>& orbits, const Root& r) {
  std::vector<int> out(orbits.size(), 0);
  for (std::size_t j = 0; j < orbits.size(); ++j)
    for (int node : orbits[j]) out[j] += r[node];
  return out;
}

bool all_nonneg(const std::vector<int>& v) {
  return std::all_of(v.begin(), v.end(), [](int x) { return x >= 0; });
}
bool all_nonpos(const std::vector<int>& v) {
  return std::all_of(v.begin(), v.end(), [](int x) { return x <= 0; });
}
bool is_zero(const std::vector<int>& v) {
  return std::all_of(v.begin(), v.end(), [](int x) { return x == 0; });
}

std::vector<Rat> in_basis(const std::vector<std::vector<int>>& basis, const std::vector<int>& w) {
  const std::size_t k = basis.size();
  std::vector<std::vector<Rat>> a(k, std::vector<Rat>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) a[i][j] = basis[j][i];
  std::vector<Rat> rhs(w.begin(), w.end());
  return solve_exact(std::move(a), std::move(rhs));
}

}  // namespace

std::vector<std::vector<int>> indecomposable_g_roots(const GradedData& gd) {
  std::set<std::vector<int>> pos;
  for (const RestrictedRoot& rr : gd.restricted_roots) {
    if (rr.rcase == RootCase::VOnly) continue;
    if (all_nonneg(rr.restricted) && !is_zero(rr.restricted)) pos.insert(rr.restricted);
  }
  std::vector<std::vector<int>> out;
  for (const auto& w : pos) {
    bool decomposable = false;
    for (const auto& u : pos) {
      std::vector<int> d(w.size());
      for (std::size_t i = 0; i < w.size(); ++i) d[i] = w[i] - u[i];
      if (pos.count(d)) {
        decomposable = true;
        break;
      }
    }
    if (!decomposable) out.push_back(w);
  }
  return out;
}

GradedData graded_decomposition(DynkinType type) {
  RootSystem rs = build_root_system(type);
  GradedData gd;
  gd.type = rs.type;
  gd.theta = pinned_automorphism(rs.type);
  const int n = rs.rank();

  std::set<std::vector<int>> orbit_set;
  for (int i = 0; i < n; ++i) {
    std::vector<int> o{i};
    if (gd.theta[i] != i) o.push_back(gd.theta[i]);
    std::sort(o.begin(), o.end());
    orbit_set.insert(o);
  }
  gd.simple_orbits.assign(orbit_set.begin(), orbit_set.end());
  const int k = static_cast<int>(gd.simple_orbits.size());

  std::vector<Root> roots = rs.all_roots();
  std::set<Root> root_set(roots.begin(), roots.end());
  std::set<Root> done;
  int g_count = 0;
  int v_count = 0;
  for (const Root& r : roots) {
    if (done.count(r)) continue;
    Root t = apply_theta(gd.theta, r);
    done.insert(r);
    done.insert(t);
    RestrictedRoot rr;
    rr.height = rs.height(r);
    rr.restricted = restrict_root(gd.simple_orbits, r);
    if (t == r) {
      rr.orbit = {r};
      // X_alpha picks up an extra sign when alpha = beta + theta(beta).
      int c = 1;
      for (const Root& b : roots) {
        Root tb = apply_theta(gd.theta, b);
        if (tb == b) continue;
        Root s(n);
        for (int i = 0; i < n; ++i) s[i] = b[i] + tb[i];
        if (s == r) {
          c = -1;
          break;
        }
      }
      int s = ((rr.height % 2 == 0) ? 1 : -1) * c;
      rr.rcase = s == 1 ? RootCase::GOnly : RootCase::VOnly;
      rr.v_multiplicity = s == 1 ? 0 : 1;
    } else {
      rr.orbit = {r, t};
      rr.rcase = RootCase::Mixed;
      rr.v_multiplicity = 1;
    }
    if (rr.rcase != RootCase::VOnly) ++g_count;
    v_count += rr.v_multiplicity;
    gd.restricted_roots.push_back(std::move(rr));
  }
  gd.h_dim = n + static_cast<int>(rs.root_count());
  gd.v0_dim = n - k;
  gd.v_dim = v_count + gd.v0_dim;
  gd.theta_fixed_dim = g_count + k;

  std::vector<std::vector<int>> simple = indecomposable_g_roots(gd);
  if (static_cast<int>(simple.size()) != k) throw Error("G-root system has unexpected rank");
  if (auto fixed = fixed_g_basis(gd.type)) {
    std::vector<std::vector<int>> mapped;
    for (const auto& nodes : fixed->nodes) {
      Root r(n, 0);
      for (int node : nodes) r[node - 1] += 1;
      if (!root_set.count(r)) throw Error("fixed basis element is not a root");
      mapped.push_back(restrict_root(gd.simple_orbits, r));
    }
    std::vector<std::vector<int>> a = mapped, b = simple;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw Error("fixed basis differs from the simple G-roots for " + gd.type.name());
    gd.g_root_basis = std::move(mapped);
    gd.g_root_labels = fixed->labels;
  } else {
    std::sort(simple.begin(), simple.end(), [](const auto& x, const auto& y) {
      int hx = 0, hy = 0;
      for (int c : x) hx += c;
      for (int c : y) hy += c;
      return hx != hy ? hx < hy : x > y;
    });
    gd.g_root_basis = simple;
    for (int i = 0; i < k; ++i) gd.g_root_labels.push_back("s" + std::to_string(i + 1));
  }
  return gd;
}

std::vector<WeightVector> v_weights(DynkinType type) {
  GradedData gd = graded_decomposition(type);
  std::vector<WeightVector> out;
  for (const RestrictedRoot& rr : gd.restricted_roots) {
    if (rr.v_multiplicity == 0) continue;
    out.push_back({in_basis(gd.g_root_basis, rr.restricted), rr.height});
  }
  const std::size_t k = gd.g_root_basis.size();
  for (int i = 0; i < gd.v0_dim; ++i) out.push_back({std::vector<Rat>(k, Rat(0)), 0});
  return out;
}

W0Coordinates w0_coordinates(DynkinType type) {
  GradedData gd = graded_decomposition(type);
  W0Coordinates w;
  w.v0_dim = gd.v0_dim;
  for (const RestrictedRoot& rr : gd.restricted_roots) {
    if (rr.v_multiplicity == 0 || rr.height > 1) continue;
    if (rr.height == 1) w.height_one.push_back(w.coords.size());
    w.coords.push_back(rr);
  }
  return w;
}

CuspExponents cusp_exponents(DynkinType type) {
  GradedData gd = graded_decomposition(type);
  const std::size_t k = gd.g_root_basis.size();
  CuspExponents ce;
  ce.type = gd.type;

  std::vector<int> vol(k, 0), two_rho(k, 0);
  for (const RestrictedRoot& rr : gd.restricted_roots) {
    if (rr.v_multiplicity == 1 && all_nonpos(rr.restricted) && !is_zero(rr.restricted)) {
      ++ce.negative_weight_count;
      for (std::size_t i = 0; i < k; ++i) vol[i] += rr.restricted[i];
    }
    if (rr.rcase != RootCase::VOnly && all_nonneg(rr.restricted) && !is_zero(rr.restricted))
      for (std::size_t i = 0; i < k; ++i) two_rho[i] += rr.restricted[i];
  }
  ce.volume_exponents = in_basis(gd.g_root_basis, vol);
  ce.delta_exponents = in_basis(gd.g_root_basis, two_rho);

  // Height-one V-weights, one per theta-orbit of simple roots.
  for (std::size_t j = 0; j < gd.simple_orbits.size(); ++j) {
    std::vector<int> e(k, 0);
    e[j] = 1;
    bool in_v = false;
    for (const RestrictedRoot& rr : gd.restricted_roots)
      if (rr.v_multiplicity == 1 && rr.restricted == e) in_v = true;
    if (in_v) ce.height_one_weights.push_back(e);
  }
  if (ce.height_one_weights.size() != k) throw Error("height-one weights do not span");

  std::vector<std::vector<Rat>> a(k, std::vector<Rat>(k));
  std::vector<Rat> rhs(k);
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<Rat> w = in_basis(gd.g_root_basis, ce.height_one_weights[j]);
    for (std::size_t i = 0; i < k; ++i) a[i][j] = w[i];
  }
  for (std::size_t i = 0; i < k; ++i) rhs[i] = -(ce.volume_exponents[i] + ce.delta_exponents[i]);
  ce.z_exponents = solve_exact(std::move(a), std::move(rhs));

  ce.w_flat_dim = ce.negative_weight_count + gd.v0_dim;
  Rat total = ce.w_flat_dim;
  for (const Rat& e : ce.z_exponents) total += e;
  if (total.get_den() != 1) throw Error("non-integral X-power");
  ce.x_power = static_cast<int>(total.get_num().get_si());
  return ce;
}

std::optional<ReferenceExponents> reference_exponents(DynkinType type) {
  ReferenceExponents ref;
  auto ints = [](std::initializer_list<int> v) { return std::vector<Rat>(v.begin(), v.end()); };
  if (type.kind == Kind::E) {
    if (type.rank == 6) {
      ref.volume = ints({-12, -18, -22, -12});
      ref.delta = ints({8, 14, 18, 10});
      ref.z = {4, 2, 8, 6};
      ref.x_power = 42;
    } else if (type.rank == 7) {
      ref.volume = {Rat(-15, 2), Rat(-13), Rat(-33, 2), Rat(-18), Rat(-35, 2), Rat(-15), Rat(-21, 2)};
      ref.delta = ints({7, 12, 15, 16, 15, 12, 7});
      ref.z = {2, 5, 6, 8, 7, 4, 3};
      ref.x_power = 70;
    } else {
      ref.volume = ints({-18, -30, -40, -48, -54, -58, -30, -30});
      ref.delta = ints({14, 26, 36, 44, 50, 54, 28, 28});
      ref.z = {4, 8, 10, 14, 12, 8, 6, 2};
      ref.x_power = 128;
    }
    return ref;
  }
  if (type.kind != Kind::D) return std::nullopt;
  const int n = type.rank / 2;
  if (type.rank % 2 == 1) {
    for (int i = 1; i <= n; ++i) ref.volume.push_back(-2 * i * n + i * i - 2 * i);
    for (int i = 1; i <= n; ++i) ref.volume.push_back(-2 * i * n + i * i);
    for (int rep = 0; rep < 2; ++rep)
      for (int i = 1; i <= n; ++i) ref.delta.push_back(2 * i * n - i * i);
    for (int i = 1; i <= n; ++i) {
      ref.z.push_back(2 * i);
      ref.z.push_back(2 * i);
    }
    ref.x_power = (2 * n + 1) * (2 * n + 1);
  } else {
    for (int i = 1; i <= n - 2; ++i) ref.volume.push_back(-2 * i * n + i * i - i);
    ref.volume.push_back(Rat(-n * n - n + 4, 2));
    ref.volume.push_back(Rat(-n * n - n, 2));
    for (int i = 1; i <= n - 2; ++i) ref.volume.push_back(-2 * i * n + i * i + i);
    ref.volume.push_back(Rat(-n * n + n, 2));
    ref.volume.push_back(Rat(-n * n + n, 2));
    for (int rep = 0; rep < 2; ++rep) {
      for (int i = 1; i <= n - 2; ++i) ref.delta.push_back(2 * i * n - i * i - i);
      ref.delta.push_back(Rat(n * (n - 1), 2));
      ref.delta.push_back(Rat(n * (n - 1), 2));
    }
    for (int i = 1; i <= n - 1; ++i) {
      ref.z.push_back(2 * i);
      ref.z.push_back(2 * i);
    }
    ref.z.push_back(n);
    ref.z.push_back(n);
    ref.x_power = 4 * n * n;
  }
  for (Rat& r : ref.volume) r.canonicalize();
  for (Rat& r : ref.delta) r.canonicalize();
  return ref;
}

ExponentReport verify_exponent_identity(DynkinType type) {
  GradedData gd = graded_decomposition(type);
  ExponentReport rep;
  rep.exponents = cusp_exponents(type);
  rep.v_dim = gd.v_dim;
  const CuspExponents& ce = rep.exponents;
  const std::string name = gd.type.name();
  const std::size_t k = gd.g_root_basis.size();

  for (std::size_t i = 0; i < k; ++i) {
    const Rat& e = ce.z_exponents[i];
    if (e.get_den() != 1 || e < 2)
      throw IdentityFailure(name, "z_exponents", static_cast<int>(i), "integer >= 2", to_string(e));
  }

  auto ref = reference_exponents(gd.type);
  std::vector<Rat> z = ce.z_exponents;
  if (ref) {
    for (std::size_t i = 0; i < k; ++i) {
      if (ce.volume_exponents[i] != ref->volume[i])
        throw IdentityFailure(name, "volume_exponents", static_cast<int>(i),
                              to_string(ref->volume[i]), to_string(ce.volume_exponents[i]));
      if (ce.delta_exponents[i] != ref->delta[i])
        throw IdentityFailure(name, "delta_exponents", static_cast<int>(i),
                              to_string(ref->delta[i]), to_string(ce.delta_exponents[i]));
      if (ce.z_exponents[i] != ref->z[i])
        throw IdentityFailure(name, "z_exponents", static_cast<int>(i), std::to_string(ref->z[i]),
                              to_string(ce.z_exponents[i]));
      z[i] = ref->z[i];
    }
  }

  // sum(Phi_V^-) + 2 rho_G + sum_i e_i w_i = 0 in the character lattice.
  for (std::size_t coord = 0; coord < k; ++coord) {
    Rat lhs = ce.volume_exponents[coord] + ce.delta_exponents[coord];
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<Rat> w = in_basis(gd.g_root_basis, ce.height_one_weights[j]);
      lhs += z[j] * w[coord];
    }
    if (lhs != 0)
      throw IdentityFailure(name, "character identity", static_cast<int>(coord), "0", to_string(lhs));
  }

  if (ce.x_power != gd.v_dim)
    throw IdentityFailure(name, "x_power", -1, std::to_string(gd.v_dim), std::to_string(ce.x_power));
  if (ref && ref->x_power != ce.x_power)
    throw IdentityFailure(name, "x_power", -1, std::to_string(ref->x_power),
                          std::to_string(ce.x_power));

  rep.matched_reference = ref.has_value();
  for (const auto& w : ce.height_one_weights)
    rep.beta_pairing.push_back(static_cast<int>(std::find(w.begin(), w.end(), 1) - w.begin()));
  return rep;
}

nlohmann::json to_json(const ExponentReport& report) {
  auto rats = [](const std::vector<Rat>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const Rat& r : v) a.push_back(to_string(r));
    return a;
  };
  const CuspExponents& ce = report.exponents;
  nlohmann::json z = nlohmann::json::array();
  for (const Rat& r : ce.z_exponents) z.push_back(r.get_num().get_si());
  GradedData gd = graded_decomposition(ce.type);
  return {
      {"type", ce.type.name()},
      {"volume_exponents", rats(ce.volume_exponents)},
      {"delta_exponents", rats(ce.delta_exponents)},
      {"z_exponents", z},
      {"x_power", ce.x_power},
      {"v_dim", report.v_dim},
      {"basis", gd.g_root_labels},
      {"negative_weight_count", ce.negative_weight_count},
      {"w_flat_dim", ce.w_flat_dim},
      {"beta_pairing", report.beta_pairing},
      {"matched_reference", report.matched_reference},
  };
}

}  // namespace ade::rootsys
