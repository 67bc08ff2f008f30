#pragma once

// Collineations of PG(3,q^2) and the group G = PSL(2,q) stabilizing the conic
// C, plus generic orbit / stabilizer machinery over an integer-labelled domain.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "h3q/field.hpp"
#include "h3q/geometry.hpp"
#include "h3q/hermitian.hpp"

namespace h3q {

using Mat4 = std::array<Vec4, 4>;  // rows

/// x -> M * x^(q^frob). Points are column vectors, acted on from the left.
struct Collineation {
  Mat4 matrix{};
  bool frob = false;
  friend constexpr auto operator<=>(const Collineation&, const Collineation&) = default;
};

inline Collineation identity_collineation() {
  Collineation g;
  for (std::size_t i = 0; i < 4; ++i) g.matrix[i][i] = Field::one();
  return g;
}

/// Unnormalized image vector.
inline Vec4 act(const Field& f, const Collineation& g, Vec4 x) {
  if (g.frob)
    for (auto& c : x) c = f.frob(c);
  Vec4 y{};
  for (std::size_t i = 0; i < 4; ++i) y[i] = dot(f, g.matrix[i], x);
  return y;
}

inline PointId apply(const Space& s, const Collineation& g, PointId p) {
  return s.point(act(s.field(), g, s.coords(p)));
}

inline Line apply_line(const Space& s, const Collineation& g, const Line& l) {
  return s.line_span(apply(s, g, l.lo), apply(s, g, l.hi));
}

/// g after h.
inline Collineation compose(const Field& f, const Collineation& g, const Collineation& h) {
  // g(h(x)) = Mg (Mh x^h)^g = Mg Mh^g x^(g+h)
  Collineation r;
  r.frob = g.frob != h.frob;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      Elem s{};
      for (std::size_t k = 0; k < 4; ++k) {
        const Elem hk = g.frob ? f.frob(h.matrix[k][j]) : h.matrix[k][j];
        s = f.add(s, f.mul(g.matrix[i][k], hk));
      }
      r.matrix[i][j] = s;
    }
  return r;
}

/// Images of the standard frame e0..e3, e0+e1+e2+e3 plus the frob flag. Two
/// collineations act identically on PG(3,q^2) iff their signatures agree.
inline std::array<std::uint32_t, 6> action_signature(const Space& s, const Collineation& g) {
  std::array<std::uint32_t, 6> sig{};
  for (std::size_t i = 0; i < 4; ++i) {
    Vec4 e{};
    e[i] = Field::one();
    sig[i] = s.point(act(s.field(), g, e)).v;
  }
  sig[4] = s.point(act(s.field(), g, {Field::one(), Field::one(), Field::one(), Field::one()})).v;
  sig[5] = g.frob ? 1u : 0u;
  return sig;
}

inline bool same_action(const Space& s, const Collineation& g, const Collineation& h) {
  return action_signature(s, g) == action_signature(s, h);
}

/// Image in G of [[a, b], [c, d]] in SL(2,q).
inline Collineation element_from_sl2(const Field& f, Elem a, Elem b, Elem c, Elem d) {
  for (Elem x : {a, b, c, d})
    if (!f.in_subfield(x)) throw std::invalid_argument("SL(2,q) entries must lie in GF(q)");
  if (f.add(f.mul(a, d), f.mul(b, c)) != Field::one()) throw std::invalid_argument("ad + bc must equal 1");
  const Elem s = f.sigma();
  Collineation g;
  g.matrix = {{
      {f.sqr(a), Field::zero(), f.mul(s, f.mul(a, b)), f.sqr(b)},
      {f.mul(a, c), Field::one(), f.mul(s, f.mul(b, c)), f.mul(b, d)},
      {Field::zero(), Field::zero(), Field::one(), Field::zero()},
      {f.sqr(c), Field::zero(), f.mul(s, f.mul(c, d)), f.sqr(d)},
  }};
  return g;
}

/// The Frobenius collineation (X_i) -> (X_i^q).
inline Collineation tau() {
  Collineation g = identity_collineation();
  g.frob = true;
  return g;
}

/// Symplectic transvection centred on N: identity with entry (X1 row, X2 column) = v.
inline Collineation transvection(const Field& f, Elem v) {
  if (!f.in_subfield(v)) throw std::invalid_argument("transvection parameter must lie in GF(q)");
  Collineation g = identity_collineation();
  g.matrix[1][2] = v;
  return g;
}

/// The symmetry s on N: the transvection with parameter sigma.
inline Collineation symmetry(const Field& f) { return transvection(f, f.sigma()); }

struct Sl2Entry {
  Elem a, b, c, d;
};

/// G = PSL(2,q) as 4x4 matrices, with the SL(2,q) preimage of each element.
class Group {
 public:
  Group(std::vector<Collineation> elems, std::vector<Sl2Entry> params)
      : elems_(std::move(elems)), params_(std::move(params)) {}

  std::size_t order() const { return elems_.size(); }
  const Collineation& operator[](std::size_t i) const { return elems_[i]; }
  std::span<const Collineation> elements() const { return elems_; }
  const Sl2Entry& sl2(std::size_t i) const { return params_[i]; }

 private:
  std::vector<Collineation> elems_;
  std::vector<Sl2Entry> params_;
};

/// All q(q^2-1) elements: a != 0 with d = (1 + bc)/a, and a = 0 with bc = 1.
inline Group enumerate_group(const Space& s) {
  const Field& f = s.field();
  const std::uint32_t q = f.q();
  std::vector<Collineation> elems;
  std::vector<Sl2Entry> params;
  auto push = [&](Elem a, Elem b, Elem c, Elem d) {
    elems.push_back(element_from_sl2(f, a, b, c, d));
    params.push_back({a, b, c, d});
  };
  for (std::uint32_t a = 1; a < q; ++a)
    for (std::uint32_t b = 0; b < q; ++b)
      for (std::uint32_t c = 0; c < q; ++c)
        push(Elem{a}, Elem{b}, Elem{c}, f.div(f.add(Field::one(), f.mul(Elem{b}, Elem{c})), Elem{a}));
  for (std::uint32_t b = 1; b < q; ++b)
    for (std::uint32_t d = 0; d < q; ++d) push(Field::zero(), Elem{b}, f.inv(Elem{b}), Elem{d});

  std::vector<std::array<std::uint32_t, 6>> sigs;
  sigs.reserve(elems.size());
  for (const auto& g : elems) sigs.push_back(action_signature(s, g));
  std::sort(sigs.begin(), sigs.end());
  if (std::adjacent_find(sigs.begin(), sigs.end()) != sigs.end())
    throw InvariantError("duplicate collineation in G");
  if (elems.size() != std::size_t{q} * (std::size_t{q} * q - 1)) throw InvariantError("|G| != q(q^2-1)");
  return Group(std::move(elems), std::move(params));
}

// --- orbits ---

struct Orbit {
  std::uint32_t representative = 0;   ///< least member
  std::vector<std::uint32_t> members; ///< ascending
  std::size_t stabilizer_order = 0;   ///< counted directly on the representative
};

struct OrbitDecomposition {
  std::vector<Orbit> orbits;  ///< ascending by representative

  std::size_t total() const {
    std::size_t t = 0;
    for (const auto& o : orbits) t += o.members.size();
    return t;
  }

  /// length -> number of orbits of that length
  std::map<std::size_t, std::size_t> length_histogram() const {
    std::map<std::size_t, std::size_t> h;
    for (const auto& o : orbits) ++h[o.members.size()];
    return h;
  }
};

/// Orbit of x under a complete group given by `act(element index, x)`: the
/// image set of x.
template <class Act>
std::vector<std::uint32_t> orbit_of(std::uint32_t x, std::size_t group_order, Act&& act) {
  std::vector<std::uint32_t> out;
  out.reserve(group_order);
  for (std::size_t g = 0; g < group_order; ++g) out.push_back(act(g, x));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Orbit of x under the group generated by `num_generators` maps, by
/// breadth-first search.
template <class Act>
std::vector<std::uint32_t> orbit_bfs(std::uint32_t x, std::size_t num_generators, Act&& act) {
  std::unordered_set<std::uint32_t> seen{x};
  std::vector<std::uint32_t> frontier{x};
  while (!frontier.empty()) {
    std::vector<std::uint32_t> next;
    for (auto y : frontier)
      for (std::size_t g = 0; g < num_generators; ++g) {
        const std::uint32_t z = act(g, y);
        if (seen.insert(z).second) next.push_back(z);
      }
    frontier = std::move(next);
  }
  std::vector<std::uint32_t> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

template <class Act>
std::vector<std::size_t> stabilizer_of(std::uint32_t x, std::size_t group_order, Act&& act) {
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < group_order; ++g)
    if (act(g, x) == x) out.push_back(g);
  return out;
}

/// Partition of a G-invariant domain (ascending ids) into orbits.
template <class Act>
OrbitDecomposition orbit_decomposition(std::span<const std::uint32_t> domain, std::size_t group_order, Act&& act) {
  if (!std::is_sorted(domain.begin(), domain.end())) throw std::invalid_argument("domain must be sorted");
  std::vector<bool> done(domain.size(), false);
  auto position = [&](std::uint32_t x) -> std::size_t {
    auto it = std::lower_bound(domain.begin(), domain.end(), x);
    if (it == domain.end() || *it != x)
      throw std::invalid_argument("domain is not closed under the action (image " + std::to_string(x) + ")");
    return static_cast<std::size_t>(it - domain.begin());
  };
  OrbitDecomposition out;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (done[i]) continue;
    Orbit o;
    o.representative = domain[i];
    o.members = orbit_of(domain[i], group_order, act);
    for (auto m : o.members) done[position(m)] = true;
    o.stabilizer_order = stabilizer_of(domain[i], group_order, act).size();
    if (o.stabilizer_order * o.members.size() != group_order)
      throw InvariantError("orbit-stabilizer product differs from the group order");
    out.orbits.push_back(std::move(o));
  }
  return out;
}

/// Action of a list of collineations on point ids.
struct PointAction {
  const Space* space;
  std::span<const Collineation> elems;
  std::uint32_t operator()(std::size_t g, std::uint32_t p) const {
    return apply(*space, elems[g], PointId{p}).v;
  }
};

/// Action of a list of collineations on generator indices of a surface.
struct GeneratorAction {
  const Surface* surface;
  std::span<const Collineation> elems;
  std::uint32_t operator()(std::size_t g, std::uint32_t gen) const {
    const Line image = apply_line(surface->space(), elems[g], surface->generator(gen));
    const std::size_t idx = surface->generator_index(image);
    if (idx == Surface::npos) throw InvariantError("collineation does not preserve the generators");
    return static_cast<std::uint32_t>(idx);
  }
};

/// Image of a point set (ascending result).
inline std::vector<PointId> image_of(const Space& s, const Collineation& g, std::span<const PointId> pts) {
  std::vector<PointId> out;
  out.reserve(pts.size());
  for (auto p : pts) out.push_back(apply(s, g, p));
  std::sort(out.begin(), out.end());
  return out;
}

/// Whether g maps the set onto itself; `mask` is the membership mask of `pts`.
inline bool stabilizes(const Space& s, const Collineation& g, std::span<const PointId> pts,
                       const std::vector<bool>& mask) {
  return std::all_of(pts.begin(), pts.end(), [&](PointId p) { return mask[apply(s, g, p).v]; });
}

// --- inventories on H(3,q^2) ---

struct LineOrbit {
  Orbit orbit;  ///< members are generator indices
  GeneratorClass cls;
};

/// Orbits of G on the generators, each labelled by its position relative to W, C, N.
inline std::vector<LineOrbit> line_orbits(const Surface& s, const Group& g) {
  std::vector<std::uint32_t> dom(s.generator_count());
  for (std::size_t i = 0; i < dom.size(); ++i) dom[i] = static_cast<std::uint32_t>(i);
  auto dec = orbit_decomposition(std::span<const std::uint32_t>(dom), g.order(), GeneratorAction{&s, g.elements()});
  std::vector<LineOrbit> out;
  for (auto& o : dec.orbits) {
    const GeneratorClass cls = s.generator_class(o.representative);
    for (auto m : o.members)
      if (s.generator_class(m) != cls) throw InvariantError("line orbit mixes generator classes");
    out.push_back({std::move(o), cls});
  }
  return out;
}

struct PointOrbit {
  Orbit orbit;  ///< members are point ids
  /// class of the unique extended W-line through each member
  GeneratorClass cls;
};

/// The extended W-line through a point of H \ W.
inline std::size_t extended_line_through(const Surface& s, PointId p) {
  std::size_t found = Surface::npos;
  for (auto gen : s.generators_through(p))
    if (s.generator_class(gen) != GeneratorClass::skew) {
      if (found != Surface::npos) throw InvariantError("point off W on two extended W-lines");
      found = gen;
    }
  if (found == Surface::npos) throw InvariantError("point off W on no extended W-line");
  return found;
}

/// Orbits of G on H \ W.
inline std::vector<PointOrbit> point_orbits_off_w(const Surface& s, const Group& g) {
  std::vector<std::uint32_t> dom;
  for (auto p : s.points())
    if (!s.in_w(p)) dom.push_back(p.v);
  auto dec = orbit_decomposition(std::span<const std::uint32_t>(dom), g.order(), PointAction{&s.space(), g.elements()});
  std::vector<PointOrbit> out;
  for (auto& o : dec.orbits) {
    const GeneratorClass cls = s.generator_class(extended_line_through(s, PointId{o.representative}));
    out.push_back({std::move(o), cls});
  }
  return out;
}

}  // namespace h3q
