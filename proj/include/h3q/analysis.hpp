#pragma once

// Invariants that separate the constructed hyperovals from other known
// families, and verification of their automorphism group.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "h3q/field.hpp"
#include "h3q/geometry.hpp"
#include "h3q/group.hpp"
#include "h3q/hermitian.hpp"
#include "h3q/hyperoval.hpp"

namespace h3q {

// --- tangents to the conic ---

enum class PointRegion {
  conic,              ///< C
  nucleus,            ///< N
  quadric_off_conic,  ///< Q \ C
  delta0_rest,        ///< rational points of X2 = 0 outside C u {N}
  rational_rest,      ///< remaining rational points
  off_w,              ///< H \ W
};

inline const char* to_string(PointRegion r) {
  switch (r) {
    case PointRegion::conic: return "conic";
    case PointRegion::nucleus: return "nucleus";
    case PointRegion::quadric_off_conic: return "quadric_off_conic";
    case PointRegion::delta0_rest: return "delta0_rest";
    case PointRegion::rational_rest: return "rational_rest";
    case PointRegion::off_w: return "off_w";
  }
  return "?";
}

struct TangentSignature {
  PointId point;
  /// generators through the point that extend a W-line through a point of C
  std::uint32_t tangents = 0;
  PointRegion region = PointRegion::off_w;
};

inline bool is_conic_tangent(GeneratorClass c) {
  return c == GeneratorClass::nucleus_tangent || c == GeneratorClass::conic_tangent;
}

inline TangentSignature tangent_signature(const Surface& s, PointId p) {
  if (!s.contains(p)) throw std::invalid_argument("tangent_signature: point is not on the surface");
  TangentSignature sig{p, 0, PointRegion::off_w};
  for (auto gen : s.generators_through(p)) sig.tangents += is_conic_tangent(s.generator_class(gen)) ? 1u : 0u;
  if (s.in_c(p))
    sig.region = PointRegion::conic;
  else if (p == s.nucleus())
    sig.region = PointRegion::nucleus;
  else if (s.in_q(p))
    sig.region = PointRegion::quadric_off_conic;
  else if (s.in_w(p))
    sig.region = s.space().coords(p)[2].v == 0 ? PointRegion::delta0_rest : PointRegion::rational_rest;
  return sig;
}

/// Generators meeting C that extend W-lines: the (q+1)^2 conic tangents.
inline std::vector<std::size_t> conic_tangent_generators(const Surface& s) {
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < s.generator_count(); ++g)
    if (is_conic_tangent(s.generator_class(g))) out.push_back(g);
  return out;
}

/// Generators disjoint from the set.
inline std::vector<std::size_t> skew_generators(const Surface& s, std::span<const PointId> pts) {
  const auto mask = membership(s.space(), pts);
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < s.generator_count(); ++g)
    if (meet_count(s, g, mask) == 0) out.push_back(g);
  return out;
}

// --- chords and secant planes ---

/// true iff two distinct secant (non-tangent) planes have Hermitian-curve
/// sections that jointly cover `pts`. Only meaningful at q = 2.
inline bool secant_plane_cover(const Surface& s, std::span<const PointId> pts) {
  if (s.field().q() != 2) throw std::invalid_argument("secant_plane_cover is only defined for q = 2");
  const std::size_t words = (pts.size() + 63) / 64;
  std::vector<std::vector<std::uint64_t>> covers;
  for (const auto& pi : s.space().all_planes()) {
    if (s.is_tangent_plane(pi)) continue;
    std::vector<std::uint64_t> bits(words, 0);
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (s.contains(pts[i]) && s.space().on_plane(pi, pts[i])) bits[i / 64] |= std::uint64_t{1} << (i % 64);
    covers.push_back(std::move(bits));
  }
  for (std::size_t a = 0; a < covers.size(); ++a)
    for (std::size_t b = a + 1; b < covers.size(); ++b) {
      bool all = true;
      for (std::size_t w = 0; w < words && all; ++w) {
        const std::uint64_t need =
            (w + 1 < words || pts.size() % 64 == 0) ? ~std::uint64_t{0} : (std::uint64_t{1} << (pts.size() % 64)) - 1;
        all = ((covers[a][w] | covers[b][w]) & need) == need;
      }
      if (all) return true;
    }
  return false;
}

struct ChordReport {
  std::uint32_t max_collinear = 0;
  std::uint32_t chord_size = 0;  ///< q + 1
  /// max_collinear < q + 1, so no line section of size q + 1 lies in the set
  bool no_chord = false;
  /// q = 2 only: the set does not lie on two secant plane sections
  std::optional<bool> secant_cover;
};

inline ChordReport chord_discriminator(const Surface& s, std::span<const PointId> pts) {
  ChordReport r;
  r.max_collinear = max_collinear(s.space(), pts);
  r.chord_size = s.field().q() + 1;
  r.no_chord = r.max_collinear < r.chord_size;
  if (s.field().q() == 2) r.secant_cover = secant_plane_cover(s, pts);
  return r;
}

// --- automorphisms ---

struct StabilizerReport {
  std::size_t checked = 0;         ///< 4 |G|
  std::size_t stabilizing = 0;     ///< how many of them fix O
  std::size_t distinct = 0;        ///< how many of them act differently
  bool symmetry_stabilizes = false;
  bool tau_stabilizes = false;
  /// transvection(v) fixes O exactly for v in {0, sigma}
  std::vector<Elem> surviving_transvections;
  /// every transvection with v outside {0, sigma} sends (xi,0,1,xi) off Q_xi u Q_{xi^q}
  bool others_leave_quadrics = false;
  /// T = {transvection(v)} is a group of order q containing S = {1, s}
  bool transvection_chain = false;
  /// s commutes with every element of G and with tau
  bool symmetry_central = false;
  /// s(P) = g(P) for P = (xi,0,1,xi) and g the image of [[0,1],[1,0]]
  bool symmetry_matches_group_element = false;

  std::size_t order() const { return stabilizing; }
  bool ok(const Field& f) const {
    return stabilizing == checked && distinct == checked && symmetry_stabilizes && tau_stabilizes &&
           surviving_transvections == std::vector<Elem>{Field::zero(), f.sigma()} && others_leave_quadrics &&
           transvection_chain && symmetry_central && symmetry_matches_group_element;
  }
};

/// The collineations g s^a tau^b, g in G, a, b in {0, 1}, in that order.
inline std::vector<Collineation> known_automorphism_list(const Field& f, const Group& g) {
  std::vector<Collineation> out;
  out.reserve(4 * g.order());
  const Collineation s = symmetry(f);
  const Collineation t = tau();
  for (const auto& h : g.elements())
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        Collineation x = h;
        if (a) x = compose(f, x, s);
        if (b) x = compose(f, x, t);
        out.push_back(x);
      }
  return out;
}

inline StabilizerReport known_automorphisms(const Surface& s, const Group& g, const PointSet& o) {
  const Field& f = s.field();
  const Space& sp = s.space();
  const auto mask = membership(sp, o.points);
  StabilizerReport r;
  std::set<std::array<std::uint32_t, 6>> sigs;
  for (const auto& x : known_automorphism_list(f, g)) {
    ++r.checked;
    r.stabilizing += stabilizes(sp, x, o.points, mask) ? 1 : 0;
    sigs.insert(action_signature(sp, x));
  }
  r.distinct = sigs.size();
  const Collineation sym = symmetry(f);
  r.symmetry_stabilizes = stabilizes(sp, sym, o.points, mask);
  r.tau_stabilizes = stabilizes(sp, tau(), o.points, mask);

  const PointId p = base_point(sp, o.xi);
  const Elem xq = f.frob(o.xi);
  r.others_leave_quadrics = true;
  std::vector<std::array<std::uint32_t, 6>> tsigs;
  for (std::uint32_t v = 0; v < f.q(); ++v) {
    const Collineation t = transvection(f, Elem{v});
    tsigs.push_back(action_signature(sp, t));
    if (stabilizes(sp, t, o.points, mask)) r.surviving_transvections.push_back(Elem{v});
    if (v != 0 && Elem{v} != f.sigma()) {
      const PointId tp = apply(sp, t, p);
      if (s.on_quadric_xi(o.xi, tp) || s.on_quadric_xi(xq, tp)) r.others_leave_quadrics = false;
    }
  }
  std::sort(tsigs.begin(), tsigs.end());
  bool closed = std::adjacent_find(tsigs.begin(), tsigs.end()) == tsigs.end();
  for (std::uint32_t a = 0; a < f.q() && closed; ++a)
    for (std::uint32_t b = 0; b < f.q() && closed; ++b) {
      const auto prod = compose(f, transvection(f, Elem{a}), transvection(f, Elem{b}));
      closed = std::binary_search(tsigs.begin(), tsigs.end(), action_signature(sp, prod));
    }
  const bool s_in_t = std::binary_search(tsigs.begin(), tsigs.end(), action_signature(sp, sym));
  const bool s_involution = same_action(sp, compose(f, sym, sym), identity_collineation());
  r.transvection_chain = closed && tsigs.size() == f.q() && s_in_t && s_involution;

  r.symmetry_central = same_action(sp, compose(f, sym, tau()), compose(f, tau(), sym));
  for (const auto& h : g.elements())
    if (!same_action(sp, compose(f, sym, h), compose(f, h, sym))) r.symmetry_central = false;

  const Collineation swap = element_from_sl2(f, Field::zero(), Field::one(), Field::one(), Field::zero());
  r.symmetry_matches_group_element = apply(sp, sym, p) == apply(sp, swap, p);
  return r;
}

namespace detail {

/// Calls fn(matrix) for every 4x4 matrix whose columns c_0..c_3 satisfy
/// form(c_i, c_j) = form(e_i, e_j), the columns drawn from `pool`. The form must
/// be symmetric or Hermitian with a GF(q)-valued Gram matrix, so only one of
/// form(c_i, c_j), form(c_j, c_i) needs checking.
template <class Form, class Fn>
void for_each_isometry(std::span<const Vec4> pool, Form&& form, Fn&& fn) {
  std::array<Vec4, 4> e{};
  for (std::size_t i = 0; i < 4; ++i) e[i][i] = Field::one();
  std::array<std::array<Elem, 4>, 4> gram{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) gram[i][j] = form(e[i], e[j]);
  const std::array<std::size_t, 4> order{0, 3, 1, 2};
  std::array<Vec4, 4> cols{};
  std::function<void(std::size_t)> rec = [&](std::size_t level) {
    if (level == 4) {
      Mat4 m{};
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) m[i][j] = cols[j][i];
      fn(m);
      return;
    }
    const std::size_t c = order[level];
    for (const auto& v : pool) {
      if (form(v, v) != gram[c][c]) continue;
      bool ok = true;
      for (std::size_t l = 0; l < level && ok; ++l) {
        const std::size_t d = order[l];
        ok = form(cols[d], v) == gram[d][c];
      }
      if (!ok) continue;
      cols[c] = v;
      rec(level + 1);
    }
  };
  rec(0);
}

inline std::vector<Vec4> nonzero_vectors(std::uint32_t alphabet) {
  std::vector<Vec4> out;
  const std::uint64_t n = std::uint64_t{alphabet} * alphabet * alphabet * alphabet;
  for (std::uint64_t t = 1; t < n; ++t) {
    Vec4 v{};
    std::uint64_t r = t;
    for (std::size_t i = 0; i < 4; ++i) {
      v[i] = Elem{static_cast<std::uint32_t>(r % alphabet)};
      r /= alphabet;
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace detail

/// Calls fn(collineation) for each element of PSp(4,q) x {1, tau}; returns the count.
template <class Fn>
std::size_t for_each_symplectic_collineation(const Surface& s, Fn&& fn) {
  const Field& f = s.field();
  const auto pool = detail::nonzero_vectors(f.q());
  auto alt = [&](const Vec4& x, const Vec4& y) {
    const Elem a = f.add(f.mul(x[0], y[3]), f.mul(x[3], y[0]));
    return f.add(a, f.mul(f.sigma(), f.add(f.mul(x[1], y[2]), f.mul(x[2], y[1]))));
  };
  std::size_t n = 0;
  detail::for_each_isometry(pool, alt, [&](const Mat4& m) {
    for (bool fr : {false, true}) {
      fn(Collineation{m, fr});
      ++n;
    }
  });
  return n;
}

/// Calls fn(collineation, weight) for each matrix of GU(4,q) (with and without
/// tau). Each collineation of PGammaU(4,q^2) is visited q+1 times, once per
/// unitary scalar. Returns the number of calls.
template <class Fn>
std::size_t for_each_unitary_matrix(const Surface& s, Fn&& fn) {
  const auto pool = detail::nonzero_vectors(s.field().q2());
  auto herm = [&](const Vec4& x, const Vec4& y) { return s.form(x, y); };
  std::size_t n = 0;
  detail::for_each_isometry(pool, herm, [&](const Mat4& m) {
    for (bool fr : {false, true}) {
      fn(Collineation{m, fr});
      ++n;
    }
  });
  return n;
}

inline std::uint64_t symplectic_group_order(std::uint64_t q) { return q * q * q * q * (q * q - 1) * (q * q * q * q - 1); }

inline std::uint64_t unitary_group_order(std::uint64_t q) {
  return q * q * q * q * q * q * (q + 1) * (q * q - 1) * (q * q * q + 1) * (q * q * q * q - 1);
}

struct BruteForceReport {
  std::string ambient;             ///< "PGammaU(4,q^2)" or "<PSp(4,q),tau>"
  std::uint64_t ambient_order = 0; ///< collineations examined
  std::uint64_t order = 0;         ///< stabilizer order
  bool conditional = false;        ///< true when restricted to the symplectic-extended group
  bool contains_known = false;     ///< G x {1,s} x {1,tau} lies inside the stabilizer
  bool fixes_w = false;            ///< every stabilizing element preserves PG(3,q)
};

/// Exact stabilizer of O: over PGammaU(4,4) at q = 2, over <PSp(4,4), tau> at q = 4.
inline BruteForceReport full_stabilizer_bruteforce(const Surface& s, const Group& g, const PointSet& o) {
  const Field& f = s.field();
  const Space& sp = s.space();
  const std::uint32_t q = f.q();
  if (q > 4) throw std::invalid_argument("brute-force stabilizer is limited to q <= 4");
  const auto mask = membership(sp, o.points);
  const PointId first = o.points.front();
  std::set<std::array<std::uint32_t, 6>> found;
  auto visit = [&](const Collineation& x) {
    if (!mask[apply(sp, x, first).v]) return;
    if (stabilizes(sp, x, o.points, mask)) found.insert(action_signature(sp, x));
  };
  BruteForceReport r;
  if (q == 2) {
    r.ambient = "PGammaU(4,q^2)";
    const std::size_t calls = for_each_unitary_matrix(s, visit);
    if (calls != 2 * unitary_group_order(q)) throw InvariantError("GU(4,q) enumeration has the wrong size");
    r.ambient_order = calls / (q + 1);
  } else {
    r.ambient = "<PSp(4,q),tau>";
    r.conditional = true;
    const std::size_t calls = for_each_symplectic_collineation(s, visit);
    if (calls != 2 * symplectic_group_order(q)) throw InvariantError("Sp(4,q) enumeration has the wrong size");
    r.ambient_order = calls;
  }
  r.order = found.size();
  r.contains_known = true;
  for (const auto& x : known_automorphism_list(f, g))
    if (!found.count(action_signature(sp, x))) r.contains_known = false;
  // A collineation preserving PG(3,q) maps the frame (rational) to rational points.
  r.fixes_w = std::all_of(found.begin(), found.end(), [&](const auto& sig) {
    for (std::size_t i = 0; i < 5; ++i)
      if (!s.in_w(PointId{sig[i]})) return false;
    return true;
  });
  return r;
}

/// A collineation of <PSp(4,q), tau> mapping one point set onto another (q <= 4).
inline std::optional<Collineation> find_symplectic_equivalence(const Surface& s, std::span<const PointId> from,
                                                               std::span<const PointId> to) {
  if (s.field().q() > 4) throw std::invalid_argument("equivalence search is limited to q <= 4");
  if (from.size() != to.size() || from.empty()) return std::nullopt;
  const Space& sp = s.space();
  const auto mask = membership(sp, to);
  std::optional<Collineation> hit;
  for_each_symplectic_collineation(s, [&](const Collineation& x) {
    if (hit || !mask[apply(sp, x, from.front()).v]) return;
    if (stabilizes(sp, x, from, mask)) hit = x;
  });
  return hit;
}

// --- size bounds for hyperovals of a GQ(s,t) ---

struct BoundsReport {
  bool even = false;
  bool lower = false;           ///< size >= 2(t+1)
  bool lower_equality = false;
  bool middle = false;          ///< size >= (t-s+2)(s+1)
  bool upper = false;           ///< size <= 2(st+1)
  bool upper_equality = false;
  bool ok() const { return even && lower && middle && upper; }
};

inline BoundsReport debruyn_bounds(std::int64_t size, std::int64_t s, std::int64_t t) {
  BoundsReport b;
  b.even = size % 2 == 0;
  b.lower = size >= 2 * (t + 1);
  b.lower_equality = size == 2 * (t + 1);
  b.middle = size >= (t - s + 2) * (s + 1);
  b.upper = size <= 2 * (s * t + 1);
  b.upper_equality = size == 2 * (s * t + 1);
  return b;
}

}  // namespace h3q
