#pragma once

// Hyperovals I_xi u I_xi^tau of H(3,q^2), where I_xi is the G-orbit of the
// point (xi, 0, 1, xi), xi in GF(q^2) \ GF(q).

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "h3q/field.hpp"
#include "h3q/geometry.hpp"
#include "h3q/group.hpp"
#include "h3q/hermitian.hpp"

namespace h3q {

/// Six independent tests of whether Q_xi is hyperbolic. All must agree.
struct XiClass {
  Elem xi;
  /// true = "hyperbolic / reducible / trace 0" for each test, in order:
  ///  [0] point count of Q_xi
  ///  [1] point count of Q_{xi^q}
  ///  [2] Tr_{GF(q^2)}(xi^2 / sigma^2) = 0
  ///  [3] x^2 + (sigma/xi) x + 1 reducible over GF(q^2)
  ///  [4] Tr_{GF(q)}((xi^2 + xi^2q) / sigma^2) = 0
  ///  [5] x^2 + sigma x + xi^2 + xi^2q reducible over GF(q)
  std::array<bool, 6> hyperbolic_verdicts{};
  QuadricKind kind = QuadricKind::elliptic;
};

inline XiClass classify_xi(const Surface& s, Elem xi) {
  const Field& f = s.field();
  if (f.in_subfield(xi)) throw std::invalid_argument("classify_xi: xi must lie outside GF(q)");
  const Elem xq = f.frob(xi);
  const Elem sig2 = f.sqr(f.sigma());
  const Elem sum = f.add(f.sqr(xi), f.sqr(xq));
  XiClass c;
  c.xi = xi;
  c.hyperbolic_verdicts = {
      s.quadric_xi(xi).kind == QuadricKind::hyperbolic,
      s.quadric_xi(xq).kind == QuadricKind::hyperbolic,
      f.trace_q2(f.div(f.sqr(xi), sig2)) == 0,
      f.is_reducible_quadratic(f.div(f.sigma(), xi), Field::one(), Over::extension),
      f.trace_q(f.div(sum, sig2)) == 0,
      f.is_reducible_quadratic(f.sigma(), sum, Over::base),
  };
  const auto& v = c.hyperbolic_verdicts;
  if (!std::all_of(v.begin(), v.end(), [&](bool b) { return b == v[0]; }))
    throw InvariantError("hyperbolicity tests disagree for xi index " + std::to_string(xi.v));
  c.kind = v[0] ? QuadricKind::hyperbolic : QuadricKind::elliptic;
  return c;
}

/// Elliptic xi in index order; q^2/2 of them.
inline std::vector<Elem> list_elliptic_xi(const Surface& s) {
  std::vector<Elem> out;
  for (Elem xi : s.field().non_subfield_elements())
    if (classify_xi(s, xi).kind == QuadricKind::elliptic) out.push_back(xi);
  return out;
}

inline std::vector<Elem> list_hyperbolic_xi(const Surface& s) {
  std::vector<Elem> out;
  for (Elem xi : s.field().non_subfield_elements())
    if (classify_xi(s, xi).kind == QuadricKind::hyperbolic) out.push_back(xi);
  return out;
}

/// The point (xi, 0, 1, xi).
inline PointId base_point(const Space& sp, Elem xi) { return sp.point({xi, Field::zero(), Field::one(), xi}); }

inline std::vector<PointId> to_points(std::span<const std::uint32_t> ids) {
  std::vector<PointId> out;
  out.reserve(ids.size());
  for (auto v : ids) out.push_back(PointId{v});
  return out;
}

inline std::vector<std::uint32_t> to_ids(std::span<const PointId> pts) {
  std::vector<std::uint32_t> out;
  out.reserve(pts.size());
  for (auto p : pts) out.push_back(p.v);
  return out;
}

/// G-orbit of (xi, 0, 1, xi), ascending. Has q^3 - q points.
inline std::vector<PointId> build_I(const Surface& s, const Group& g, Elem xi) {
  const Field& f = s.field();
  if (f.in_subfield(xi)) throw std::invalid_argument("build_I: xi must lie outside GF(q)");
  const auto ids = orbit_of(base_point(s.space(), xi).v, g.order(), PointAction{&s.space(), g.elements()});
  const std::size_t q = f.q();
  if (ids.size() != q * q * q - q) throw InvariantError("|I_xi| = " + std::to_string(ids.size()));
  return to_points(ids);
}

/// intersection size -> number of generators
struct IntersectionProfile {
  std::map<std::uint32_t, std::uint64_t> histogram;

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (auto [k, n] : histogram) t += n;
    return t;
  }
  std::uint64_t incidences() const {
    std::uint64_t t = 0;
    for (auto [k, n] : histogram) t += k * n;
    return t;
  }
  std::uint32_t max_size() const { return histogram.empty() ? 0 : histogram.rbegin()->first; }
  std::uint64_t count(std::uint32_t k) const {
    auto it = histogram.find(k);
    return it == histogram.end() ? 0 : it->second;
  }
  /// Every generator meets the set in a size listed in `allowed`.
  bool supported_on(std::initializer_list<std::uint32_t> allowed) const {
    return std::all_of(histogram.begin(), histogram.end(), [&](const auto& kv) {
      return std::find(allowed.begin(), allowed.end(), kv.first) != allowed.end();
    });
  }
  friend bool operator==(const IntersectionProfile&, const IntersectionProfile&) = default;
};

inline std::vector<bool> membership(const Space& sp, std::span<const PointId> pts) {
  std::vector<bool> m(sp.num_points(), false);
  for (auto p : pts) m[p.v] = true;
  return m;
}

inline std::uint32_t meet_count(const Surface& s, std::size_t gen, const std::vector<bool>& mask) {
  std::uint32_t n = 0;
  for (auto p : s.generator_points(gen)) n += mask[p.v] ? 1u : 0u;
  return n;
}

/// Histogram of |g n S| over all generators g.
inline IntersectionProfile profile(const Surface& s, std::span<const PointId> pts) {
  for (auto p : pts)
    if (!s.contains(p)) throw std::invalid_argument("profile: set is not contained in the surface");
  const auto mask = membership(s.space(), pts);
  IntersectionProfile prof;
  for (std::size_t g = 0; g < s.generator_count(); ++g) ++prof.histogram[meet_count(s, g, mask)];
  return prof;
}

/// I_xi u I_xi^tau with its two components.
struct PointSet {
  Elem xi;
  QuadricKind kind;
  std::vector<PointId> orbit;        ///< I_xi
  std::vector<PointId> orbit_tau;    ///< tau(I_xi)
  std::vector<PointId> points;       ///< union, ascending
  IntersectionProfile prof;
  bool profiled = false;  ///< false when the surface has no incidence tables
};

/// A generator through (xi,0,1,xi) meeting a (0,2,4)-set in four points.
struct FourLineWitness {
  std::size_t generator;
  std::vector<PointId> meet_orbit;      ///< points of I_xi on it
  std::vector<PointId> meet_orbit_tau;  ///< points of I_xi^tau on it
};

namespace detail {

inline PointSet assemble(const Surface& s, const Group& g, Elem xi, QuadricKind kind) {
  PointSet out;
  out.xi = xi;
  out.kind = kind;
  out.orbit = build_I(s, g, xi);
  out.orbit_tau = image_of(s.space(), tau(), out.orbit);
  std::set_union(out.orbit.begin(), out.orbit.end(), out.orbit_tau.begin(), out.orbit_tau.end(),
                 std::back_inserter(out.points));
  if (out.points.size() != 2 * out.orbit.size()) throw InvariantError("I_xi and I_xi^tau intersect");
  if (s.has_incidence()) {
    out.prof = profile(s, out.points);
    out.profiled = true;
  }
  return out;
}

}  // namespace detail

/// O = I_xi u I_xi^tau for elliptic xi: a hyperoval of size 2(q^3 - q).
inline PointSet build_hyperoval(const Surface& s, const Group& g, Elem xi) {
  const auto cls = classify_xi(s, xi);
  if (cls.kind != QuadricKind::elliptic)
    throw std::invalid_argument("build_hyperoval: Q_xi is hyperbolic for xi index " + std::to_string(xi.v));
  PointSet o = detail::assemble(s, g, xi, cls.kind);
  const std::uint64_t q = s.field().q();
  if (!o.profiled) return o;
  if (!o.prof.supported_on({0, 2})) throw InvariantError("hyperoval profile has sizes other than 0 and 2");
  if (o.prof.count(0) != (q + 1) * (q + 1) || o.prof.count(2) != (q * q * q - q) * (q + 1))
    throw InvariantError("hyperoval profile counts are wrong");
  return o;
}

/// I_xi u I_xi^tau for hyperbolic xi: a set of type (0,2,4).
inline PointSet build_024_set(const Surface& s, const Group& g, Elem xi) {
  const auto cls = classify_xi(s, xi);
  if (cls.kind != QuadricKind::hyperbolic)
    throw std::invalid_argument("build_024_set: Q_xi is elliptic for xi index " + std::to_string(xi.v));
  PointSet o = detail::assemble(s, g, xi, cls.kind);
  if (o.profiled && (!o.prof.supported_on({0, 2, 4}) || o.prof.count(4) == 0))
    throw InvariantError("hyperbolic xi did not give a (0,2,4)-set");
  return o;
}

/// Generators through (xi,0,1,xi) meeting `o` in exactly four points.
inline std::vector<FourLineWitness> four_line_witnesses(const Surface& s, const PointSet& o) {
  const auto in_orbit = membership(s.space(), o.orbit);
  const auto in_tau = membership(s.space(), o.orbit_tau);
  std::vector<FourLineWitness> out;
  for (auto gen : s.generators_through(base_point(s.space(), o.xi))) {
    FourLineWitness w{gen, {}, {}};
    for (auto p : s.generator_points(gen)) {
      if (in_orbit[p.v]) w.meet_orbit.push_back(p);
      if (in_tau[p.v]) w.meet_orbit_tau.push_back(p);
    }
    if (w.meet_orbit.size() + w.meet_orbit_tau.size() == 4) out.push_back(std::move(w));
  }
  return out;
}

}  // namespace h3q
