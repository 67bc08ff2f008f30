#pragma once

// The Hermitian surface H(3,q^2): X0 X3^q + X3 X0^q + sigma (X1 X2^q + X2 X1^q) = 0,
// together with the structures of PG(3,q) sitting inside it:
//   W  the symplectic quadrangle (all rational points; the rational lines that
//      are totally isotropic for the alternating restriction of the form),
//   Q  the elliptic quadric X0 X3 + X1^2 + sigma X1 X2 + X2^2 = 0 over GF(q),
//   C  the conic Q n {X2 = 0},
//   N  = (0,1,0,0), the nucleus of C.

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "h3q/field.hpp"
#include "h3q/geometry.hpp"

namespace h3q {

enum class LineKind { tangent, hyperbolic, generator };

enum class QuadricKind { elliptic, hyperbolic };

/// Position of a generator relative to W, C and N.
enum class GeneratorClass {
  nucleus_tangent,   ///< extends a W-line through N and a point of C
  conic_tangent,     ///< extends a W-line through a point of C, missing N
  quadric_tangent,   ///< extends a W-line tangent to Q away from C
  skew,              ///< disjoint from PG(3,q)
};

inline const char* to_string(GeneratorClass c) {
  switch (c) {
    case GeneratorClass::nucleus_tangent: return "nucleus_tangent";
    case GeneratorClass::conic_tangent: return "conic_tangent";
    case GeneratorClass::quadric_tangent: return "quadric_tangent";
    case GeneratorClass::skew: return "skew";
  }
  return "?";
}

inline const char* to_string(QuadricKind k) { return k == QuadricKind::elliptic ? "elliptic" : "hyperbolic"; }

/// The quadric X0 X3 + X1^2 + sigma X1 X2 + xi^2 X2^2 = 0 of PG(3,q^2).
struct QuadricXi {
  Elem xi;
  QuadricKind kind;
  std::uint64_t point_count;
};

class Surface {
 public:
  /// With `incidence` false the per-generator point lists and per-point
  /// generator lists are not stored; generator_points() and
  /// generators_through() then throw.
  explicit Surface(FieldPtr field, bool incidence = true) : space_(std::move(field)), incidence_(incidence) {
    const Field& f = space_.field();
    const std::uint32_t q = f.q();
    for (std::uint32_t i = 0; i < space_.num_points(); ++i) {
      const Vec4 x = space_.coords(PointId{i});
      if (form(x, x).v == 0) points_.push_back(PointId{i});
    }
    mask_.assign(space_.num_points(), false);
    for (auto p : points_) mask_[p.v] = true;

    build_generators();
    if (incidence_) build_incidence();

    w_points_ = space_.rational_points();
    for (auto p : w_points_)
      if (!contains(p)) throw InvariantError("rational point off the Hermitian surface");
    rational_mask_.assign(space_.num_points(), false);
    for (auto p : w_points_) rational_mask_[p.v] = true;

    nucleus_ = space_.index_canonical({Elem{0}, Elem{1}, Elem{0}, Elem{0}});
    quadric_mask_.assign(space_.num_points(), false);
    conic_mask_.assign(space_.num_points(), false);
    for (auto p : w_points_) {
      const Vec4 x = space_.coords(p);
      if (base_quadric_value(x).v != 0) continue;
      q_points_.push_back(p);
      quadric_mask_[p.v] = true;
      if (x[2].v == 0) {
        c_points_.push_back(p);
        conic_mask_[p.v] = true;
      }
    }

    classes_.resize(generators_.size());
    for (std::size_t g = 0; g < generators_.size(); ++g) {
      std::uint32_t rational = 0, on_q = 0, on_c = 0;
      bool has_n = false;
      space_.for_each_point_on(generators_[g], [&](PointId p) {
        rational += rational_mask_[p.v] ? 1u : 0u;
        on_q += quadric_mask_[p.v] ? 1u : 0u;
        on_c += conic_mask_[p.v] ? 1u : 0u;
        has_n = has_n || p == nucleus_;
      });
      if (rational == 0) {
        classes_[g] = GeneratorClass::skew;
        continue;
      }
      if (rational != q + 1) throw InvariantError("generator meets W in " + std::to_string(rational) + " points");
      if (on_q != 1) throw InvariantError("W-line not tangent to the elliptic quadric");
      extended_w_lines_.push_back(g);
      classes_[g] = has_n ? GeneratorClass::nucleus_tangent
                          : (on_c == 1 ? GeneratorClass::conic_tangent : GeneratorClass::quadric_tangent);
    }
  }

  const Space& space() const { return space_; }
  const Field& field() const { return space_.field(); }
  const FieldPtr& field_ptr() const { return space_.field_ptr(); }

  /// X0 Y3^q + X3 Y0^q + sigma (X1 Y2^q + X2 Y1^q).
  Elem form(const Vec4& x, const Vec4& y) const {
    const Field& f = space_.field();
    const Elem a = f.add(f.mul(x[0], f.frob(y[3])), f.mul(x[3], f.frob(y[0])));
    const Elem b = f.add(f.mul(x[1], f.frob(y[2])), f.mul(x[2], f.frob(y[1])));
    return f.add(a, f.mul(f.sigma(), b));
  }

  Elem form(PointId p, PointId r) const { return form(space_.coords(p), space_.coords(r)); }

  bool contains(PointId p) const { return mask_[p.v]; }
  std::span<const PointId> points() const { return points_; }
  const std::vector<bool>& point_mask() const { return mask_; }

  std::size_t generator_count() const { return generators_.size(); }
  const Line& generator(std::size_t g) const { return generators_[g]; }
  std::span<const Line> generators() const { return generators_; }

  bool has_incidence() const { return incidence_; }

  /// Bytes taken by the incidence tables for a given q.
  static std::uint64_t incidence_bytes(std::uint64_t q) {
    const std::uint64_t gens = (q + 1) * (q * q * q + 1);
    const std::uint64_t pts = (q * q + 1) * (q * q * q + 1);
    return 4 * (gens * (q * q + 1) + pts * (q + 1));
  }

  std::span<const PointId> generator_points(std::size_t g) const {
    if (!incidence_) throw std::logic_error("surface built without incidence tables");
    const std::size_t n = space_.line_size();
    return std::span<const PointId>(gen_points_).subspan(g * n, n);
  }

  /// Index of the generator equal to `l`, or npos if `l` is not a generator.
  std::size_t generator_index(const Line& l) const {
    auto it = std::lower_bound(gen_keys_.begin(), gen_keys_.end(), l.key());
    if (it == gen_keys_.end() || *it != l.key()) return npos;
    return static_cast<std::size_t>(it - gen_keys_.begin());
  }

  /// Indices of the q+1 generators through a surface point.
  std::span<const std::uint32_t> generators_through(PointId p) const {
    if (!incidence_) throw std::logic_error("surface built without incidence tables");
    const std::size_t slot = surface_slot(p);
    const std::size_t k = space_.field().q() + 1;
    return std::span<const std::uint32_t>(through_).subspan(slot * k, k);
  }

  /// Position of a surface point in points().
  std::size_t surface_slot(PointId p) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), p);
    if (it == points_.end() || *it != p) throw std::invalid_argument("point is not on the Hermitian surface");
    return static_cast<std::size_t>(it - points_.begin());
  }

  LineKind classify_line(const Line& l) const {
    std::uint32_t n = 0;
    space_.for_each_point_on(l, [&](PointId p) { n += contains(p) ? 1u : 0u; });
    const std::uint32_t q = field().q();
    if (n == 1) return LineKind::tangent;
    if (n == q + 1) return LineKind::hyperbolic;
    if (n == q * q + 1) return LineKind::generator;
    throw InvariantError("line meets the Hermitian surface in " + std::to_string(n) + " points");
  }

  /// Polar plane of a surface point; contains its q+1 generators.
  Plane tangent_plane(PointId p) const {
    if (!contains(p)) throw std::invalid_argument("tangent_plane: point is not on the surface");
    return polar(p);
  }

  /// Polar plane of any point: X with form(X, P) = 0.
  Plane polar(PointId p) const {
    const Field& f = field();
    const Vec4 x = space_.coords(p);
    return space_.make_plane({f.frob(x[3]), f.mul(f.sigma(), f.frob(x[2])), f.mul(f.sigma(), f.frob(x[1])),
                              f.frob(x[0])});
  }

  /// Inverse of polar().
  PointId pole(const Plane& pi) const {
    const Field& f = field();
    const Vec4& u = pi.dual;
    const Elem s = f.inv(f.sigma());
    return space_.point({f.frob(u[3]), f.mul(f.frob(u[2]), s), f.mul(f.frob(u[1]), s), f.frob(u[0])});
  }

  bool is_tangent_plane(const Plane& pi) const { return contains(pole(pi)); }

  // --- structures of PG(3,q) ---

  std::span<const PointId> w_points() const { return w_points_; }
  bool in_w(PointId p) const { return rational_mask_[p.v]; }
  /// Generator indices of the extended W-lines.
  std::span<const std::size_t> extended_w_lines() const { return extended_w_lines_; }
  std::span<const PointId> q_points() const { return q_points_; }
  bool in_q(PointId p) const { return quadric_mask_[p.v]; }
  std::span<const PointId> c_points() const { return c_points_; }
  bool in_c(PointId p) const { return conic_mask_[p.v]; }
  PointId nucleus() const { return nucleus_; }
  GeneratorClass generator_class(std::size_t g) const { return classes_[g]; }

  /// Rational lines totally isotropic for X0 Y3 + X3 Y0 + sigma (X1 Y2 + X2 Y1),
  /// found from pairs of rational points (independent of the generator list).
  std::vector<Line> isotropic_rational_lines() const {
    const Field& f = field();
    std::vector<Line> out;
    for (std::size_t a = 0; a < w_points_.size(); ++a)
      for (std::size_t b = a + 1; b < w_points_.size(); ++b) {
        const Vec4 x = space_.coords(w_points_[a]);
        const Vec4 y = space_.coords(w_points_[b]);
        const Elem v = f.add(f.add(f.mul(x[0], y[3]), f.mul(x[3], y[0])),
                             f.mul(f.sigma(), f.add(f.mul(x[1], y[2]), f.mul(x[2], y[1]))));
        if (v.v == 0) out.push_back(space_.line_span(w_points_[a], w_points_[b]));
      }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// X0 X3 + X1^2 + sigma X1 X2 + X2^2.
  Elem base_quadric_value(const Vec4& x) const { return quadric_value(Field::one(), x); }

  // --- the pencil Q_xi ---

  /// X0 X3 + X1^2 + sigma X1 X2 + xi^2 X2^2.
  Elem quadric_value(Elem xi, const Vec4& x) const {
    const Field& f = field();
    Elem v = f.add(f.mul(x[0], x[3]), f.sqr(x[1]));
    v = f.add(v, f.mul(f.sigma(), f.mul(x[1], x[2])));
    return f.add(v, f.mul(f.sqr(xi), f.sqr(x[2])));
  }

  bool on_quadric_xi(Elem xi, PointId p) const { return quadric_value(xi, space_.coords(p)).v == 0; }

  /// Point count by summing x0*x3 = c solutions over (x1,x2); type by count,
  /// cross-checked against the trace criterion.
  QuadricXi quadric_xi(Elem xi) const {
    const Field& f = field();
    if (f.in_subfield(xi)) throw std::invalid_argument("quadric_xi: xi must lie outside GF(q)");
    const std::uint64_t Q = f.q2();
    std::uint64_t affine = 0;
    for (std::uint32_t x1 = 0; x1 < Q; ++x1)
      for (std::uint32_t x2 = 0; x2 < Q; ++x2) {
        const Vec4 v{Elem{0}, Elem{x1}, Elem{x2}, Elem{0}};
        affine += quadric_value(xi, v).v == 0 ? 2 * Q - 1 : Q - 1;
      }
    const std::uint64_t count = (affine - 1) / (Q - 1);
    QuadricKind kind;
    if (count == Q * Q + 1)
      kind = QuadricKind::elliptic;
    else if (count == (Q + 1) * (Q + 1))
      kind = QuadricKind::hyperbolic;
    else
      throw InvariantError("Q_xi has " + std::to_string(count) + " points");
    const bool trace_says_hyperbolic = f.trace_q2(f.div(f.sqr(xi), f.sqr(f.sigma()))) == 0;
    if (trace_says_hyperbolic != (kind == QuadricKind::hyperbolic))
      throw InvariantError("Q_xi point count disagrees with the trace criterion");
    return QuadricXi{xi, kind, count};
  }

  /// Full point scan of Q_xi.
  std::vector<PointId> quadric_xi_points(Elem xi) const {
    std::vector<PointId> out;
    for (std::uint32_t i = 0; i < space_.num_points(); ++i)
      if (on_quadric_xi(xi, PointId{i})) out.push_back(PointId{i});
    return out;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  void build_generators() {
    const Field& f = field();
    const std::uint32_t q = f.q();
    std::vector<Line> found;
    for (auto p : points_) {
      // Generators through P meet any line of its tangent plane missing P.
      const Vec4 x = space_.coords(p);
      std::size_t lead = 0;
      while (x[lead].v == 0) ++lead;
      Vec4 coord_plane{};
      coord_plane[lead] = Field::one();
      const auto basis = null_space(f, {polar(p).dual, coord_plane});
      if (basis.size() != 2) throw InvariantError("tangent plane meets a coordinate plane badly");
      const Line other{space_.index_canonical(basis[1]), space_.index_canonical(basis[0])};
      std::uint32_t through = 0;
      space_.for_each_point_on(other, [&](PointId r) {
        if (!contains(r)) return;
        ++through;
        const Line l = space_.line_span(p, r);
        if (l.lo == p) found.push_back(l);
      });
      if (through != q + 1) throw InvariantError("surface point on " + std::to_string(through) + " generators");
    }
    std::sort(found.begin(), found.end());
    generators_ = std::move(found);
    gen_keys_.reserve(generators_.size());
    const std::size_t n = space_.line_size();
    if (incidence_) gen_points_.reserve(generators_.size() * n);
    for (const auto& l : generators_) {
      gen_keys_.push_back(l.key());
      space_.for_each_point_on(l, [&](PointId r) {
        if (!contains(r)) throw InvariantError("generator leaves the surface");
        if (incidence_) gen_points_.push_back(r);
      });
    }
  }

  void build_incidence() {
    const std::size_t k = field().q() + 1;
    through_.assign(points_.size() * k, 0);
    std::vector<std::uint32_t> fill(points_.size(), 0);
    for (std::size_t g = 0; g < generators_.size(); ++g)
      for (auto p : generator_points(g)) {
        const std::size_t slot = surface_slot(p);
        if (fill[slot] == k) throw InvariantError("surface point on more than q+1 generators");
        through_[slot * k + fill[slot]++] = static_cast<std::uint32_t>(g);
      }
  }

  Space space_;
  bool incidence_ = true;
  std::vector<PointId> points_;
  std::vector<bool> mask_;
  std::vector<Line> generators_;
  std::vector<std::uint64_t> gen_keys_;
  std::vector<PointId> gen_points_;
  std::vector<std::uint32_t> through_;

  std::vector<PointId> w_points_, q_points_, c_points_;
  std::vector<bool> rational_mask_, quadric_mask_, conic_mask_;
  std::vector<std::size_t> extended_w_lines_;
  std::vector<GeneratorClass> classes_;
  PointId nucleus_{};
};

}  // namespace h3q
