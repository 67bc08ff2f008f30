#pragma once

// Points, lines and planes of PG(3, q^2).
//
// Canonical coordinates: leftmost nonzero coordinate equal to 1. Points are
// numbered densely in the lexicographic order of their canonical coordinate
// tuples (field elements compared by index), so
//   (0,0,0,1) < (0,0,1,*) < (0,1,*,*) < (1,*,*,*).
// A line is keyed by the two lexicographically least points on it, which are
// the two rows of the reduced row echelon form of any spanning pair.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "h3q/field.hpp"

namespace h3q {

using Vec4 = std::array<Elem, 4>;

struct PointId {
  std::uint32_t v = 0;
  friend constexpr auto operator<=>(PointId, PointId) = default;
};

/// Canonical line: `lo` is the least point on the line, `hi` the next least.
struct Line {
  PointId lo, hi;
  friend constexpr auto operator<=>(const Line&, const Line&) = default;
  std::uint64_t key() const { return (std::uint64_t{lo.v} << 32) | hi.v; }
};

/// Plane given by canonical dual coordinates u: points X with sum u_i X_i = 0.
struct Plane {
  Vec4 dual{};
  friend constexpr auto operator<=>(const Plane&, const Plane&) = default;
};

/// Reduces the rows in place to reduced row echelon form (pivots equal to 1)
/// and returns the rank. Zero rows are moved to the end.
inline std::size_t rref(const Field& f, std::span<Vec4> rows) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < 4 && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][col].v == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    const Elem s = f.inv(rows[rank][col]);
    for (auto& x : rows[rank]) x = f.mul(x, s);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col].v == 0) continue;
      const Elem m = rows[r][col];
      for (std::size_t k = 0; k < 4; ++k) rows[r][k] = f.add(rows[r][k], f.mul(m, rows[rank][k]));
    }
    ++rank;
  }
  return rank;
}

/// Basis (in reduced echelon form) of the solutions X of rows . X = 0.
inline std::vector<Vec4> null_space(const Field& f, std::vector<Vec4> rows) {
  const std::size_t rank = rref(f, rows);
  std::array<int, 4> pivot_row{-1, -1, -1, -1};
  for (std::size_t r = 0; r < rank; ++r)
    for (std::size_t c = 0; c < 4; ++c)
      if (rows[r][c].v != 0) {
        pivot_row[c] = static_cast<int>(r);
        break;
      }
  std::vector<Vec4> basis;
  for (std::size_t free = 0; free < 4; ++free) {
    if (pivot_row[free] >= 0) continue;
    Vec4 v{};
    v[free] = Field::one();
    for (std::size_t c = 0; c < 4; ++c)
      if (pivot_row[c] >= 0) v[c] = rows[static_cast<std::size_t>(pivot_row[c])][free];
    basis.push_back(v);
  }
  rref(f, basis);
  return basis;
}

inline Elem dot(const Field& f, const Vec4& u, const Vec4& x) {
  Elem s{};
  for (std::size_t i = 0; i < 4; ++i) s = f.add(s, f.mul(u[i], x[i]));
  return s;
}

/// Enumeration of PG(3, q^2) for q <= 16.
class Space {
 public:
  static constexpr std::uint32_t kMaxQ = 16;

  explicit Space(FieldPtr field) : field_(std::move(field)) {
    if (field_->q() > kMaxQ) throw std::invalid_argument("PG(3,q^2) enumeration supports q <= 16");
    Q_ = field_->q2();
    num_points_ = 1 + Q_ + Q_ * Q_ + Q_ * Q_ * Q_;
  }

  const Field& field() const { return *field_; }
  const FieldPtr& field_ptr() const { return field_; }
  std::uint32_t num_points() const { return num_points_; }
  /// Points on a line: q^2 + 1.
  std::uint32_t line_size() const { return Q_ + 1; }

  Vec4 normalize(const Vec4& raw) const {
    std::size_t k = 0;
    while (k < 4 && raw[k].v == 0) ++k;
    if (k == 4) throw std::invalid_argument("zero vector is not a projective point");
    if (raw[k] == Field::one()) return raw;
    const Elem s = field_->inv(raw[k]);
    Vec4 out{};
    for (std::size_t i = k; i < 4; ++i) out[i] = field_->mul(raw[i], s);
    return out;
  }

  /// Index of a canonical vector (no normalization performed).
  PointId index_canonical(const Vec4& x) const {
    if (x[0].v == 1) return PointId{1 + Q_ + Q_ * Q_ + (x[1].v * Q_ + x[2].v) * Q_ + x[3].v};
    if (x[1].v == 1) return PointId{1 + Q_ + x[2].v * Q_ + x[3].v};
    if (x[2].v == 1) return PointId{1 + x[3].v};
    return PointId{0};
  }

  PointId point(const Vec4& raw) const { return index_canonical(normalize(raw)); }

  Vec4 coords(PointId p) const {
    std::uint32_t i = p.v;
    if (i >= num_points_) throw std::out_of_range("point index out of range");
    if (i == 0) return {Elem{0}, Elem{0}, Elem{0}, Elem{1}};
    i -= 1;
    if (i < Q_) return {Elem{0}, Elem{0}, Elem{1}, Elem{i}};
    i -= Q_;
    if (i < Q_ * Q_) return {Elem{0}, Elem{1}, Elem{i / Q_}, Elem{i % Q_}};
    i -= Q_ * Q_;
    return {Elem{1}, Elem{i / (Q_ * Q_)}, Elem{(i / Q_) % Q_}, Elem{i % Q_}};
  }

  /// All canonical coordinates lie in GF(q).
  bool is_rational(PointId p) const {
    const Vec4 x = coords(p);
    return std::all_of(x.begin(), x.end(), [&](Elem c) { return field_->in_subfield(c); });
  }

  /// The (q+1)(q^2+1) points of PG(3,q), ascending.
  std::vector<PointId> rational_points() const {
    std::vector<PointId> out;
    const std::uint32_t q = field_->q();
    for (int lead = 3; lead >= 0; --lead) {
      const std::size_t free = 3 - static_cast<std::size_t>(lead);
      std::uint64_t total = 1;
      for (std::size_t k = 0; k < free; ++k) total *= q;
      for (std::uint64_t t = 0; t < total; ++t) {
        Vec4 x{};
        x[static_cast<std::size_t>(lead)] = Field::one();
        std::uint64_t r = t;
        for (std::size_t k = 4; k-- > static_cast<std::size_t>(lead) + 1;) {
          x[k] = Elem{static_cast<std::uint32_t>(r % q)};
          r /= q;
        }
        out.push_back(index_canonical(x));
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  Line line_span(PointId p, PointId q) const {
    if (p == q) throw std::invalid_argument("line_span needs two distinct points");
    std::array<Vec4, 2> rows{coords(p), coords(q)};
    if (rref(*field_, rows) != 2) throw InvariantError("distinct points spanned a rank-1 space");
    return Line{index_canonical(rows[1]), index_canonical(rows[0])};
  }

  /// The q^2+1 points of the line, least first.
  std::vector<PointId> points_on(const Line& l) const {
    std::vector<PointId> out;
    out.reserve(Q_ + 1);
    for_each_point_on(l, [&](PointId p) { out.push_back(p); });
    return out;
  }

  template <class Fn>
  void for_each_point_on(const Line& l, Fn&& fn) const {
    const Vec4 low = coords(l.lo);
    const Vec4 high = coords(l.hi);
    fn(l.lo);
    for (std::uint32_t m = 0; m < Q_; ++m) {
      Vec4 x = high;
      for (std::size_t i = 0; i < 4; ++i) x[i] = field_->add(x[i], field_->mul(Elem{m}, low[i]));
      fn(index_canonical(x));
    }
  }

  bool on_line(const Line& l, PointId p) const {
    std::array<Vec4, 3> rows{coords(l.lo), coords(l.hi), coords(p)};
    return rref(*field_, rows) == 2;
  }

  Plane plane_through(PointId a, PointId b, PointId c) const {
    auto ns = null_space(*field_, {coords(a), coords(b), coords(c)});
    if (ns.size() != 1) throw std::invalid_argument("plane_through: points are collinear");
    return Plane{normalize(ns[0])};
  }

  Plane make_plane(const Vec4& dual) const { return Plane{normalize(dual)}; }

  bool on_plane(const Plane& pi, PointId p) const { return dot(*field_, pi.dual, coords(p)).v == 0; }

  /// The q^4+q^2+1 points of a plane.
  std::vector<PointId> points_of(const Plane& pi) const {
    const auto basis = null_space(*field_, {pi.dual});
    std::vector<PointId> out;
    out.reserve(Q_ * Q_ + Q_ + 1);
    // Combinations with leading coefficient 1 are canonical because the basis is echelon.
    for (std::size_t lead = 0; lead < 3; ++lead) {
      const std::size_t free = 2 - lead;
      const std::uint32_t total = free == 0 ? 1 : (free == 1 ? Q_ : Q_ * Q_);
      for (std::uint32_t t = 0; t < total; ++t) {
        Vec4 x = basis[lead];
        std::uint32_t r = t;
        for (std::size_t k = lead + 1; k < 3; ++k) {
          const Elem c{r % Q_};
          r /= Q_;
          for (std::size_t i = 0; i < 4; ++i) x[i] = field_->add(x[i], field_->mul(c, basis[k][i]));
        }
        out.push_back(index_canonical(x));
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// All planes, as canonical dual vectors, in index order.
  std::vector<Plane> all_planes() const {
    std::vector<Plane> out;
    out.reserve(num_points_);
    for (std::uint32_t i = 0; i < num_points_; ++i) out.push_back(Plane{coords(PointId{i})});
    return out;
  }

  /// Calls fn(Line) for every line of PG(3,q^2), enumerated via echelon patterns.
  template <class Fn>
  void for_each_line(Fn&& fn) const {
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j) {
        // r1 free at positions > i except j; r2 free at positions > j.
        std::vector<std::size_t> free1, free2;
        for (std::size_t k = i + 1; k < 4; ++k)
          if (k != j) free1.push_back(k);
        for (std::size_t k = j + 1; k < 4; ++k) free2.push_back(k);
        const std::size_t nfree = free1.size() + free2.size();
        std::uint64_t total = 1;
        for (std::size_t k = 0; k < nfree; ++k) total *= Q_;
        for (std::uint64_t t = 0; t < total; ++t) {
          Vec4 r1{}, r2{};
          r1[i] = Field::one();
          r2[j] = Field::one();
          std::uint64_t r = t;
          for (auto k : free1) {
            r1[k] = Elem{static_cast<std::uint32_t>(r % Q_)};
            r /= Q_;
          }
          for (auto k : free2) {
            r2[k] = Elem{static_cast<std::uint32_t>(r % Q_)};
            r /= Q_;
          }
          fn(Line{index_canonical(r2), index_canonical(r1)});
        }
      }
  }

  std::uint64_t num_lines() const {
    const std::uint64_t Q = Q_;
    return (Q * Q + 1) * (Q * Q + Q + 1);
  }

 private:
  FieldPtr field_;
  std::uint32_t Q_ = 0;
  std::uint32_t num_points_ = 0;
};

/// Maximum number of points of `pts` on a common line, by spanning every pair.
inline std::uint32_t max_collinear_pairs(const Space& space, std::span<const PointId> pts) {
  if (pts.size() < 2) throw std::invalid_argument("max_collinear needs at least two points");
  std::unordered_map<std::uint64_t, std::uint32_t> pair_count;
  std::uint32_t best_pairs = 0;
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      if (pts[a] == pts[b]) throw std::invalid_argument("max_collinear: repeated point");
      best_pairs = std::max(best_pairs, ++pair_count[space.line_span(pts[a], pts[b]).key()]);
    }
  // k points on a line contribute k(k-1)/2 pairs.
  std::uint32_t k = 2;
  while (k * (k - 1) / 2 < best_pairs) ++k;
  return k;
}

/// Same quantity by walking every line of the space (q <= 4).
inline std::uint32_t max_collinear_all_lines(const Space& space, std::span<const PointId> pts) {
  if (pts.size() < 2) throw std::invalid_argument("max_collinear needs at least two points");
  if (space.field().q() > 4) throw std::invalid_argument("full line walk is limited to q <= 4");
  std::vector<bool> member(space.num_points(), false);
  for (auto p : pts) member[p.v] = true;
  std::uint32_t best = 0;
  space.for_each_line([&](const Line& l) {
    std::uint32_t n = 0;
    space.for_each_point_on(l, [&](PointId p) { n += member[p.v] ? 1u : 0u; });
    best = std::max(best, n);
  });
  return best;
}

/// Picks the full line walk for q <= 4 and pairwise spans otherwise.
inline std::uint32_t max_collinear(const Space& space, std::span<const PointId> pts) {
  return space.field().q() <= 4 ? max_collinear_all_lines(space, pts) : max_collinear_pairs(space, pts);
}

}  // namespace h3q
