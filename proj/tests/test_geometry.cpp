#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "h3q/geometry.hpp"

using namespace h3q;

namespace {

// Brute-force span membership: p is on line(a, b) iff p = a, or p ~ b + m a.
bool span_contains(const Space& sp, PointId a, PointId b, PointId p) {
  const Field& f = sp.field();
  const Vec4 x = sp.coords(a), y = sp.coords(b);
  if (p == a) return true;
  for (std::uint32_t m = 0; m < f.q2(); ++m) {
    Vec4 z{};
    for (std::size_t i = 0; i < 4; ++i) z[i] = f.add(y[i], f.mul(Elem{m}, x[i]));
    if (sp.point(z) == p) return true;
  }
  return false;
}

std::vector<PointId> random_points(const Space& sp, std::size_t n, std::mt19937& rng) {
  std::uniform_int_distribution<std::uint32_t> pick(0, sp.num_points() - 1);
  std::set<PointId> s;
  while (s.size() < n) s.insert(PointId{pick(rng)});
  return {s.begin(), s.end()};
}

}  // namespace

TEST(Space, PointCountAndRoundTrip) {
  for (unsigned e : {1u, 2u}) {
    Space sp(make_field(e));
    const std::uint64_t Q = sp.field().q2();
    ASSERT_EQ(sp.num_points(), Q * Q * Q + Q * Q + Q + 1);
    for (std::uint32_t i = 0; i < sp.num_points(); ++i) {
      const Vec4 x = sp.coords(PointId{i});
      ASSERT_EQ(sp.normalize(x), x);
      ASSERT_EQ(sp.index_canonical(x).v, i);
      if (i + 1 < sp.num_points()) {
        const Vec4 y = sp.coords(PointId{i + 1});
        ASSERT_TRUE(std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end(),
                                                 [](Elem a, Elem b) { return a.v < b.v; }));
      }
    }
    EXPECT_THROW(sp.coords(PointId{sp.num_points()}), std::out_of_range);
  }
}

TEST(Space, NormalizeIsScaleInvariant) {
  Space sp(make_field(3));
  const Field& f = sp.field();
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::uint32_t> pick(0, f.q2() - 1);
  for (int i = 0; i < 2000; ++i) {
    Vec4 x{Elem{pick(rng)}, Elem{pick(rng)}, Elem{pick(rng)}, Elem{pick(rng)}};
    if (std::all_of(x.begin(), x.end(), [](Elem a) { return a.v == 0; })) continue;
    const Elem s{1 + pick(rng) % (f.q2() - 1)};
    Vec4 y{};
    for (std::size_t k = 0; k < 4; ++k) y[k] = f.mul(s, x[k]);
    ASSERT_EQ(sp.point(x), sp.point(y));
  }
  EXPECT_THROW(sp.normalize(Vec4{}), std::invalid_argument);
}

TEST(Space, RationalPoints) {
  for (unsigned e : {1u, 2u, 3u}) {
    Space sp(make_field(e));
    const std::uint64_t q = sp.field().q();
    const auto r = sp.rational_points();
    EXPECT_EQ(r.size(), (q + 1) * (q * q + 1));
    EXPECT_TRUE(std::is_sorted(r.begin(), r.end()));
    for (auto p : r) EXPECT_TRUE(sp.is_rational(p));
    if (e <= 2) {
      std::size_t n = 0;
      for (std::uint32_t i = 0; i < sp.num_points(); ++i) n += sp.is_rational(PointId{i}) ? 1 : 0;
      EXPECT_EQ(n, r.size());
    }
  }
}

TEST(Space, LineSpanMatchesBruteForce) {
  Space sp(make_field(2));
  std::mt19937 rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto two = random_points(sp, 2, rng);
    const Line l = sp.line_span(two[0], two[1]);
    EXPECT_EQ(l, sp.line_span(two[1], two[0]));
    const auto pts = sp.points_on(l);
    ASSERT_EQ(pts.size(), sp.line_size());
    EXPECT_EQ(std::set<PointId>(pts.begin(), pts.end()).size(), pts.size());
    auto sorted = pts;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(sorted[0], l.lo);
    EXPECT_EQ(sorted[1], l.hi);
    for (auto p : pts) {
      EXPECT_TRUE(span_contains(sp, two[0], two[1], p));
      EXPECT_TRUE(sp.on_line(l, p));
    }
    // any two of its points give the same line
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    std::size_t a = pick(rng), b = pick(rng);
    if (a != b) EXPECT_EQ(sp.line_span(pts[a], pts[b]), l);
  }
  EXPECT_THROW(sp.line_span(PointId{3}, PointId{3}), std::invalid_argument);
}

TEST(Space, AllLinesAtQ2) {
  Space sp(make_field(1));
  std::set<std::uint64_t> keys;
  std::vector<std::uint32_t> through(sp.num_points(), 0);
  sp.for_each_line([&](const Line& l) {
    keys.insert(l.key());
    const auto pts = sp.points_on(l);
    ASSERT_EQ(sp.line_span(pts[0], pts.back()), l);
    for (auto p : pts) ++through[p.v];
  });
  EXPECT_EQ(keys.size(), sp.num_lines());
  EXPECT_EQ(sp.num_lines(), 357u);  // (16+1)(16+4+1)
  // q^4 + q^2 + 1 = 21 lines through each point
  for (auto n : through) EXPECT_EQ(n, 21u);
}

TEST(Space, PlanesAndNullSpace) {
  Space sp(make_field(2));
  const Field& f = sp.field();
  std::mt19937 rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto three = random_points(sp, 3, rng);
    if (sp.on_line(sp.line_span(three[0], three[1]), three[2])) {
      EXPECT_THROW(sp.plane_through(three[0], three[1], three[2]), std::invalid_argument);
      continue;
    }
    const Plane pi = sp.plane_through(three[0], three[1], three[2]);
    for (auto p : three) EXPECT_TRUE(sp.on_plane(pi, p));
    const auto pts = sp.points_of(pi);
    const std::uint64_t Q = f.q2();
    EXPECT_EQ(pts.size(), Q * Q + Q + 1);
    EXPECT_EQ(std::set<PointId>(pts.begin(), pts.end()).size(), pts.size());
    for (auto p : pts) EXPECT_TRUE(sp.on_plane(pi, p));
  }
  EXPECT_EQ(sp.all_planes().size(), sp.num_points());

  for (int i = 0; i < 100; ++i) {
    const auto two = random_points(sp, 2, rng);
    const auto ns = null_space(f, {sp.coords(two[0]), sp.coords(two[1])});
    ASSERT_EQ(ns.size(), 2u);
    for (const auto& v : ns) {
      EXPECT_EQ(dot(f, sp.coords(two[0]), v).v, 0u);
      EXPECT_EQ(dot(f, sp.coords(two[1]), v).v, 0u);
    }
  }
}

TEST(MaxCollinear, TwoRoutesAgree) {
  for (unsigned e : {1u, 2u}) {
    Space sp(make_field(e));
    std::mt19937 rng(100 + e);
    for (int i = 0; i < 12; ++i) {
      auto pts = random_points(sp, 10 + 5 * i, rng);
      // plant a partial line
      const auto on = sp.points_on(sp.line_span(pts[0], pts[1]));
      pts.insert(pts.end(), on.begin(), on.begin() + std::min<std::size_t>(on.size(), 2 + i % 4));
      std::sort(pts.begin(), pts.end());
      pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
      EXPECT_EQ(max_collinear_pairs(sp, pts), max_collinear_all_lines(sp, pts));
    }
  }
}

TEST(MaxCollinear, FullLineAndErrors) {
  Space sp(make_field(2));
  const auto on = sp.points_on(sp.line_span(PointId{0}, PointId{5}));
  EXPECT_EQ(max_collinear(sp, on), sp.line_size());
  EXPECT_EQ(max_collinear_pairs(sp, on), sp.line_size());
  const std::vector<PointId> one{PointId{0}};
  EXPECT_THROW(max_collinear(sp, one), std::invalid_argument);
  const std::vector<PointId> dup{PointId{4}, PointId{4}};
  EXPECT_THROW(max_collinear_pairs(sp, dup), std::invalid_argument);
  Space big(make_field(3));
  const std::vector<PointId> two{PointId{0}, PointId{1}};
  EXPECT_THROW(max_collinear_all_lines(big, two), std::invalid_argument);
}
