#include <gtest/gtest.h>

#include <set>

#include "h3q/analysis.hpp"

using namespace h3q;

namespace {

struct Fixture {
  explicit Fixture(unsigned e) : s(make_field(e)), g(enumerate_group(s.space())) {}
  Surface s;
  Group g;
};

Elem symplectic(const Field& f, const Vec4& x, const Vec4& y) {
  const Elem a = f.add(f.mul(x[0], y[3]), f.mul(x[3], y[0]));
  return f.add(a, f.mul(f.sigma(), f.add(f.mul(x[1], y[2]), f.mul(x[2], y[1]))));
}

// Conic tangents through a surface point, from the polarity of W:
// rational P outside the plane N^perp sees |C n P^perp| of them.
std::uint32_t expected_tangents(const Surface& s, PointId p) {
  const std::uint32_t q = s.field().q();
  const Space& sp = s.space();
  if (s.in_c(p) || p == s.nucleus()) return q + 1;
  if (s.in_q(p)) return 0;
  if (s.in_w(p)) {
    if (sp.coords(p)[2].v == 0) return 1;
    std::uint32_t n = 0;
    for (auto z : s.c_points()) n += symplectic(s.field(), sp.coords(p), sp.coords(z)).v == 0 ? 1u : 0u;
    return n;
  }
  const GeneratorClass c = s.generator_class(extended_line_through(s, p));
  return is_conic_tangent(c) ? 1u : 0u;
}

}  // namespace

class AnalysisQ : public ::testing::TestWithParam<unsigned> {};

TEST_P(AnalysisQ, TangentSignatures) {
  Fixture fx(GetParam());
  const std::uint32_t q = fx.s.field().q();
  std::map<PointRegion, std::set<std::uint32_t>> seen;
  for (auto p : fx.s.points()) {
    const auto sig = tangent_signature(fx.s, p);
    ASSERT_EQ(sig.tangents, expected_tangents(fx.s, p)) << to_string(sig.region);
    seen[sig.region].insert(sig.tangents);
  }
  EXPECT_EQ(seen[PointRegion::conic], std::set<std::uint32_t>{q + 1});
  EXPECT_EQ(seen[PointRegion::quadric_off_conic], std::set<std::uint32_t>{0});
  EXPECT_EQ(seen[PointRegion::delta0_rest], std::set<std::uint32_t>{1});
  // at q = 2 every such P^perp meets the plane of C in a secant
  const std::set<std::uint32_t> rest = q == 2 ? std::set<std::uint32_t>{2} : std::set<std::uint32_t>{0, 2};
  EXPECT_EQ(seen[PointRegion::rational_rest], rest);
  EXPECT_EQ(seen[PointRegion::off_w], (std::set<std::uint32_t>{0, 1}));
  EXPECT_EQ(conic_tangent_generators(fx.s).size(), (q + 1) * (q + 1));
}

TEST_P(AnalysisQ, HyperovalInvariants) {
  Fixture fx(GetParam());
  const Field& f = fx.s.field();
  const std::uint32_t q = f.q();
  auto xis = list_elliptic_xi(fx.s);
  if (q == 8) xis = {xis.front(), xis.back()};  // all of them run in the acceptance suite
  for (Elem xi : xis) {
    const PointSet o = build_hyperoval(fx.s, fx.g, xi);
    EXPECT_EQ(skew_generators(fx.s, o.points), conic_tangent_generators(fx.s));
    const StabilizerReport r = known_automorphisms(fx.s, fx.g, o);
    EXPECT_TRUE(r.ok(f));
    EXPECT_EQ(r.order(), 4 * fx.g.order());
    const ChordReport ch = chord_discriminator(fx.s, o.points);
    EXPECT_EQ(ch.chord_size, q + 1);
    if (q == 2) {
      ASSERT_TRUE(ch.secant_cover.has_value());
      EXPECT_FALSE(*ch.secant_cover);
    } else {
      EXPECT_TRUE(ch.no_chord);
    }
    const auto b = debruyn_bounds(static_cast<std::int64_t>(o.points.size()), q * q, q);
    EXPECT_TRUE(b.ok());
    EXPECT_FALSE(b.lower_equality);
    EXPECT_FALSE(b.upper_equality);
  }
}

INSTANTIATE_TEST_SUITE_P(Q, AnalysisQ, ::testing::Values(1u, 2u, 3u),
                         [](const auto& info) { return "q" + std::to_string(1u << info.param); });

TEST(Analysis, KnownAutomorphismListIsDistinct) {
  Fixture fx(2);
  const auto list = known_automorphism_list(fx.s.field(), fx.g);
  ASSERT_EQ(list.size(), 4 * fx.g.order());
  std::set<std::array<std::uint32_t, 6>> sigs;
  for (const auto& x : list) sigs.insert(action_signature(fx.s.space(), x));
  EXPECT_EQ(sigs.size(), list.size());
}

TEST(Analysis, OtherTransvectionsBreakTheSet) {
  Fixture fx(3);
  const Field& f = fx.s.field();
  const PointSet o = build_hyperoval(fx.s, fx.g, list_elliptic_xi(fx.s).front());
  const auto mask = membership(fx.s.space(), o.points);
  for (std::uint32_t v = 0; v < f.q(); ++v)
    EXPECT_EQ(stabilizes(fx.s.space(), transvection(f, Elem{v}), o.points, mask), v == 0 || Elem{v} == f.sigma());
}

TEST(Analysis, SecantPlaneCoverOnTwoPlaneSections) {
  Surface s(make_field(1));
  const Space& sp = s.space();
  std::vector<Plane> secant;
  for (const auto& pi : sp.all_planes())
    if (!s.is_tangent_plane(pi)) secant.push_back(pi);
  ASSERT_GE(secant.size(), 2u);
  std::set<PointId> u;
  for (std::size_t k : {0u, 1u})
    for (auto p : sp.points_of(secant[k]))
      if (s.contains(p)) u.insert(p);
  const std::vector<PointId> pts(u.begin(), u.end());
  EXPECT_TRUE(secant_plane_cover(s, pts));
  // a non-tangent plane meets H in a Hermitian curve of q^3 + 1 points
  std::size_t n = 0;
  for (auto p : sp.points_of(secant[0])) n += s.contains(p) ? 1 : 0;
  EXPECT_EQ(n, 9u);
  Surface s4(make_field(2));
  EXPECT_THROW(secant_plane_cover(s4, pts), std::invalid_argument);
}

TEST(Analysis, GroupOrderFormulas) {
  EXPECT_EQ(symplectic_group_order(2), 720u);
  EXPECT_EQ(unitary_group_order(2), 77760u);
  EXPECT_EQ(symplectic_group_order(4), 979200u);
}

TEST(Analysis, SymplecticEnumerationAtQ2) {
  Surface s(make_field(1));
  const Field& f = s.field();
  std::set<std::array<std::uint32_t, 6>> sigs;
  const std::size_t n = for_each_symplectic_collineation(s, [&](const Collineation& x) {
    sigs.insert(action_signature(s.space(), x));
    for (auto p : s.w_points()) ASSERT_TRUE(s.in_w(apply(s.space(), x, p)));
    Vec4 a{Elem{1}, Elem{0}, Elem{1}, Elem{0}}, b{Elem{0}, Elem{1}, Elem{1}, Elem{1}};
    ASSERT_EQ(symplectic(f, act(f, x, a), act(f, x, b)), symplectic(f, a, b));
  });
  EXPECT_EQ(n, 2 * symplectic_group_order(2));
  EXPECT_EQ(sigs.size(), n);
}

TEST(Analysis, BruteForceStabilizerAtQ2) {
  Fixture fx(1);
  const PointSet o = build_hyperoval(fx.s, fx.g, list_elliptic_xi(fx.s).front());
  const BruteForceReport r = full_stabilizer_bruteforce(fx.s, fx.g, o);
  EXPECT_EQ(r.ambient_order, 51840u);  // |PGammaU(4,4)|
  EXPECT_EQ(r.order, 24u);
  EXPECT_FALSE(r.conditional);
  EXPECT_TRUE(r.contains_known);
  EXPECT_TRUE(r.fixes_w);
  Fixture big(3);
  const PointSet o8 = build_hyperoval(big.s, big.g, list_elliptic_xi(big.s).front());
  EXPECT_THROW(full_stabilizer_bruteforce(big.s, big.g, o8), std::invalid_argument);
}

// At q = 4 the four distinct hyperovals split into two classes under
// <PSp(4,4), tau>, by the eta-coordinate of xi.
TEST(Analysis, SymplecticEquivalenceClassesAtQ4) {
  Fixture fx(2);
  auto set_of = [&](std::uint32_t xi) { return build_hyperoval(fx.s, fx.g, Elem{xi}).points; };
  const auto a = set_of(4), b = set_of(6), c = set_of(12), d = set_of(13);
  EXPECT_EQ(set_of(5), a);
  EXPECT_NE(a, b);
  EXPECT_TRUE(find_symplectic_equivalence(fx.s, a, b).has_value());
  EXPECT_TRUE(find_symplectic_equivalence(fx.s, c, d).has_value());
  EXPECT_FALSE(find_symplectic_equivalence(fx.s, a, c).has_value());
  const auto h = find_symplectic_equivalence(fx.s, a, b);
  EXPECT_EQ(image_of(fx.s.space(), *h, a), b);
}

TEST(Bounds, EqualityAndFailureCases) {
  const std::int64_t s = 16, t = 4;
  EXPECT_TRUE(debruyn_bounds(2 * (t + 1), s, t).lower_equality);
  EXPECT_TRUE(debruyn_bounds(2 * (s * t + 1), s, t).upper_equality);
  EXPECT_TRUE(debruyn_bounds(2 * (s * t + 1), s, t).ok());
  EXPECT_FALSE(debruyn_bounds(121, s, t).ok());
  EXPECT_FALSE(debruyn_bounds(2 * (s * t + 1) + 2, s, t).ok());
  EXPECT_FALSE(debruyn_bounds(2 * t, s, t).lower);
  // (t - s + 2)(s + 1) is negative here, so the middle bound is vacuous
  EXPECT_TRUE(debruyn_bounds(2 * (t + 1), s, t).middle);
}
