// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "h3q/analysis.hpp"

using namespace h3q;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Ctx {
  Surface s;
  Group g;
  explicit Ctx(unsigned e) : s(make_field(e)), g(enumerate_group(s.space())) {}
  std::uint64_t q() const { return s.field().q(); }
};

// Built lazily and shared across criteria; criterion 1 times its own fresh build.
Ctx& ctx(unsigned e) {
  static std::map<unsigned, std::unique_ptr<Ctx>> cache;
  auto& slot = cache[e];
  if (!slot) slot = std::make_unique<Ctx>(e);
  return *slot;
}

struct Result {
  bool pass = true;
  std::string why;
  void check(bool ok, const std::string& what) {
    if (!ok && pass) why = what;
    pass = pass && ok;
  }
};

std::string at(std::uint64_t q) { return " at q=" + std::to_string(q); }

Result ambient_counts() {
  Result r;
  const std::map<unsigned, std::pair<std::size_t, std::size_t>> want{{1, {45, 27}}, {2, {1105, 325}}, {3, {33345, 4617}}};
  for (auto [e, n] : want) {
    const auto t0 = Clock::now();
    Surface s(make_field(e));
    const double dt = seconds_since(t0);
    const std::uint64_t q = s.field().q();
    r.check(s.points().size() == n.first && n.first == (q * q + 1) * (q * q * q + 1), "|H|" + at(q));
    r.check(s.generator_count() == n.second && n.second == (q + 1) * (q * q * q + 1), "generators" + at(q));
    if (e == 3) r.check(dt < 60.0, "surface build over one minute" + at(q));
  }
  return r;
}

Result line_orbit_decomposition() {
  Result r;
  for (unsigned e : {1u, 2u, 3u}) {
    Ctx& c = ctx(e);
    const std::uint64_t q = c.q(), q3q = q * q * q - q;
    std::map<GeneratorClass, std::map<std::size_t, std::size_t>> h;
    for (const auto& lo : line_orbits(c.s, c.g)) {
      ++h[lo.cls][lo.orbit.members.size()];
      r.check(lo.orbit.members.size() * lo.orbit.stabilizer_order == c.g.order(), "stabilizer order" + at(q));
    }
    using H = std::map<std::size_t, std::size_t>;
    r.check(h[GeneratorClass::nucleus_tangent] == H{{q + 1, 1}}, "orbit through N" + at(q));
    r.check(h[GeneratorClass::conic_tangent] == H{{q + 1, q}}, "conic tangent orbits" + at(q));
    r.check(h[GeneratorClass::quadric_tangent] == H{{q3q, 1}}, "quadric tangent orbit" + at(q));
    r.check(h[GeneratorClass::skew] == H{{q3q / 2, 2 * q}}, "skew orbits" + at(q));
  }
  return r;
}

Result point_orbit_decomposition() {
  Result r;
  for (unsigned e : {1u, 2u, 3u}) {
    Ctx& c = ctx(e);
    const std::uint64_t q = c.q(), q3q = q * q * q - q;
    std::map<std::size_t, std::size_t> sizes;
    std::set<std::size_t> quadric_lines;
    for (std::size_t gen = 0; gen < c.s.generator_count(); ++gen)
      if (c.s.generator_class(gen) == GeneratorClass::quadric_tangent) quadric_lines.insert(gen);
    for (const auto& po : point_orbits_off_w(c.s, c.g)) {
      ++sizes[po.orbit.members.size()];
      if (po.orbit.members.size() != q3q || po.cls != GeneratorClass::quadric_tangent) continue;
      std::multiset<std::size_t> hit;
      for (auto p : po.orbit.members) hit.insert(extended_line_through(c.s, PointId{p}));
      r.check(std::set<std::size_t>(hit.begin(), hit.end()) == quadric_lines && hit.size() == quadric_lines.size(),
              "quadric-tangent orbit not one point per line" + at(q));
    }
    std::map<std::size_t, std::size_t> want{{q * q - 1, q}};
    want[q3q] += q + (q * q - q);
    r.check(sizes == want, "point orbit sizes" + at(q));
  }
  return r;
}

Result xi_dichotomy() {
  Result r;
  for (unsigned e : {1u, 2u, 3u}) {
    Ctx& c = ctx(e);
    const std::uint64_t q = c.q();
    std::size_t ell = 0, hyp = 0;
    for (Elem xi : c.s.field().non_subfield_elements()) {
      XiClass k;
      try {
        k = classify_xi(c.s, xi);
      } catch (const InvariantError& ex) {
        r.check(false, ex.what());
        continue;
      }
      (k.kind == QuadricKind::elliptic ? ell : hyp) += 1;
    }
    r.check(ell == q * q / 2, "elliptic count" + at(q));
    r.check(hyp == (q * q - 2 * q) / 2, "hyperbolic count" + at(q));
  }
  return r;
}

Result hyperoval_theorem() {
  Result r;
  double q8 = 0;
  for (unsigned e : {1u, 2u, 3u}) {
    Ctx& c = ctx(e);
    const std::uint64_t q = c.q();
    const auto t0 = Clock::now();
    for (Elem xi : list_elliptic_xi(c.s)) {
      const PointSet o = build_hyperoval(c.s, c.g, xi);
      const IntersectionProfile want{{{0u, (q + 1) * (q + 1)}, {2u, (q * q * q - q) * (q + 1)}}};
      r.check(profile(c.s, o.points) == want, "profile for xi " + std::to_string(xi.v) + at(q));
      r.check(o.points.size() == 2 * (q * q * q - q), "size" + at(q));
    }
    if (e == 3) q8 = seconds_since(t0);
  }
  r.check(q8 < 300.0, "q=8 took over five minutes");
  return r;
}

Result zero_two_four_sets() {
  Result r;
  for (unsigned e : {2u, 3u}) {
    Ctx& c = ctx(e);
    const std::uint64_t q = c.q();
    for (Elem xi : list_hyperbolic_xi(c.s)) {
      const PointSet o = build_024_set(c.s, c.g, xi);
      const auto prof = profile(c.s, o.points);
      r.check(prof.supported_on({0, 2, 4}) && prof.count(4) > 0, "profile for xi " + std::to_string(xi.v) + at(q));
      const PointId b = base_point(c.s.space(), xi);
      const auto mask = membership(c.s.space(), o.points);
      bool four = false;
      for (auto gen : c.s.generators_through(b)) four = four || meet_count(c.s, gen, mask) == 4;
      r.check(four, "no four-line through the base point" + at(q));
    }
  }
  return r;
}

Result negative_results() {
  Result r;
  for (unsigned e : {1u, 2u, 3u}) {
    Ctx& c = ctx(e);
    const std::uint64_t q = c.q();
    for (const auto& po : point_orbits_off_w(c.s, c.g)) {
      if (po.cls == GeneratorClass::quadric_tangent) continue;
      const auto members = to_points(po.orbit.members);
      const auto prof = profile(c.s, members);
      if (po.cls == GeneratorClass::nucleus_tangent) {
        r.check(prof.count(q - 1) > 0, "nucleus orbit without a (q-1)-line" + at(q));
      } else if (q > 2) {
        r.check(prof.count(q * q - q) > 0, "conic orbit without a (q^2-q)-line" + at(q));
      } else {
        r.check(members.size() == 6 && prof.supported_on({0, 2}), "conic orbit not a hyperoval at q=2");
      }
    }
  }
  return r;
}

Result discrimination() {
  Result r;
  for (unsigned e : {1u, 2u, 3u}) {
    Ctx& c = ctx(e);
    const std::uint64_t q = c.q();
    for (Elem xi : list_elliptic_xi(c.s)) {
      const PointSet o = build_hyperoval(c.s, c.g, xi);
      if (q == 2)
        r.check(!secant_plane_cover(c.s, o.points), "set lies on two secant plane sections");
      else
        r.check(max_collinear(c.s.space(), o.points) < q + 1, "a full line section" + at(q));
    }
  }
  return r;
}

Result automorphisms() {
  Result r;
  for (unsigned e : {1u, 2u, 3u}) {
    Ctx& c = ctx(e);
    const std::uint64_t q = c.q();
    for (Elem xi : list_elliptic_xi(c.s)) {
      const PointSet o = build_hyperoval(c.s, c.g, xi);
      const StabilizerReport k = known_automorphisms(c.s, c.g, o);
      r.check(k.ok(c.s.field()) && k.order() == 4 * q * (q * q - 1), "known group for xi " + std::to_string(xi.v) + at(q));
      const auto mask = membership(c.s.space(), o.points);
      for (std::uint32_t v = 1; v < q; ++v)
        if (Elem{v} != c.s.field().sigma())
          r.check(!stabilizes(c.s.space(), transvection(c.s.field(), Elem{v}), o.points, mask),
                  "transvection " + std::to_string(v) + " stabilizes" + at(q));
    }
  }
  for (auto [e, want] : {std::pair{1u, 24u}, std::pair{2u, 240u}}) {
    Ctx& c = ctx(e);
    const PointSet o = build_hyperoval(c.s, c.g, list_elliptic_xi(c.s).front());
    const BruteForceReport b = full_stabilizer_bruteforce(c.s, c.g, o);
    r.check(b.order == want && b.contains_known, "brute-force stabilizer" + at(c.q()));
  }
  return r;
}

Result bounds() {
  Result r;
  for (unsigned e : {1u, 2u, 3u}) {
    Ctx& c = ctx(e);
    const std::int64_t q = static_cast<std::int64_t>(c.q());
    for (Elem xi : list_elliptic_xi(c.s)) {
      const PointSet o = build_hyperoval(c.s, c.g, xi);
      r.check(debruyn_bounds(static_cast<std::int64_t>(o.points.size()), q * q, q).ok(), "bounds" + at(c.q()));
    }
  }
  return r;
}

Result property_suites() {
  Result r;
  std::mt19937 rng(2024);
  for (unsigned e : {1u, 2u, 3u}) {
    Ctx& c = ctx(e);
    const Field& f = c.s.field();
    const Space& sp = c.s.space();
    const std::uint64_t q = c.q();
    // orbit-stabilizer on random points and generators
    for (int t = 0; t < 40; ++t) {
      const PointId p = c.s.points()[rng() % c.s.points().size()];
      const auto orb = orbit_of(p.v, c.g.order(), PointAction{&sp, c.g.elements()});
      const auto stab = stabilizer_of(p.v, c.g.order(), PointAction{&sp, c.g.elements()});
      r.check(orb.size() * stab.size() == q * (q * q - 1), "point orbit-stabilizer" + at(q));
      const auto gen = static_cast<std::uint32_t>(rng() % c.s.generator_count());
      const auto gorb = orbit_of(gen, c.g.order(), GeneratorAction{&c.s, c.g.elements()});
      const auto gstab = stabilizer_of(gen, c.g.order(), GeneratorAction{&c.s, c.g.elements()});
      r.check(gorb.size() * gstab.size() == q * (q * q - 1), "generator orbit-stabilizer" + at(q));
    }
    // incidence under random group elements, tau and s
    const std::vector<Collineation> extra{tau(), symmetry(f)};
    for (int t = 0; t < 200; ++t) {
      const PointId a{static_cast<std::uint32_t>(rng() % sp.num_points())};
      const PointId b{static_cast<std::uint32_t>(rng() % sp.num_points())};
      if (a == b) continue;
      const Collineation& x = t % 5 == 0 ? extra[t % 2] : c.g[rng() % c.g.order()];
      const Line l = sp.line_span(a, b), img = apply_line(sp, x, l);
      for (auto p : sp.points_on(l)) r.check(sp.on_line(img, apply(sp, x, p)), "incidence" + at(q));
    }
    // point-count classification against the trace forms
    if (q <= 4)
      for (Elem xi : f.non_subfield_elements()) {
        const bool scanned = c.s.quadric_xi_points(xi).size() == (f.q2() + 1) * (f.q2() + 1);
        const auto v = classify_xi(c.s, xi).hyperbolic_verdicts;
        for (bool b : v) r.check(b == scanned, "classify_xi disagrees with scan" + at(q));
      }
    // tau-conjugation fixes G
    for (const auto& g : c.g.elements())
      r.check(same_action(sp, compose(f, compose(f, tau(), g), tau()), g), "tau conjugation" + at(q));
  }
  return r;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"1 ambient counts", ambient_counts},
      {"2 line orbits", line_orbit_decomposition},
      {"3 point orbits off W", point_orbit_decomposition},
      {"4 xi dichotomy", xi_dichotomy},
      {"5 hyperoval profiles", hyperoval_theorem},
      {"6 (0,2,4)-sets", zero_two_four_sets},
      {"7 orbit sets that fail", negative_results},
      {"8 discrimination", discrimination},
      {"9 automorphisms", automorphisms},
      {"10 size bounds", bounds},
      {"11 property suites", property_suites},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = Clock::now();
    Result r;
    try {
      r = fn();
    } catch (const std::exception& ex) {
      r.pass = false;
      r.why = std::string("exception: ") + ex.what();
    }
    std::printf("%s criterion %s (%.1fs)%s%s\n", r.pass ? "PASS" : "FAIL", name.c_str(), seconds_since(t0),
                r.pass ? "" : ": ", r.why.c_str());
    std::fflush(stdout);
    failed += r.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
