#pragma once

// JSON certificates for the orbit inventory and for constructed point sets.
// nlohmann::json keeps object keys in a std::map, so dumps are key-sorted;
// every array below is built in a canonical order, so the same inputs give
// byte-identical output.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "h3q/analysis.hpp"
#include "h3q/field.hpp"
#include "h3q/geometry.hpp"
#include "h3q/group.hpp"
#include "h3q/hermitian.hpp"
#include "h3q/hyperoval.hpp"

namespace h3q {

using nlohmann::json;

inline constexpr const char* kToolName = "h3q";
inline constexpr const char* kToolVersion = "1.0.0";

/// Thrown for certificates that cannot be read back (bad JSON, bad shape,
/// coordinates that are not canonical).
struct MalformedCertificate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CertOptions {
  bool deterministic = false;
  std::uint64_t memory_budget_mb = 4096;
};

/// Rough resident size of a Surface with incidence tables, in bytes.
inline std::uint64_t estimated_surface_bytes(std::uint64_t q) {
  const std::uint64_t q2 = q * q;
  const std::uint64_t n = (q2 * q2 * q2 * q2 - 1) / (q2 - 1);
  const std::uint64_t h = (q2 + 1) * (q2 * q + 1);
  return Surface::incidence_bytes(q) + 4 * h + 6 * n / 8;
}

inline bool within_budget(std::uint64_t q, const CertOptions& opt) {
  return estimated_surface_bytes(q) <= opt.memory_budget_mb * 1024 * 1024;
}

// --- encoding ---

inline json field_json(const Field& f) {
  return {{"e", f.exponent()},
          {"q", f.q()},
          {"poly_q", f.poly_q()},
          {"poly_q2", json::array({f.poly_q2_constant().v, 1, 1})},
          {"sigma", f.sigma().v}};
}

inline json point_json(const Space& sp, PointId p) {
  const Vec4 x = sp.coords(p);
  return json::array({x[0].v, x[1].v, x[2].v, x[3].v});
}

inline json line_json(const Space& sp, const Line& l) {
  return json::array({point_json(sp, l.lo), point_json(sp, l.hi)});
}

inline json points_json(const Space& sp, std::span<const PointId> pts) {
  json out = json::array();
  for (auto p : pts) out.push_back(point_json(sp, p));
  return out;
}

inline json profile_json(const IntersectionProfile& prof) {
  json out = json::array();
  for (auto [k, n] : prof.histogram) out.push_back(json::array({k, n}));
  return out;
}

/// Minimal polynomial of xi over GF(q) as low-to-high coefficients, monic.
inline json min_poly_json(const Field& f, Elem xi) {
  const auto [b, c] = f.min_poly_over_base(xi);
  return json::array({c.v, b.v, 1});
}

// --- decoding ---

inline FieldPtr field_from_json(const json& j) {
  try {
    const unsigned e = j.at("e").get<unsigned>();
    const Elem sigma{j.at("sigma").get<std::uint32_t>()};
    auto f = make_field(e, sigma);
    if (j.at("poly_q").get<std::uint32_t>() != f->poly_q() ||
        j.at("poly_q2") != json::array({f->poly_q2_constant().v, 1, 1}) || j.at("q").get<std::uint32_t>() != f->q())
      throw MalformedCertificate("field polynomials do not match the pinned table");
    return f;
  } catch (const json::exception& ex) {
    throw MalformedCertificate(std::string("field: ") + ex.what());
  } catch (const std::invalid_argument& ex) {
    throw MalformedCertificate(std::string("field: ") + ex.what());
  }
}

inline PointId point_from_json(const Space& sp, const json& j) {
  if (!j.is_array() || j.size() != 4) throw MalformedCertificate("point is not a 4-tuple");
  Vec4 x{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!j[i].is_number_unsigned()) throw MalformedCertificate("coordinate is not an element index");
    const auto v = j[i].get<std::uint64_t>();
    if (v >= sp.field().q2()) throw MalformedCertificate("coordinate out of range");
    x[i] = Elem{static_cast<std::uint32_t>(v)};
  }
  if (std::all_of(x.begin(), x.end(), [](Elem a) { return a.v == 0; })) throw MalformedCertificate("zero vector");
  if (sp.normalize(x) != x) throw MalformedCertificate("point is not in canonical form");
  return sp.index_canonical(x);
}

// --- orbit inventory ---

/// Orbit inventory of G on generators and on H \ W, with verdicts.
inline json orbits_certificate(const FieldPtr& fp, const CertOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const Field& f = *fp;
  const std::uint64_t q = f.q();
  const bool full = within_budget(q, opt);
  const Surface s(fp, full);
  const Space& sp = s.space();
  const Group g = enumerate_group(sp);
  std::map<std::string, bool> v;
  json skipped = json::array();

  const std::uint64_t q3q = q * q * q - q;
  v["surface.point_count"] = s.points().size() == (q * q + 1) * (q * q * q + 1);
  v["surface.generator_count"] = s.generator_count() == (q + 1) * (q * q * q + 1);
  v["group.order"] = g.order() == q * (q * q - 1);

  json cert;
  cert["command"] = "orbits";
  cert["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  cert["field"] = field_json(f);
  cert["options"] = {{"memory_budget_mb", opt.memory_budget_mb}};
  cert["surface"] = {{"points", s.points().size()},
                     {"generators", s.generator_count()},
                     {"w_points", s.w_points().size()},
                     {"w_lines", s.extended_w_lines().size()},
                     {"quadric_points", s.q_points().size()},
                     {"conic_points", s.c_points().size()},
                     {"nucleus", point_json(sp, s.nucleus())}};
  cert["group"] = {{"order", g.order()}};

  const auto lines = line_orbits(s, g);
  json lj = json::array();
  std::map<GeneratorClass, std::map<std::uint64_t, std::uint64_t>> lhist;
  bool line_os = true;
  std::size_t line_total = 0;
  for (const auto& lo : lines) {
    lj.push_back({{"type", to_string(lo.cls)},
                  {"representative", line_json(sp, s.generator(lo.orbit.representative))},
                  {"length", lo.orbit.members.size()},
                  {"stabilizer_order", lo.orbit.stabilizer_order}});
    ++lhist[lo.cls][lo.orbit.members.size()];
    line_os = line_os && lo.orbit.members.size() * lo.orbit.stabilizer_order == g.order();
    line_total += lo.orbit.members.size();
  }
  cert["line_orbits"] = lj;
  using H = std::map<std::uint64_t, std::uint64_t>;
  v["line_orbits.total"] = line_total == s.generator_count();
  v["line_orbits.through_nucleus"] = lhist[GeneratorClass::nucleus_tangent] == H{{q + 1, 1}};
  v["line_orbits.conic_tangent"] = lhist[GeneratorClass::conic_tangent] == H{{q + 1, q}};
  v["line_orbits.quadric_tangent"] = lhist[GeneratorClass::quadric_tangent] == H{{q3q, 1}};
  v["line_orbits.skew"] = lhist[GeneratorClass::skew] == H{{q3q / 2, 2 * q}};
  v["line_orbits.orbit_stabilizer"] = line_os;

  if (full) {
    const auto pts = point_orbits_off_w(s, g);
    json pj = json::array();
    std::map<GeneratorClass, H> phist;
    bool point_os = true;
    for (const auto& po : pts) {
      pj.push_back({{"type", to_string(po.cls)},
                    {"representative", point_json(sp, PointId{po.orbit.representative})},
                    {"length", po.orbit.members.size()},
                    {"stabilizer_order", po.orbit.stabilizer_order}});
      ++phist[po.cls][po.orbit.members.size()];
      point_os = point_os && po.orbit.members.size() * po.orbit.stabilizer_order == g.order();
    }
    cert["point_orbits_off_w"] = pj;
    v["point_orbits.through_nucleus"] = phist[GeneratorClass::nucleus_tangent] == H{{q * q - 1, q}};
    v["point_orbits.conic_tangent"] = phist[GeneratorClass::conic_tangent] == H{{q3q, q}};
    v["point_orbits.quadric_tangent"] = phist[GeneratorClass::quadric_tangent] == H{{q3q, q * q - q}};
    v["point_orbits.orbit_stabilizer"] = point_os;

    // Each quadric-tangent orbit has one point on every quadric-tangent line.
    const std::size_t quadric_lines = lhist[GeneratorClass::quadric_tangent].empty() ? 0 : q3q;
    bool once = true;
    bool nucleus_meets = true, conic_meets = true, small_hyperovals = true;
    for (const auto& po : pts) {
      const auto members = to_points(po.orbit.members);
      if (po.cls == GeneratorClass::quadric_tangent) {
        std::vector<std::size_t> hit;
        for (auto p : members) hit.push_back(extended_line_through(s, p));
        std::sort(hit.begin(), hit.end());
        once = once && std::adjacent_find(hit.begin(), hit.end()) == hit.end() && hit.size() == quadric_lines;
        continue;
      }
      // Orbits on tangents to C cannot be hyperovals, except at q = 2.
      const auto mask = membership(sp, members);
      std::size_t lines_hit = 0;
      const std::uint64_t want = po.cls == GeneratorClass::nucleus_tangent ? q - 1 : q * q - q;
      bool exact = true;
      for (std::size_t gen = 0; gen < s.generator_count(); ++gen) {
        if (s.generator_class(gen) != po.cls) continue;
        const auto n = meet_count(s, gen, mask);
        if (n == 0) continue;
        ++lines_hit;
        exact = exact && n == want;
      }
      if (po.cls == GeneratorClass::nucleus_tangent)
        nucleus_meets = nucleus_meets && exact && lines_hit == q + 1;
      else {
        conic_meets = conic_meets && exact && lines_hit == q + 1;
        if (q == 2) {
          const auto prof = profile(s, members);
          small_hyperovals = small_hyperovals && members.size() == 6 && prof.supported_on({0, 2});
        }
      }
    }
    v["point_orbits.one_point_per_quadric_tangent"] = once;
    v["orbit_sets.nucleus_orbits_meet_q_minus_1"] = nucleus_meets;
    v["orbit_sets.conic_orbits_meet_q2_minus_q"] = conic_meets;
    if (q == 2) v["orbit_sets.conic_orbits_are_hyperovals_at_q2"] = small_hyperovals;
  } else {
    for (const char* c : {"point_orbits", "orbit_sets"}) skipped.push_back(c);
  }

  cert["skipped_checks"] = skipped;
  cert["verdicts"] = v;
  if (!opt.deterministic)
    cert["wall_clock_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  return cert;
}

// --- constructed sets ---

enum class SetType { hyperoval, set_024 };

inline const char* to_string(SetType t) { return t == SetType::hyperoval ? "hyperoval" : "set_024"; }

/// Certificate body for `pts`, claimed to be I_xi u I_xi^tau of the given type.
/// Every verdict is recomputed from `pts`; nothing is read from the construction
/// except the comparison `set.matches_construction`.
inline json set_certificate(const Surface& s, const Group& g, SetType type, Elem xi, std::span<const PointId> pts,
                            const CertOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const Field& f = s.field();
  const Space& sp = s.space();
  const std::uint64_t q = f.q();
  std::map<std::string, bool> v;
  json skipped = json::array();

  std::vector<PointId> sorted(pts.begin(), pts.end());
  std::sort(sorted.begin(), sorted.end());
  const bool distinct = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  const bool on_surface = std::all_of(sorted.begin(), sorted.end(), [&](PointId p) { return s.contains(p); });

  const XiClass cls = classify_xi(s, xi);
  const bool want_elliptic = type == SetType::hyperoval;
  const PointSet built = detail::assemble(s, g, xi, cls.kind);

  json cert;
  cert["command"] = "construct";
  cert["type"] = to_string(type);
  cert["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  cert["field"] = field_json(f);
  cert["options"] = {{"memory_budget_mb", opt.memory_budget_mb}};
  json tests = json::array();
  for (bool b : cls.hyperbolic_verdicts) tests.push_back(b);
  cert["xi"] = {{"index", xi.v},
                {"min_poly", min_poly_json(f, xi)},
                {"quadric", to_string(cls.kind)},
                {"hyperbolic_tests", tests}};
  cert["size"] = sorted.size();
  cert["points"] = points_json(sp, sorted);

  v["xi.tests_agree"] = true;  // classify_xi throws otherwise
  v["xi.quadric_matches_type"] = (cls.kind == QuadricKind::elliptic) == want_elliptic;
  v["set.size"] = distinct && sorted.size() == 2 * (q * q * q - q);
  v["set.on_surface"] = on_surface;
  v["set.matches_construction"] = sorted == built.points;
  v["set.tau_image_is_orbit_of_xi_q"] = built.orbit_tau == build_I(s, g, f.frob(xi));

  std::optional<IntersectionProfile> prof;
  if (!s.has_incidence()) {
    skipped.push_back("profile");
  } else if (on_surface) {
    prof = profile(s, sorted);
    cert["profile"] = profile_json(*prof);
  }

  if (type == SetType::hyperoval) {
    v["set.off_w"] = std::none_of(sorted.begin(), sorted.end(), [&](PointId p) { return s.in_w(p); });
    v["set.in_quadric_pair"] = std::all_of(sorted.begin(), sorted.end(), [&](PointId p) {
      return s.on_quadric_xi(xi, p) || s.on_quadric_xi(f.frob(xi), p);
    });
    if (prof) {
      v["profile.sizes_0_2"] = prof->supported_on({0, 2});
      v["profile.counts"] =
          prof->count(0) == (q + 1) * (q + 1) && prof->count(2) == (q * q * q - q) * (q + 1) && prof->total() == s.generator_count();
      const auto skew = skew_generators(s, sorted);
      const auto tangents = conic_tangent_generators(s);
      v["profile.skew_lines_are_conic_tangents"] = skew == tangents;
    } else {
      skipped.push_back("skew_lines");
    }

    const ChordReport ch = chord_discriminator(s, sorted);
    json cj = {{"max_collinear", ch.max_collinear}, {"chord_size", ch.chord_size}};
    if (ch.secant_cover) {
      cj["secant_plane_cover"] = *ch.secant_cover;
      v["chord.no_secant_plane_pair"] = !*ch.secant_cover;
    } else {
      v["chord.no_full_line_section"] = ch.no_chord;
    }
    cert["chord"] = cj;

    PointSet o = built;
    o.points = sorted;
    const StabilizerReport kr = known_automorphisms(s, g, o);
    json surv = json::array();
    for (Elem e : kr.surviving_transvections) surv.push_back(e.v);
    cert["automorphisms"] = {{"checked", kr.checked},
                             {"stabilizing", kr.stabilizing},
                             {"distinct", kr.distinct},
                             {"surviving_transvections", surv},
                             {"symmetry_central", kr.symmetry_central},
                             {"transvection_chain", kr.transvection_chain}};
    v["automorphisms.known_group_stabilizes"] = kr.stabilizing == kr.checked && kr.symmetry_stabilizes && kr.tau_stabilizes;
    v["automorphisms.order"] = kr.distinct == 4 * g.order();
    v["automorphisms.only_symmetry_transvection"] =
        kr.surviving_transvections == std::vector<Elem>{Field::zero(), f.sigma()} && kr.others_leave_quadrics;
    v["automorphisms.symmetry_structure"] =
        kr.transvection_chain && kr.symmetry_central && kr.symmetry_matches_group_element;

    if (q <= 4) {
      const BruteForceReport b = full_stabilizer_bruteforce(s, g, o);
      json bj = {{"ambient", b.ambient},
                 {"ambient_order", b.ambient_order},
                 {"order", b.order},
                 {"contains_known", b.contains_known},
                 {"fixes_w", b.fixes_w}};
      if (b.conditional) bj["condition"] = "assumes the stabilizer fixes W and so lies in <PSp(4,q),tau>";
      cert["full_stabilizer"] = bj;
      v["stabilizer.bruteforce_order"] = b.order == 4 * g.order() && b.contains_known && b.fixes_w;
    } else {
      skipped.push_back("full_stabilizer");
    }

    const auto sz = static_cast<std::int64_t>(sorted.size());
    const BoundsReport br = debruyn_bounds(sz, static_cast<std::int64_t>(q * q), static_cast<std::int64_t>(q));
    cert["bounds"] = {{"s", q * q}, {"t", q}, {"even", br.even}, {"lower", br.lower},
                      {"middle", br.middle}, {"upper", br.upper},
                      {"lower_equality", br.lower_equality}, {"upper_equality", br.upper_equality}};
    v["bounds.gq_hyperoval"] = br.ok();
  } else {
    if (prof) {
      v["profile.sizes_0_2_4"] = prof->supported_on({0, 2, 4}) && prof->count(4) > 0;
      const auto set_mask = membership(sp, sorted);
      const auto mask_o = membership(sp, built.orbit);
      const auto mask_t = membership(sp, built.orbit_tau);
      json wj = json::array();
      bool split = true;
      const PointId base = base_point(sp, xi);
      for (auto gen : s.generators_through(base)) {
        std::uint32_t a = 0, b = 0, n = 0;
        for (auto p : s.generator_points(gen)) {
          n += set_mask[p.v] ? 1u : 0u;
          a += mask_o[p.v] ? 1u : 0u;
          b += mask_t[p.v] ? 1u : 0u;
        }
        if (n != 4) continue;
        wj.push_back({{"line", line_json(sp, s.generator(gen))}, {"from_orbit", a}, {"from_tau_orbit", b}});
        split = split && a == 2 && b == 2;
      }
      cert["four_lines_through_base"] = wj;
      v["four_lines.through_base_point"] = !wj.empty() && split;
    } else {
      skipped.push_back("four_lines");
    }
  }

  cert["skipped_checks"] = skipped;
  cert["verdicts"] = v;
  if (!opt.deterministic)
    cert["wall_clock_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  return cert;
}

/// Builds the set for xi and certifies it. Throws std::invalid_argument when
/// the quadric type of xi does not match `type`.
inline json construct_certificate(const FieldPtr& fp, SetType type, Elem xi, const CertOptions& opt) {
  const Surface s(fp, within_budget(fp->q(), opt));
  const Group g = enumerate_group(s.space());
  const PointSet o = type == SetType::hyperoval ? build_hyperoval(s, g, xi) : build_024_set(s, g, xi);
  return set_certificate(s, g, type, xi, o.points, opt);
}

// --- verification ---

struct VerifyResult {
  bool ok = false;
  std::string first_failure;  ///< empty when ok
};

inline bool all_verdicts_hold(const json& cert, std::string* failing) {
  for (const auto& [k, val] : cert.at("verdicts").items())
    if (!val.get<bool>()) {
      if (failing) *failing = k;
      return false;
    }
  return true;
}

/// Recomputes a certificate from its stored inputs and compares. Throws
/// MalformedCertificate when the document cannot be interpreted.
inline VerifyResult verify_certificate(const json& stored) {
  if (!stored.is_object()) throw MalformedCertificate("certificate is not a JSON object");
  json recomputed;
  CertOptions opt;
  opt.deterministic = !stored.contains("wall_clock_ms");
  try {
    opt.memory_budget_mb = stored.at("options").at("memory_budget_mb").get<std::uint64_t>();
    const auto fp = field_from_json(stored.at("field"));
    const std::string cmd = stored.at("command").get<std::string>();
    if (cmd == "orbits") {
      recomputed = orbits_certificate(fp, opt);
    } else if (cmd == "construct") {
      const std::string t = stored.at("type").get<std::string>();
      if (t != "hyperoval" && t != "set_024") throw MalformedCertificate("unknown set type " + t);
      const Elem xi{stored.at("xi").at("index").get<std::uint32_t>()};
      if (xi.v >= fp->q2() || fp->in_subfield(xi)) throw MalformedCertificate("xi is not in GF(q^2) \\ GF(q)");
      const Surface s(fp, within_budget(fp->q(), opt));
      const Group g = enumerate_group(s.space());
      std::vector<PointId> pts;
      for (const auto& pj : stored.at("points")) pts.push_back(point_from_json(s.space(), pj));
      recomputed = set_certificate(s, g, t == "hyperoval" ? SetType::hyperoval : SetType::set_024, xi, pts, opt);
    } else {
      throw MalformedCertificate("unknown command " + cmd);
    }
  } catch (const json::exception& ex) {
    throw MalformedCertificate(ex.what());
  }

  VerifyResult r;
  std::string bad;
  if (!all_verdicts_hold(recomputed, &bad)) {
    r.first_failure = "claim " + bad + " fails";
    return r;
  }
  json a = stored, b = recomputed;
  a.erase("wall_clock_ms");
  b.erase("wall_clock_ms");
  for (const auto& [k, val] : b.items())
    if (!a.contains(k) || a[k] != val) {
      r.first_failure = "section " + k + " differs from the recomputation";
      return r;
    }
  for (const auto& [k, val] : a.items())
    if (!b.contains(k)) {
      r.first_failure = "unexpected section " + k;
      return r;
    }
  r.ok = true;
  return r;
}

}  // namespace h3q
