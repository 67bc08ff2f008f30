// h3q: build and verify orbit inventories and hyperoval certificates on
// H(3,q^2), q even.
//
//   h3q orbits --q 4
//   h3q construct --q 8 --xi auto --deterministic --out o8.json
//   h3q verify o8.json
//
// Exit codes: 0 pass, 1 verification failure, 2 usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "h3q/certificate.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  unsigned q = 0;
  std::string sigma = "auto";
  bool deterministic = false;
  bool large = false;
  std::uint64_t budget_mb = 4096;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--q", c.q, "field order q")->required()->check(CLI::IsMember({2u, 4u, 8u, 16u}));
  cmd->add_option("--sigma", c.sigma, "element index of sigma, or auto");
  cmd->add_flag("--deterministic", c.deterministic, "omit wall-clock timing");
  cmd->add_flag("--large", c.large, "allow q = 16");
  cmd->add_option("--memory-budget-mb", c.budget_mb, "skip incidence-based checks above this estimate");
  cmd->add_option("--out", c.out, "write the certificate here instead of stdout");
}

std::optional<std::uint32_t> parse_index(const std::string& s, const char* what) {
  if (s == "auto") return std::nullopt;
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw UsageError(std::string(what) + " must be an index or auto");
  return static_cast<std::uint32_t>(v);
}

h3q::FieldPtr field_for(const Common& c) {
  if (c.q == 16 && !c.large) throw UsageError("--q 16 needs --large");
  unsigned e = 0;
  while ((1u << e) < c.q) ++e;
  std::optional<h3q::Elem> sigma;
  if (auto s = parse_index(c.sigma, "--sigma")) sigma = h3q::Elem{*s};
  try {
    return h3q::make_field(e, sigma);
  } catch (const std::invalid_argument& ex) {
    throw UsageError(ex.what());
  }
}

h3q::CertOptions options_for(const Common& c) { return {c.deterministic, c.budget_mb}; }

int emit(const h3q::json& cert, const std::string& out) {
  const std::string text = cert.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw UsageError("cannot write " + out);
    f << text;
  }
  std::string bad;
  if (!h3q::all_verdicts_hold(cert, &bad)) {
    std::cerr << "h3q: claim " << bad << " fails\n";
    return kFail;
  }
  return kPass;
}

int run_construct(const Common& c, const std::string& xi_arg, bool allow_024) {
  const auto fp = field_for(c);
  const h3q::Surface probe(fp, false);
  h3q::Elem xi;
  if (auto x = parse_index(xi_arg, "--xi")) {
    xi = h3q::Elem{*x};
    if (xi.v >= fp->q2() || fp->in_subfield(xi)) throw UsageError("--xi must index an element of GF(q^2) outside GF(q)");
  } else {
    xi = h3q::list_elliptic_xi(probe).front();
  }
  const bool hyperbolic = h3q::classify_xi(probe, xi).kind == h3q::QuadricKind::hyperbolic;
  if (hyperbolic && !allow_024)
    throw UsageError("Q_xi is hyperbolic for xi " + std::to_string(xi.v) + "; pass --allow-024 for the (0,2,4)-set");
  const auto type = hyperbolic ? h3q::SetType::set_024 : h3q::SetType::hyperoval;
  return emit(h3q::construct_certificate(fp, type, xi, options_for(c)), c.out);
}

int run_verify(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  h3q::json cert;
  try {
    cert = h3q::json::parse(buf.str());
  } catch (const h3q::json::parse_error& ex) {
    throw h3q::MalformedCertificate(ex.what());
  }
  const auto r = h3q::verify_certificate(cert);
  if (!r.ok) {
    std::cerr << "h3q: verification failed: " << r.first_failure << "\n";
    return kFail;
  }
  std::cout << "ok\n";
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperovals of H(3,q^2), q even: orbit inventories and certificates"};
  app.require_subcommand(1);

  Common orbits_opts;
  auto* orbits = app.add_subcommand("orbits", "orbit inventory of G on generators and on H \\ W");
  add_common(orbits, orbits_opts);

  Common cons_opts;
  std::string xi_arg = "auto";
  bool allow_024 = false;
  auto* cons = app.add_subcommand("construct", "build I_xi u I_xi^tau and certify it");
  add_common(cons, cons_opts);
  cons->add_option("--xi", xi_arg, "element index of xi, or auto (least elliptic)");
  cons->add_flag("--allow-024", allow_024, "accept a hyperbolic xi and build the (0,2,4)-set");

  std::string path;
  auto* ver = app.add_subcommand("verify", "recompute a certificate and compare");
  ver->add_option("path", path, "certificate file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*orbits) return emit(h3q::orbits_certificate(field_for(orbits_opts), options_for(orbits_opts)), orbits_opts.out);
    if (*cons) return run_construct(cons_opts, xi_arg, allow_024);
    return run_verify(path);
  } catch (const UsageError& e) {
    std::cerr << "h3q: " << e.what() << "\n";
    return kUsage;
  } catch (const h3q::MalformedCertificate& e) {
    std::cerr << "h3q: malformed certificate: " << e.what() << "\n";
    return kUsage;
  } catch (const h3q::InvariantError& e) {
    std::cerr << "h3q: invariant violated: " << e.what() << "\n";
    return kFail;
  }
}
