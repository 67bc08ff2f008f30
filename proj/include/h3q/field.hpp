#pragma once

// Exact arithmetic in the tower GF(2) < GF(q) < GF(q^2), q = 2^e.
//
// GF(q) is GF(2)[x]/(poly_q) in polynomial basis; an element is the integer
// whose bits are its coefficients. GF(q^2) = GF(q)[y]/(y^2 + y + c) with basis
// {1, eta}; the element a0 + a1*eta has index a0 + a1*q. The embedded GF(q)
// is therefore exactly the indices [0, q), and addition is XOR of indices.
//
// The defining polynomials are pinned:
//   poly_q : the numerically least irreducible binary polynomial of degree e
//            with nonzero constant term,
//   poly_q2: y^2 + y + c with c the least index in GF(q) of absolute trace 1
//            (every irreducible y^2 + b*y + c has b != 0, and the least b is 1).
// sigma defaults to the least index s in GF(q) for which x^2 + s*x + 1 is
// irreducible.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace h3q {

/// Internal consistency failure: a proven identity did not hold.
struct InvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Index of an element of GF(q^2) (see the file comment for the encoding).
struct Elem {
  std::uint32_t v = 0;
  friend constexpr auto operator<=>(Elem, Elem) = default;
};

enum class Over { base, extension };

class Field {
 public:
  static constexpr unsigned kMaxExponent = 8;

  explicit Field(unsigned e, std::optional<Elem> sigma = std::nullopt) : e_(e) {
    if (e < 1 || e > kMaxExponent)
      throw std::invalid_argument("field exponent must be in [1, 8], got " + std::to_string(e));
    q_ = 1u << e;
    q2_ = q_ * q_;
    poly_q_ = least_irreducible(e);
    c_ = Elem{0};
    while (c_.v < q_ && base_trace_slow(c_.v) != 1) ++c_.v;
    if (c_.v == q_) throw InvariantError("no trace-1 element in GF(q)");
    build_log_tables();
    trace_q_.resize(q_);
    for (std::uint32_t x = 0; x < q_; ++x) trace_q_[x] = static_cast<std::uint8_t>(base_trace_slow(x));
    if (sigma) {
      if (!in_subfield(*sigma) || sigma->v == 0)
        throw std::invalid_argument("sigma must be a nonzero element of GF(q)");
      if (is_reducible_quadratic(*sigma, one(), Over::base))
        throw std::invalid_argument("x^2 + sigma*x + 1 is reducible for sigma index " +
                                    std::to_string(sigma->v));
      sigma_ = *sigma;
    } else {
      sigma_ = least_sigma();
    }
  }

  unsigned exponent() const { return e_; }
  std::uint32_t q() const { return q_; }
  std::uint32_t q2() const { return q2_; }
  /// Bits of poly_q, including the leading x^e term.
  std::uint32_t poly_q() const { return poly_q_; }
  /// Constant term c of poly_q2 = y^2 + y + c.
  Elem poly_q2_constant() const { return c_; }
  Elem sigma() const { return sigma_; }

  static constexpr Elem zero() { return Elem{0}; }
  static constexpr Elem one() { return Elem{1}; }
  Elem eta() const { return Elem{q_}; }

  Elem add(Elem x, Elem y) const { return Elem{x.v ^ y.v}; }

  Elem mul(Elem x, Elem y) const {
    if (x.v == 0 || y.v == 0) return zero();
    return Elem{exp_[log_[x.v] + log_[y.v]]};
  }

  Elem sqr(Elem x) const { return mul(x, x); }

  Elem inv(Elem x) const {
    if (x.v == 0) throw std::domain_error("inverse of zero");
    return Elem{exp_[(q2_ - 1 - log_[x.v]) % (q2_ - 1)]};
  }

  Elem div(Elem x, Elem y) const { return mul(x, inv(y)); }

  Elem pow(Elem x, std::uint64_t n) const {
    if (n == 0) return one();
    if (x.v == 0) return zero();
    return Elem{exp_[static_cast<std::uint32_t>((std::uint64_t{log_[x.v]} * (n % (q2_ - 1))) % (q2_ - 1))]};
  }

  /// x -> x^q: fixes a0, sends eta to eta + 1.
  Elem frob(Elem x) const {
    std::uint32_t a0 = x.v & (q_ - 1);
    std::uint32_t a1 = x.v >> e_;
    return Elem{(a0 ^ a1) | (a1 << e_)};
  }

  bool in_subfield(Elem x) const { return x.v < q_; }

  /// Absolute trace GF(q) -> GF(2).
  std::uint32_t trace_q(Elem x) const {
    if (!in_subfield(x)) throw std::invalid_argument("trace_q: element is not in GF(q)");
    return trace_q_[x.v];
  }

  /// Absolute trace GF(q^2) -> GF(2), via Tr_q(x + x^q).
  std::uint32_t trace_q2(Elem x) const { return trace_q(add(x, frob(x))); }

  std::uint32_t trace(Elem x, Over over) const {
    return over == Over::base ? trace_q(x) : trace_q2(x);
  }

  /// Whether x^2 + a*x + b splits over the chosen field (a != 0).
  bool is_reducible_quadratic(Elem a, Elem b, Over over) const {
    if (a.v == 0) throw std::invalid_argument("is_reducible_quadratic: a must be nonzero");
    if (over == Over::base && (!in_subfield(a) || !in_subfield(b)))
      throw std::invalid_argument("is_reducible_quadratic: coefficients not in GF(q)");
    return trace(div(b, sqr(a)), over) == 0;
  }

  /// Coefficients (b, c) of the minimal polynomial x^2 + b*x + c of x over GF(q).
  /// For x in GF(q) this degenerates to (0, x^2), the square of (X + x).
  std::pair<Elem, Elem> min_poly_over_base(Elem x) const {
    return {add(x, frob(x)), mul(x, frob(x))};
  }

  /// Elements of GF(q^2) \ GF(q) in index order.
  std::vector<Elem> non_subfield_elements() const {
    std::vector<Elem> out;
    out.reserve(q2_ - q_);
    for (std::uint32_t v = q_; v < q2_; ++v) out.push_back(Elem{v});
    return out;
  }

  bool operator==(const Field& o) const {
    return e_ == o.e_ && poly_q_ == o.poly_q_ && c_ == o.c_ && sigma_ == o.sigma_;
  }

 private:
  static std::uint32_t degree(std::uint32_t p) {
    std::uint32_t d = 0;
    while (p >>= 1) ++d;
    return d;
  }

  static std::uint32_t poly_mod(std::uint32_t a, std::uint32_t m) {
    const std::uint32_t dm = degree(m);
    while (a != 0 && degree(a) >= dm) a ^= m << (degree(a) - dm);
    return a;
  }

  static bool binary_irreducible(std::uint32_t p) {
    const std::uint32_t d = degree(p);
    for (std::uint32_t f = 2; degree(f) <= d / 2; ++f)
      if (poly_mod(p, f) == 0) return false;
    return true;
  }

  static std::uint32_t least_irreducible(unsigned e) {
    for (std::uint32_t p = (1u << e) | 1u; p < (2u << e); p += 2)
      if (binary_irreducible(p)) return p;
    throw InvariantError("no irreducible polynomial found");
  }

  std::uint32_t base_mul_slow(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t r = 0;
    for (unsigned i = 0; i < e_; ++i)
      if (b >> i & 1u) r ^= a << i;
    return poly_mod(r, poly_q_);
  }

  std::uint32_t base_trace_slow(std::uint32_t x) const {
    std::uint32_t t = 0, p = x;
    for (unsigned i = 0; i < e_; ++i) {
      t ^= p;
      p = base_mul_slow(p, p);
    }
    if (t > 1) throw InvariantError("trace left GF(2)");
    return t;
  }

  std::uint32_t ext_mul_slow(std::uint32_t x, std::uint32_t y) const {
    const std::uint32_t a0 = x & (q_ - 1), a1 = x >> e_;
    const std::uint32_t b0 = y & (q_ - 1), b1 = y >> e_;
    const std::uint32_t hi = base_mul_slow(a1, b1);
    const std::uint32_t r0 = base_mul_slow(a0, b0) ^ base_mul_slow(c_.v, hi);
    const std::uint32_t r1 = base_mul_slow(a0, b1) ^ base_mul_slow(a1, b0) ^ hi;
    return r0 | (r1 << e_);
  }

  void build_log_tables() {
    const std::uint32_t n = q2_ - 1;
    log_.assign(q2_, 0);
    exp_.assign(2 * static_cast<std::size_t>(n), 0);
    for (std::uint32_t g = 2; g < q2_; ++g) {
      std::uint32_t x = 1, k = 0;
      do {
        exp_[k] = x;
        x = ext_mul_slow(x, g);
        ++k;
      } while (x != 1 && k < n);
      if (x == 1 && k == n) {
        for (std::uint32_t i = 0; i < n; ++i) {
          exp_[i + n] = exp_[i];
          log_[exp_[i]] = i;
        }
        return;
      }
    }
    throw InvariantError("no primitive element found in GF(q^2)");
  }

  Elem least_sigma() const {
    for (std::uint32_t s = 1; s < q_; ++s)
      if (!is_reducible_quadratic(Elem{s}, one(), Over::base)) return Elem{s};
    throw InvariantError("no admissible sigma");
  }

  unsigned e_;
  std::uint32_t q_ = 0, q2_ = 0, poly_q_ = 0;
  Elem c_{}, sigma_{};
  std::vector<std::uint32_t> log_, exp_;
  std::vector<std::uint8_t> trace_q_;
};

using FieldPtr = std::shared_ptr<const Field>;

inline FieldPtr make_field(unsigned e, std::optional<Elem> sigma = std::nullopt) {
  return std::make_shared<const Field>(e, sigma);
}

/// Element bound to its field, with operators. Mixing fields throws.
class FieldElem {
 public:
  FieldElem(const Field& f, Elem v) : f_(&f), v_(v) {
    if (v.v >= f.q2()) throw std::out_of_range("element index outside GF(q^2)");
  }

  Elem value() const { return v_; }
  const Field& field() const { return *f_; }

  friend FieldElem operator+(const FieldElem& x, const FieldElem& y) {
    x.check(y);
    return {*x.f_, x.f_->add(x.v_, y.v_)};
  }
  friend FieldElem operator*(const FieldElem& x, const FieldElem& y) {
    x.check(y);
    return {*x.f_, x.f_->mul(x.v_, y.v_)};
  }
  friend FieldElem operator/(const FieldElem& x, const FieldElem& y) {
    x.check(y);
    return {*x.f_, x.f_->div(x.v_, y.v_)};
  }
  friend bool operator==(const FieldElem& x, const FieldElem& y) {
    return *x.f_ == *y.f_ && x.v_ == y.v_;
  }

  FieldElem inv() const { return {*f_, f_->inv(v_)}; }
  FieldElem frob() const { return {*f_, f_->frob(v_)}; }
  std::uint32_t trace() const { return f_->trace_q2(v_); }

 private:
  void check(const FieldElem& o) const {
    if (f_ != o.f_ && !(*f_ == *o.f_)) throw std::invalid_argument("operands belong to different fields");
  }

  const Field* f_;
  Elem v_;
};

}  // namespace h3q
