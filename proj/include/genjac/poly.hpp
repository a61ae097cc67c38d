#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "genjac/error.hpp"
#include "genjac/gf.hpp"

namespace genjac {

// Dense univariate polynomial over a FieldCtx.  Trailing zeros are
// trimmed; the zero polynomial has an empty coefficient vector and
// degree() == -1.
class Poly {
 public:
  Poly() = default;
  explicit Poly(FieldCtxPtr ctx) : ctx_(std::move(ctx)) {}
  Poly(FieldCtxPtr ctx, std::vector<Elem> coeffs) : ctx_(std::move(ctx)), c_(std::move(coeffs)) {
    trim();
  }

  static Poly zero(const FieldCtxPtr& ctx) { return Poly(ctx); }
  static Poly constant(const FieldCtxPtr& ctx, Elem a) {
    return Poly(ctx, std::vector<Elem>{a});
  }
  static Poly x(const FieldCtxPtr& ctx) { return Poly(ctx, {0, 1}); }

  // x - a
  static Poly linear_root(const FieldCtxPtr& ctx, Elem a) {
    return Poly(ctx, {ctx->neg(a), 1});
  }

  const FieldCtxPtr& ctx() const { return ctx_; }
  const std::vector<Elem>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  Elem coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  Elem lead() const { return c_.empty() ? 0 : c_.back(); }
  bool is_monic() const { return lead() == 1; }

  bool operator==(const Poly& o) const { return c_ == o.c_; }
  bool operator!=(const Poly& o) const { return !(*this == o); }

  // Ordering by (degree, coefficient code from the top down).
  bool operator<(const Poly& o) const {
    if (c_.size() != o.c_.size()) return c_.size() < o.c_.size();
    for (std::size_t i = c_.size(); i-- > 0;)
      if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
    return false;
  }

  Poly operator+(const Poly& o) const {
    std::vector<Elem> r(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = ctx_->add(coeff(i), o.coeff(i));
    return Poly(ctx_, std::move(r));
  }

  Poly operator-(const Poly& o) const {
    std::vector<Elem> r(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = ctx_->sub(coeff(i), o.coeff(i));
    return Poly(ctx_, std::move(r));
  }

  Poly operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly(ctx_);
    std::vector<Elem> r(c_.size() + o.c_.size() - 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      for (std::size_t j = 0; j < o.c_.size(); ++j)
        r[i + j] = ctx_->add(r[i + j], ctx_->mul(c_[i], o.c_[j]));
    }
    return Poly(ctx_, std::move(r));
  }

  Poly scale(Elem a) const {
    std::vector<Elem> r(c_);
    for (auto& x : r) x = ctx_->mul(x, a);
    return Poly(ctx_, std::move(r));
  }

  std::pair<Poly, Poly> divmod(const Poly& d) const {
    if (d.is_zero()) throw Error(Errc::division_by_zero, "polynomial division by zero");
    if (degree() < d.degree()) return {Poly(ctx_), *this};
    std::vector<Elem> rem(c_);
    const int dd = d.degree();
    std::vector<Elem> quo(rem.size() - dd, 0);
    Elem dl_inv = ctx_->inv(d.lead());
    for (int i = static_cast<int>(rem.size()) - 1; i >= dd; --i) {
      Elem f = ctx_->mul(rem[i], dl_inv);
      if (f != 0) {
        quo[i - dd] = f;
        for (int j = 0; j <= dd; ++j)
          rem[i - dd + j] = ctx_->sub(rem[i - dd + j], ctx_->mul(f, d.c_[j]));
      }
    }
    return {Poly(ctx_, std::move(quo)), Poly(ctx_, std::move(rem))};
  }

  Poly operator/(const Poly& d) const { return divmod(d).first; }
  Poly operator%(const Poly& d) const { return divmod(d).second; }

  bool divides(const Poly& f) const { return f.divmod(*this).second.is_zero(); }

  Poly monic() const {
    if (is_zero()) return *this;
    return scale(ctx_->inv(lead()));
  }

  Elem eval(Elem a) const {
    Elem r = 0;
    for (std::size_t i = c_.size(); i-- > 0;) r = ctx_->add(ctx_->mul(r, a), c_[i]);
    return r;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly(ctx_);
    std::vector<Elem> r(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i)
      r[i - 1] = ctx_->mul(c_[i], ctx_->from_int(static_cast<std::int64_t>(i)));
    return Poly(ctx_, std::move(r));
  }

  Poly pow(std::uint64_t n) const {
    Poly r = constant(ctx_, 1), b = *this;
    while (n) {
      if (n & 1) r = r * b;
      b = b * b;
      n >>= 1;
    }
    return r;
  }

  Poly powmod(std::uint64_t n, const Poly& m) const {
    Poly r = constant(ctx_, 1), b = *this % m;
    while (n) {
      if (n & 1) r = r * b % m;
      b = b * b % m;
      n >>= 1;
    }
    return r;
  }

  // Coefficientwise p^e-power (Galois action on the coefficient field).
  Poly coeff_frobenius(std::uint32_t e) const {
    std::vector<Elem> r(c_);
    std::int64_t pe = 1;
    for (std::uint32_t i = 0; i < e; ++i) pe *= ctx_->p();
    for (auto& x : r) x = ctx_->pow(x, pe);
    return Poly(ctx_, std::move(r));
  }

  // Dense index of a monic polynomial of degree d among all monics of
  // that degree (base-q digits, constant term least significant).
  std::uint64_t monic_index() const {
    std::uint64_t idx = 0;
    for (std::size_t i = c_.size() - 1; i-- > 0;)
      idx = idx * ctx_->q() + c_[i];
    return idx;
  }

  static Poly from_monic_index(const FieldCtxPtr& ctx, int d, std::uint64_t idx) {
    std::vector<Elem> c(d + 1);
    for (int i = 0; i < d; ++i) {
      c[i] = static_cast<Elem>(idx % ctx->q());
      idx /= ctx->q();
    }
    c[d] = 1;
    return Poly(ctx, std::move(c));
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string s;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (c_[i] == 0) continue;
      if (!s.empty()) s += " + ";
      bool unit_coeff = (c_[i] == 1);
      if (!unit_coeff || i == 0) s += ctx_->to_string(c_[i]);
      if (i > 0) {
        if (!unit_coeff) s += "*";
        s += "x";
        if (i > 1) s += "^" + std::to_string(i);
      }
    }
    return s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  FieldCtxPtr ctx_;
  std::vector<Elem> c_;
};

inline Poly poly_gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = a % b;
    a = b;
    b = r;
  }
  return a.monic();
}

inline bool coprime(const Poly& a, const Poly& b) {
  Poly g = poly_gcd(a, b);
  return g.degree() == 0;
}

// Extended gcd: returns (g, u, v) monic g = u*a + v*b.
inline std::tuple<Poly, Poly, Poly> poly_xgcd(const Poly& a, const Poly& b) {
  const auto& ctx = a.ctx();
  Poly r0 = a, r1 = b;
  Poly s0 = Poly::constant(ctx, 1), s1 = Poly::zero(ctx);
  Poly t0 = Poly::zero(ctx), t1 = Poly::constant(ctx, 1);
  while (!r1.is_zero()) {
    auto [q, r] = r0.divmod(r1);
    r0 = r1;
    r1 = r;
    Poly s = s0 - q * s1;
    s0 = s1;
    s1 = s;
    Poly t = t0 - q * t1;
    t0 = t1;
    t1 = t;
  }
  if (r0.is_zero()) throw Error(Errc::invalid_input, "xgcd of zero polynomials");
  Elem li = ctx->inv(r0.lead());
  return {r0.scale(li), s0.scale(li), t0.scale(li)};
}

// Inverse of a modulo m; requires gcd(a, m) = 1.
inline Poly poly_invmod(const Poly& a, const Poly& m) {
  auto [g, u, v] = poly_xgcd(a % m, m);
  if (g.degree() != 0) throw Error(Errc::not_coprime, "polynomial not invertible mod m");
  return u % m;
}

// All monic irreducibles of degree exactly d, in lexicographic (index)
// order.  Sieve: a monic composite of degree d has an irreducible
// factor of degree <= d/2.
inline std::vector<Poly> irreducibles_of_degree(const FieldCtxPtr& ctx, int d,
                                                const std::vector<std::vector<Poly>>& lower) {
  std::uint64_t total = 1;
  for (int i = 0; i < d; ++i) total *= ctx->q();
  std::vector<bool> composite(total, false);
  for (int e = 1; e <= d / 2; ++e) {
    std::uint64_t cof = 1;
    for (int i = 0; i < d - e; ++i) cof *= ctx->q();
    for (const Poly& g : lower[e]) {
      for (std::uint64_t j = 0; j < cof; ++j) {
        Poly h = Poly::from_monic_index(ctx, d - e, j);
        composite[(g * h).monic_index()] = true;
      }
    }
  }
  std::vector<Poly> out;
  for (std::uint64_t i = 0; i < total; ++i)
    if (!composite[i]) out.push_back(Poly::from_monic_index(ctx, d, i));
  return out;
}

// All monic irreducibles of degree <= d, sorted by (degree, lex).
inline std::vector<Poly> irreducibles_up_to(const FieldCtxPtr& ctx, int d) {
  if (d < 1) throw Error(Errc::invalid_input, "degree bound must be >= 1");
  std::vector<std::vector<Poly>> by_deg(d + 1);
  for (int e = 1; e <= d; ++e) by_deg[e] = irreducibles_of_degree(ctx, e, by_deg);
  std::vector<Poly> out;
  for (int e = 1; e <= d; ++e)
    out.insert(out.end(), by_deg[e].begin(), by_deg[e].end());
  return out;
}

struct Factorization {
  std::vector<std::pair<Poly, int>> factors;  // (monic irreducible, multiplicity), sorted
  Elem unit = 1;

  Poly product(const FieldCtxPtr& ctx) const {
    Poly r = Poly::constant(ctx, unit);
    for (const auto& [f, e] : factors) r = r * f.pow(e);
    return r;
  }

  int degree() const {
    int d = 0;
    for (const auto& [f, e] : factors) d += f.degree() * e;
    return d;
  }
};

// Trial division by irreducibles in (degree, lex) order.
inline Factorization poly_factor(const Poly& f) {
  if (f.is_zero()) throw Error(Errc::invalid_input, "factorization of zero");
  Factorization out;
  out.unit = f.lead();
  Poly rem = f.monic();
  std::vector<std::vector<Poly>> by_deg(1);
  int d = 1;
  while (rem.degree() > 0) {
    if (d > rem.degree() / 2) {
      // What remains is irreducible.
      out.factors.emplace_back(rem, 1);
      break;
    }
    by_deg.push_back(irreducibles_of_degree(f.ctx(), d, by_deg));
    for (const Poly& p : by_deg[d]) {
      int mult = 0;
      while (p.divides(rem)) {
        rem = rem / p;
        ++mult;
      }
      if (mult) out.factors.emplace_back(p, mult);
    }
    ++d;
  }
  std::sort(out.factors.begin(), out.factors.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

}  // namespace genjac
