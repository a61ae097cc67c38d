#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "genjac/abelian.hpp"
#include "genjac/error.hpp"
#include "genjac/gf.hpp"
#include "genjac/poly.hpp"

namespace genjac {

// P^1 over F_q with base point at infinity and an affine effective
// modulus m(x) of degree >= 3.  J_m(F_{q^r}) is the unit group of
// F_{q^r}[x]/(m) modulo scalars, in the normal form whose lowest-degree
// nonzero coefficient is 1.
class Genus0Spec {
 public:
  // require_dim2 = false admits small moduli as reduction targets;
  // such specs are rejected wherever the dim >= 2 hypothesis is used.
  Genus0Spec(FieldCtxPtr base, Poly modulus, bool require_dim2 = true)
      : base_(std::move(base)), m_(std::move(modulus)) {
    if (base_->k() != 1)
      throw Error(Errc::invalid_input, "curve base field must be a prime field");
    if (m_.degree() < 1 || !m_.is_monic())
      throw Error(Errc::invalid_input, "modulus must be monic of positive degree");
    if (require_dim2 && m_.degree() < 3)
      throw Error(Errc::hypothesis_violated,
                  "deg m >= 3 required so that dim J_m = deg m - 1 >= 2");
    factors_ = poly_factor(m_);
  }

  const FieldCtxPtr& base() const { return base_; }
  std::uint32_t q() const { return base_->q(); }
  const Poly& modulus() const { return m_; }
  const Factorization& modulus_factors() const { return factors_; }
  int pi() const { return m_.degree() - 1; }  // arithmetic genus of U

  // F_{q^r}, built independently per level.
  FieldCtxPtr level_field(int r) const {
    if (r < 1) throw Error(Errc::invalid_input, "level must be >= 1");
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = level_cache_.find(r);
    if (it != level_cache_.end()) return it->second;
    auto ctx = make_field(base_->p(), r);
    level_cache_.emplace(r, ctx);
    return ctx;
  }

  bool same_curve(const Genus0Spec& o) const { return q() == o.q(); }

  std::string tag() const { return "genus0:q=" + std::to_string(q()) + ":m=" + m_.to_string(); }

 private:
  FieldCtxPtr base_;
  Poly m_;
  Factorization factors_;
  mutable std::mutex cache_mutex_;
  mutable std::map<int, FieldCtxPtr> level_cache_;
};

using Genus0SpecPtr = std::shared_ptr<const Genus0Spec>;

inline Genus0SpecPtr make_genus0(const Poly& m) {
  return std::make_shared<const Genus0Spec>(m.ctx(), m);
}

inline Genus0SpecPtr make_genus0_aux(const Poly& m) {
  return std::make_shared<const Genus0Spec>(m.ctx(), m, false);
}

// A point of U at some level: infinity or an affine field element.
struct UPoint {
  bool infinity = true;
  Elem x = 0;

  static UPoint inf() { return {}; }
  static UPoint affine(Elem a) { return {false, a}; }
  bool operator==(const UPoint& o) const {
    return infinity == o.infinity && (infinity || x == o.x);
  }
};

// A closed point of U: infinity or a monic irreducible coprime to m.
struct ClosedPoint {
  bool infinity = true;
  Poly p;  // monic irreducible over the level field

  int degree() const { return infinity ? 1 : p.degree(); }
  static ClosedPoint inf() { return {}; }
  static ClosedPoint affine(Poly f) { return {false, std::move(f)}; }
};

struct EffectiveDivisor {
  std::vector<std::pair<ClosedPoint, int>> parts;  // multiplicities may be negative
                                                   // for formal differences
  int degree() const {
    int d = 0;
    for (const auto& [pt, n] : parts) d += pt.degree() * n;
    return d;
  }
};

// Arithmetic of J_m(F_{q^r}) at a fixed level.  Classes are carried as
// packed keys: base-|F| digits of the canonical representative.
class JmLevel {
 public:
  JmLevel(Genus0SpecPtr spec, int r)
      : spec_(std::move(spec)), r_(r), F_(spec_->level_field(r)) {
    m_ = lift(spec_->modulus());
  }

  const Genus0SpecPtr& spec() const { return spec_; }
  int r() const { return r_; }
  const FieldCtxPtr& field() const { return F_; }
  const Poly& modulus() const { return m_; }

  // Coefficients of the base modulus are prime-field codes, valid in
  // every level field as-is.
  Poly lift(const Poly& f) const { return Poly(F_, f.coeffs()); }

  Key key(const Poly& u) const {
    Key k = 0;
    for (int i = m_.degree(); i-- > 0;) k = k * F_->q() + u.coeff(i);
    return k;
  }

  Poly from_key(Key k) const {
    std::vector<Elem> c(m_.degree());
    for (int i = 0; i < m_.degree(); ++i) {
      c[i] = static_cast<Elem>(k % F_->q());
      k /= F_->q();
    }
    return Poly(F_, std::move(c));
  }

  // Reduce mod m and rescale so the lowest-degree nonzero coefficient
  // is 1.  Throws InvalidClass on representatives not coprime to m.
  Poly normalize(const Poly& u) const {
    Poly v = u % m_;
    if (!coprime(v, m_)) throw Error(Errc::invalid_class, "representative not coprime to m");
    for (std::size_t i = 0; i < v.coeffs().size(); ++i) {
      if (v.coeff(i) != 0) return v.scale(F_->inv(v.coeff(i)));
    }
    throw Error(Errc::invalid_class, "zero representative");
  }

  Key identity() const { return key(Poly::constant(F_, 1)); }

  Key mul(Key a, Key b) const { return key(normalize(from_key(a) * from_key(b))); }

  Key inv(Key a) const { return key(normalize(poly_invmod(from_key(a), m_))); }

  Key pow(Key a, std::uint64_t e) const { return detail::key_pow([this](Key x, Key y) { return mul(x, y); }, identity(), a, e); }

  // Class of the divisor (zeros of f) - deg(f) * infinity.
  Key class_of_poly(const Poly& f) const {
    if (!coprime(f % m_, m_)) throw Error(Errc::not_coprime, "divisor support meets m");
    return key(normalize(f));
  }

  Key class_of_point(const UPoint& u) const {
    if (u.infinity) return identity();
    if (m_.eval(u.x) == 0) throw Error(Errc::not_coprime, "point lies in Supp(m)");
    return class_of_poly(Poly::linear_root(F_, u.x));
  }

  Key class_of_divisor(const EffectiveDivisor& D) const {
    Key acc = identity();
    for (const auto& [pt, n] : D.parts) {
      if (pt.infinity) continue;  // the base point contributes trivially
      Key c = class_of_poly(pt.p);
      if (n >= 0)
        acc = mul(acc, pow(c, n));
      else
        acc = mul(acc, pow(inv(c), -n));
    }
    return acc;
  }

  // Coefficientwise q-power Frobenius on the canonical representative:
  // the arithmetic Galois action on J_m(F_{q^r}).
  Key frobenius(Key a) const {
    // base is a prime field, so the q-power is one p-power
    return key(normalize(from_key(a).coeff_frobenius(1)));
  }

  // All F_{q^r}-rational points of U with their Abel-Jacobi classes,
  // infinity first, affine points in code order.
  std::vector<std::pair<UPoint, Key>> points_of_U() const {
    std::vector<std::pair<UPoint, Key>> out;
    out.emplace_back(UPoint::inf(), identity());
    for (Elem a = 0; a < F_->q(); ++a) {
      if (m_.eval(a) != 0)
        out.emplace_back(UPoint::affine(a), class_of_point(UPoint::affine(a)));
    }
    return out;
  }

  // All classes, by enumeration of normalized units.
  std::vector<Key> enumerate(std::uint64_t budget = 1000000) const {
    const std::uint64_t total = order_formula();
    if (total > budget) throw Error(Errc::budget_exceeded, "group order exceeds budget");
    std::vector<Key> out;
    std::uint64_t n_reprs = 1;
    for (int i = 0; i < m_.degree(); ++i) n_reprs *= F_->q();
    for (std::uint64_t code = 1; code < n_reprs; ++code) {
      Poly u = representative_from_code(code);
      // keep only normalized representatives
      bool normalized = false;
      for (std::size_t i = 0; i < u.coeffs().size(); ++i) {
        if (u.coeff(i) != 0) {
          normalized = (u.coeff(i) == 1);
          break;
        }
      }
      if (!normalized) continue;
      if (!coprime(u, m_)) continue;
      out.push_back(key(u));
    }
    return out;
  }

  // prod over irreducible factors p^e of m over F_{q^r} of
  // (Q^d - 1) Q^{d(e-1)}, divided by (Q - 1), with Q = q^r.
  std::uint64_t order_formula() const {
    const std::uint64_t Q = F_->q();
    Factorization fac = poly_factor(m_);
    __uint128_t prod = 1;
    for (const auto& [p, e] : fac.factors) {
      std::uint64_t Qd = 1;
      for (int i = 0; i < p.degree(); ++i) Qd *= Q;
      prod *= Qd - 1;
      for (int i = 0; i < (e - 1) * p.degree(); ++i) prod *= Q;
    }
    return static_cast<std::uint64_t>(prod / (Q - 1));
  }

  AbelianStructure group_structure(std::uint64_t budget = 1000000) const {
    auto elems = enumerate(budget);
    return abelian_structure(std::move(elems), identity(),
                             [this](Key a, Key b) { return mul(a, b); });
  }

  // Monic irreducibles of degree <= B coprime to m: the closed points
  // of U at this level (infinity excluded).
  std::vector<Poly> closed_points(int B) const {
    std::vector<Poly> out;
    for (const Poly& p : irreducibles_up_to(F_, B))
      if (!p.divides(m_)) out.push_back(p);
    return out;
  }

 private:
  Poly representative_from_code(std::uint64_t code) const {
    std::vector<Elem> c(m_.degree());
    for (int i = 0; i < m_.degree(); ++i) {
      c[i] = static_cast<Elem>(code % F_->q());
      code /= F_->q();
    }
    return Poly(F_, std::move(c));
  }

  Genus0SpecPtr spec_;
  int r_;
  FieldCtxPtr F_;
  Poly m_;
};

// Canonical surjection J_{m'} -> J_m for m | m'.  Throws NoCanonicalMap
// otherwise: without divisibility there is no morphism commuting with
// the Abel-Jacobi embeddings.
inline Key reduction_map(const JmLevel& from, const JmLevel& to, Key a) {
  if (!from.spec()->same_curve(*to.spec()) || from.r() != to.r())
    throw Error(Errc::invalid_input, "reduction requires same curve and level");
  if (!to.spec()->modulus().divides(from.spec()->modulus()))
    throw Error(Errc::no_canonical_map, "m does not divide m'");
  return to.key(to.normalize(from.from_key(a)));
}

// Affine map x -> u*x + v, as the matrix [[u, v], [0, 1]] mod scalars.
struct AffineMap {
  Elem u = 1;
  Elem v = 0;
  bool is_identity() const { return u == 1 && v == 0; }
  bool operator==(const AffineMap& o) const { return u == o.u && v == o.v; }
  bool operator<(const AffineMap& o) const { return std::pair(u, v) < std::pair(o.u, o.v); }
};

// m composed with the map, made monic again.
inline Poly pullback_modulus(const Poly& m, const FieldCtxPtr& F, Elem u, Elem v) {
  Poly arg(F, {v, u});
  Poly comp = Poly::constant(F, m.coeff(m.degree()));
  for (int i = m.degree(); i-- > 0;) comp = comp * arg + Poly::constant(F, m.coeff(i));
  return comp.monic();
}

// All affine maps over F_q fixing infinity with pullback of m equal
// to m (up to the forced scalar).
inline std::vector<AffineMap> automorphisms_fixing_data(const Genus0Spec& spec) {
  std::vector<AffineMap> out;
  const auto& F = spec.base();
  for (Elem u = 1; u < F->q(); ++u) {
    for (Elem v = 0; v < F->q(); ++v) {
      if (pullback_modulus(spec.modulus(), F, u, v) == spec.modulus())
        out.push_back({u, v});
    }
  }
  return out;
}

// A rational function with prescribed orders at points of Supp(m) and
// no other affine zeros or poles: a monomial in the modulus factors.
// target: (irreducible factor of m, order), order of any sign.
inline std::pair<Poly, Poly> function_with_orders(
    const Genus0Spec& spec, const std::vector<std::pair<Poly, int>>& target) {
  const auto& F = spec.base();
  Poly num = Poly::constant(F, 1), den = Poly::constant(F, 1);
  for (const auto& [p, n] : target) {
    bool in_support = false;
    for (const auto& [f, e] : spec.modulus_factors().factors)
      if (f == p) in_support = true;
    if (!in_support)
      throw Error(Errc::invalid_input, "target support must lie in Supp(m)");
    if (n > 0)
      num = num * p.pow(n);
    else if (n < 0)
      den = den * p.pow(-n);
  }
  return {num, den};
}

}  // namespace genjac
