#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <tuple>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "genjac/abelian.hpp"
#include "genjac/characters.hpp"
#include "genjac/error.hpp"
#include "genjac/gf.hpp"

namespace genjac {

// ---------------------------------------------------------------------------
// Short Weierstrass curves y^2 = x^3 + ax + b over a prime field with
// p > 3, plus point arithmetic over any level field.
// ---------------------------------------------------------------------------

struct ECPoint {
  bool inf = true;
  Elem x = 0, y = 0;

  static ECPoint infinity() { return {}; }
  static ECPoint affine(Elem x, Elem y) { return {false, x, y}; }
  bool operator==(const ECPoint& o) const {
    return inf == o.inf && (inf || (x == o.x && y == o.y));
  }
  bool operator<(const ECPoint& o) const {
    auto key = [](const ECPoint& p) {
      return std::tuple(p.inf ? 0 : 1, p.x, p.y);
    };
    return key(*this) < key(o);
  }
};

class WeierstrassCurve {
 public:
  WeierstrassCurve(FieldCtxPtr base, Elem a, Elem b)
      : base_(std::move(base)), a_(a), b_(b) {
    if (base_->k() != 1 || base_->p() <= 3)
      throw Error(Errc::invalid_curve, "need a prime base field with p > 3");
    // 4a^3 + 27b^2 != 0
    Elem d = base_->add(
        base_->mul(base_->from_int(4), base_->mul(a, base_->mul(a, a))),
        base_->mul(base_->from_int(27), base_->mul(b, b)));
    if (d == 0) throw Error(Errc::invalid_curve, "singular curve: discriminant is zero");
  }

  const FieldCtxPtr& base() const { return base_; }
  Elem a() const { return a_; }
  Elem b() const { return b_; }

 private:
  FieldCtxPtr base_;
  Elem a_, b_;
};

using WeierstrassCurvePtr = std::shared_ptr<const WeierstrassCurve>;

inline WeierstrassCurvePtr make_curve(const FieldCtxPtr& base, Elem a, Elem b) {
  return std::make_shared<const WeierstrassCurve>(base, a, b);
}

// Chord-tangent arithmetic over one level field.  The curve
// coefficients are prime-field codes, valid in every level field.
class ECLevel {
 public:
  ECLevel(WeierstrassCurvePtr curve, FieldCtxPtr F)
      : curve_(std::move(curve)), F_(std::move(F)) {}

  const FieldCtxPtr& field() const { return F_; }

  Elem rhs(Elem x) const {
    return F_->add(F_->add(F_->mul(F_->mul(x, x), x), F_->mul(curve_->a(), x)),
                   curve_->b());
  }

  bool on_curve(const ECPoint& P) const {
    return P.inf || F_->mul(P.y, P.y) == rhs(P.x);
  }

  ECPoint neg(const ECPoint& P) const {
    return P.inf ? P : ECPoint::affine(P.x, F_->neg(P.y));
  }

  ECPoint add(const ECPoint& P, const ECPoint& Q) const {
    if (P.inf) return Q;
    if (Q.inf) return P;
    if (P.x == Q.x && Q.y == F_->neg(P.y)) return ECPoint::infinity();
    Elem lam;
    if (P.x == Q.x) {
      Elem num = F_->add(F_->mul(F_->from_int(3), F_->mul(P.x, P.x)), curve_->a());
      lam = F_->div(num, F_->mul(F_->from_int(2), P.y));
    } else {
      lam = F_->div(F_->sub(Q.y, P.y), F_->sub(Q.x, P.x));
    }
    Elem x3 = F_->sub(F_->sub(F_->mul(lam, lam), P.x), Q.x);
    Elem y3 = F_->sub(F_->mul(lam, F_->sub(P.x, x3)), P.y);
    return ECPoint::affine(x3, y3);
  }

  ECPoint frobenius(const ECPoint& P) const {
    return P.inf ? P : ECPoint::affine(F_->frobenius(P.x), F_->frobenius(P.y));
  }

  // O first, then affine points by (x, y) code order.
  std::vector<ECPoint> enumerate() const {
    std::vector<ECPoint> out = {ECPoint::infinity()};
    for (Elem x = 0; x < F_->q(); ++x) {
      Elem r = rhs(x);
      for (Elem y = 0; y < F_->q(); ++y)
        if (F_->mul(y, y) == r) out.push_back(ECPoint::affine(x, y));
    }
    return out;
  }

 private:
  WeierstrassCurvePtr curve_;
  FieldCtxPtr F_;
};

// Value at `at` of the line through P and Q divided by the vertical
// through P+Q: the function with divisor (P) + (Q) - (P+Q) - (O),
// normalized so its leading coefficient at O is 1 (hence the cocycle
// below satisfies c(P, O) = 1 identically).
inline Elem miller_line_eval(const ECLevel& ec, const ECPoint& P, const ECPoint& Q,
                             const ECPoint& at) {
  if (at.inf) throw Error(Errc::invalid_input, "evaluation point must be affine");
  const auto& F = ec.field();
  if (P.inf || Q.inf) return 1;
  if (P.x == Q.x && Q.y == F->neg(P.y)) {
    Elem v = F->sub(at.x, P.x);
    if (v == 0) throw Error(Errc::evaluation_at_support, "vertical vanishes at the point");
    return v;
  }
  Elem lam;
  if (P == Q) {
    // a = rhs(1) - rhs(0) - 1 recovers the curve coefficient
    Elem a = F->sub(F->sub(ec.rhs(1), ec.rhs(0)), 1);
    Elem three_x2 = F->mul(F->from_int(3), F->mul(P.x, P.x));
    lam = F->div(F->add(three_x2, a), F->mul(F->from_int(2), P.y));
  } else {
    lam = F->div(F->sub(Q.y, P.y), F->sub(Q.x, P.x));
  }
  ECPoint R = ec.add(P, Q);
  Elem num = F->sub(F->sub(at.y, P.y), F->mul(lam, F->sub(at.x, P.x)));
  Elem den = F->sub(at.x, R.x);
  if (num == 0 || den == 0)
    throw Error(Errc::evaluation_at_support, "line or vertical vanishes at the point");
  return F->div(num, den);
}

// ---------------------------------------------------------------------------
// The curve-with-modulus data: a reduced modulus of s >= 2 distinct
// affine rational points, basepoint O.
// ---------------------------------------------------------------------------

class EllipticSpec {
 public:
  EllipticSpec(WeierstrassCurvePtr curve, std::vector<ECPoint> modulus)
      : curve_(std::move(curve)), m_(std::move(modulus)) {
    if (m_.size() < 2)
      throw Error(Errc::hypothesis_violated,
                  "need s >= 2 modulus points so that dim J_m = s >= 2");
    ECLevel ec(curve_, curve_->base());
    for (const auto& P : m_) {
      if (P.inf) throw Error(Errc::invalid_input, "modulus points must be affine");
      if (!ec.on_curve(P)) throw Error(Errc::invalid_input, "modulus point not on the curve");
    }
    auto sorted = m_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error(Errc::invalid_input, "modulus points must be distinct");
  }

  const WeierstrassCurvePtr& curve() const { return curve_; }
  const std::vector<ECPoint>& modulus() const { return m_; }
  int s() const { return static_cast<int>(m_.size()); }
  int pi() const { return s(); }  // dim J_m = g + deg m - 1 = s
  std::uint32_t q() const { return curve_->base()->q(); }

  FieldCtxPtr level_field(int r) const { return make_field(curve_->base()->p(), r); }

  std::string tag() const {
    std::string t = "elliptic:q=" + std::to_string(q()) + ":a=" +
                    std::to_string(curve_->a()) + ":b=" + std::to_string(curve_->b()) +
                    ":m=";
    for (const auto& P : m_)
      t += "(" + std::to_string(P.x) + "," + std::to_string(P.y) + ");";
    return t;
  }

 private:
  WeierstrassCurvePtr curve_;
  std::vector<ECPoint> m_;
};

using EllipticSpecPtr = std::shared_ptr<const EllipticSpec>;

inline EllipticSpecPtr make_elliptic(const WeierstrassCurvePtr& c,
                                     std::vector<ECPoint> modulus) {
  return std::make_shared<const EllipticSpec>(c, std::move(modulus));
}

// A ray class in normal form: underlying point of E plus a torus tuple
// with first coordinate scaled to 1.
struct RayClass {
  ECPoint P;
  std::vector<Elem> t;
};

// J_m(F_{q^r}) as the extension of E(F_{q^r}) by the torus
// (prod F^*)/F^*.  A class (P, t) stands for [D_P] + i(t), where D_P is
// a fixed divisor of class (P) - (O) chosen coprime to the modulus:
// (P) - (O) itself when P avoids the support, and otherwise a pair of
// points summing to P (rational points when the level field has enough
// of them, a Galois-conjugate pair over the quadratic extension at the
// base level).  Multiplication evaluates the function with divisor
// D_P + D_Q - D_{P+Q}, normalized to leading coefficient 1 at O, at the
// modulus points.  That function is unique, so the cocycle identity is
// exact and associativity holds on the nose.
class EllipticLevel {
 public:
  EllipticLevel(EllipticSpecPtr spec, int r)
      : spec_(std::move(spec)),
        r_(r),
        F_(spec_->level_field(r)),
        ec_(spec_->curve(), F_),
        W_(r == 1 ? spec_->level_field(2) : F_),
        ecW_(spec_->curve(), W_) {
    // modulus coordinates are prime-field codes, valid at every level
    for (const auto& P : spec_->modulus()) m_.push_back(P);
    points_ = ec_.enumerate();
    pointsW_ = r_ == 1 ? ecW_.enumerate() : points_;
    for (const auto& P : m_) reps_.emplace(P, support_rep(P));
  }

  const EllipticSpecPtr& spec() const { return spec_; }
  int r() const { return r_; }
  const FieldCtxPtr& field() const { return F_; }
  const ECLevel& ec() const { return ec_; }
  const std::vector<ECPoint>& curve_points() const { return points_; }

  bool in_support(const ECPoint& P) const {
    return std::find(m_.begin(), m_.end(), P) != m_.end();
  }

  std::uint64_t order_formula() const {
    std::uint64_t n = points_.size();
    for (int i = 1; i < spec_->s(); ++i) n *= F_->q() - 1;
    return n;
  }

  Key key(const RayClass& c) const {
    std::uint64_t pt = c.P.inf ? 0 : 1 + static_cast<std::uint64_t>(c.P.x) * F_->q() + c.P.y;
    Key k = pt;
    for (int i = 1; i < spec_->s(); ++i) k = k * (F_->q() - 1) + (c.t[i] - 1);
    return k;
  }

  RayClass from_key(Key k) const {
    RayClass c;
    c.t.assign(spec_->s(), 1);
    for (int i = spec_->s(); i-- > 1;) {
      c.t[i] = static_cast<Elem>(k % (F_->q() - 1)) + 1;
      k /= F_->q() - 1;
    }
    if (k == 0) {
      c.P = ECPoint::infinity();
    } else {
      --k;
      c.P = ECPoint::affine(static_cast<Elem>(k / F_->q()), static_cast<Elem>(k % F_->q()));
    }
    return c;
  }

  Key identity() const {
    RayClass c;
    c.t.assign(spec_->s(), 1);
    return key(c);
  }

  Key mul(Key a, Key b) const {
    RayClass A = from_key(a), B = from_key(b);
    RayClass out;
    out.P = ec_.add(A.P, B.P);
    auto g = gamma(A.P, B.P);
    out.t.resize(spec_->s());
    for (int i = 0; i < spec_->s(); ++i)
      out.t[i] = F_->mul(F_->mul(A.t[i], B.t[i]), g[i]);
    normalize(out);
    return key(out);
  }

  Key inv(Key a) const {
    RayClass A = from_key(a);
    RayClass out;
    out.P = ec_.neg(A.P);
    auto g = gamma(A.P, out.P);
    out.t.resize(spec_->s());
    for (int i = 0; i < spec_->s(); ++i)
      out.t[i] = F_->inv(F_->mul(A.t[i], g[i]));
    normalize(out);
    return key(out);
  }

  Key pow(Key a, std::uint64_t e) const {
    return detail::key_pow([this](Key x, Key y) { return mul(x, y); }, identity(), a, e);
  }

  // Class of (u) - (O).
  Key abel_jacobi(const ECPoint& u) const {
    if (!ec_.on_curve(u)) throw Error(Errc::invalid_input, "point not on the curve");
    if (in_support(u)) throw Error(Errc::not_coprime, "point lies in Supp(m)");
    RayClass c{u, std::vector<Elem>(spec_->s(), 1)};
    return key(c);
  }

  std::vector<Key> enumerate(std::uint64_t budget = 1000000) const {
    if (order_formula() > budget)
      throw Error(Errc::budget_exceeded, "group order exceeds budget");
    std::vector<Key> out;
    std::vector<Elem> t(spec_->s(), 1);
    for (const auto& P : points_) {
      std::function<void(int)> walk = [&](int i) {
        if (i == spec_->s()) {
          RayClass c{P, t};
          out.push_back(key(c));
          return;
        }
        for (Elem v = 1; v < F_->q(); ++v) {
          t[i] = v;
          walk(i + 1);
        }
        t[i] = 1;
      };
      walk(1);
    }
    return out;
  }

  AbelianStructure group_structure(std::uint64_t budget = 1000000) const {
    return abelian_structure(enumerate(budget), identity(),
                             [this](Key a, Key b) { return mul(a, b); });
  }

  // Forget the torus part: the canonical surjection onto E.
  ECPoint forget(Key a) const { return from_key(a).P; }

 private:
  using Divisor = std::vector<std::pair<ECPoint, int>>;

  void normalize(RayClass& c) const {
    Elem inv0 = F_->inv(c.t[0]);
    for (auto& v : c.t) v = F_->mul(v, inv0);
  }

  bool base_rational(const ECPoint& P) const {
    return P.inf || (W_->in_prime_field(P.x) && W_->in_prime_field(P.y));
  }

  // A coprime divisor of class (P) - (O) for a support point P, stable
  // under the base-field Galois action so that rational classes keep
  // rational normal forms at every level.  Try a split into two base
  // points off the support; when the rational configuration is
  // degenerate, use a Frobenius orbit (within the working field) whose
  // elliptic sum is P, possibly corrected by one rational point.
  Divisor support_rep(const ECPoint& P) const {
    for (const auto& R : pointsW_) {
      if (R.inf || in_support(R) || !base_rational(R)) continue;
      ECPoint T = ecW_.add(P, ecW_.neg(R));
      if (T.inf || in_support(T) || !base_rational(T)) continue;
      return {{R, 1}, {T, 1}};
    }
    for (const auto& Q : pointsW_) {
      if (Q.inf || base_rational(Q)) continue;
      Divisor orbit = {{Q, 1}};
      ECPoint S = Q;
      ECPoint C = ecW_.frobenius(Q);
      while (!(C == Q)) {
        orbit.emplace_back(C, 1);
        S = ecW_.add(S, C);
        C = ecW_.frobenius(C);
      }
      if (S == P) return orbit;
      ECPoint R = ecW_.add(P, ecW_.neg(S));
      if (R.inf || in_support(R) || !base_rational(R)) continue;
      orbit.emplace_back(R, 1);
      return orbit;
    }
    throw Error(Errc::numerical_failure, "no coprime representative for a support fiber");
  }

  const Divisor& rep_divisor(const ECPoint& P) const {
    static const Divisor empty;
    if (P.inf) return empty;
    auto it = reps_.find(P);
    if (it == reps_.end()) it = reps_.emplace(P, Divisor{{P, 1}}).first;
    return it->second;
  }

  // Values at the modulus points of the normalized function with
  // divisor D_P + D_Q - D_{P+Q}: the factor set of the extension.
  std::vector<Elem> gamma(const ECPoint& P, const ECPoint& Q) const {
    std::vector<Elem> one(spec_->s(), 1);
    if (P.inf || Q.inf) return one;
    auto ck = std::make_pair(P, Q);
    auto hit = gamma_cache_.find(ck);
    if (hit != gamma_cache_.end()) return hit->second;
    ECPoint S = ec_.add(P, Q);
    Divisor D;
    auto app = [&D](const Divisor& part, int sign) {
      for (const auto& [pt, n] : part) D.emplace_back(pt, sign * n);
    };
    app(rep_divisor(P), 1);
    app(rep_divisor(Q), 1);
    app(rep_divisor(S), -1);
    std::vector<Elem> vals = eval_divisor(D);
    // the function is rational, so at the base level (worked in the
    // quadratic extension) the values carry prime-subfield codes
    if (r_ == 1)
      for (Elem v : vals)
        if (!W_->in_prime_field(v))
          throw Error(Errc::numerical_failure, "cocycle value is not rational");
    gamma_cache_.emplace(ck, vals);
    return vals;
  }

  // Values at the modulus points of the normalized function of a
  // principal divisor supported away from the modulus.  Positive and
  // negative parts are reduced by separate Miller chains sharing their
  // endpoint, so the final verticals cancel; an auxiliary point
  // prepended to both chains shifts the whole trajectory when some
  // intermediate line or vertical hits the modulus.
  std::vector<Elem> eval_divisor(const Divisor& D) const {
    std::vector<ECPoint> pos, neg;
    for (const auto& [pt, n] : D)
      for (int i = 0; i < (n > 0 ? n : -n); ++i) (n > 0 ? pos : neg).push_back(pt);
    auto process = [this](const std::vector<ECPoint>& list, ECPoint& T) {
      std::vector<Elem> acc(spec_->s(), 1);
      T = ECPoint::infinity();
      for (const auto& P : list) {
        for (int i = 0; i < spec_->s(); ++i)
          acc[i] = W_->mul(acc[i], miller_line_eval(ecW_, T, P, m_[i]));
        T = ecW_.add(T, P);
      }
      return acc;
    };
    for (std::size_t ai = 0; ai <= pointsW_.size(); ++ai) {
      std::vector<ECPoint> lp = pos, ln = neg;
      if (ai > 0) {
        const ECPoint& R = pointsW_[ai - 1];
        if (R.inf) continue;
        lp.insert(lp.begin(), R);
        ln.insert(ln.begin(), R);
      }
      try {
        ECPoint Ta, Tb;
        std::vector<Elem> a = process(lp, Ta);
        std::vector<Elem> b = process(ln, Tb);
        if (!(Ta == Tb)) throw Error(Errc::invalid_input, "divisor is not principal");
        std::vector<Elem> out(spec_->s());
        for (int i = 0; i < spec_->s(); ++i) out[i] = W_->div(a[i], b[i]);
        return out;
      } catch (const Error& e) {
        if (e.code() != Errc::evaluation_at_support) throw;
      }
    }
    throw Error(Errc::evaluation_at_support,
                "no auxiliary shift gives a nonsingular evaluation chain");
  }

  EllipticSpecPtr spec_;
  int r_;
  FieldCtxPtr F_;
  ECLevel ec_;
  FieldCtxPtr W_;  // working field for evaluations: quadratic at r=1
  ECLevel ecW_;
  std::vector<ECPoint> m_;
  std::vector<ECPoint> points_;
  std::vector<ECPoint> pointsW_;
  mutable std::map<ECPoint, Divisor> reps_;
  mutable std::map<std::pair<ECPoint, ECPoint>, std::vector<Elem>> gamma_cache_;
};

// ---------------------------------------------------------------------------
// Closed points of U on E over the base field, and the level-1
// L-function model reusing the generic LevelModel interfaces.
// ---------------------------------------------------------------------------

struct ECClosedPoint {
  int degree = 1;
  ECPoint rep;  // a point of E(F_{q^degree}), minimal in its Frobenius orbit
};

// Galois orbits of geometric points of U, of degree <= B over F_q.
inline std::vector<ECClosedPoint> ec_closed_points(const EllipticSpecPtr& spec, int B) {
  std::vector<ECClosedPoint> out;
  for (int d = 1; d <= B; ++d) {
    ECLevel ec(spec->curve(), spec->level_field(d));
    for (const auto& P : ec.enumerate()) {
      if (P.inf) continue;
      // orbit under the q-power Frobenius; keep exact-degree minimal reps
      std::vector<ECPoint> orbit = {P};
      ECPoint Q = ec.frobenius(P);
      while (!(Q == P)) {
        orbit.push_back(Q);
        Q = ec.frobenius(Q);
      }
      if (static_cast<int>(orbit.size()) != d) continue;
      if (!(P == *std::min_element(orbit.begin(), orbit.end()))) continue;
      if (d == 1 &&
          std::find(spec->modulus().begin(), spec->modulus().end(), P) !=
              spec->modulus().end())
        continue;
      out.push_back({d, P});
    }
  }
  return out;
}

// Class in J_m(F_q) of the degree-d closed point y: the product of the
// Abel-Jacobi classes of the orbit, computed at level d; rationality
// lands every coordinate in the prime subfield.
inline Key ec_class_of_closed_point(const EllipticLevel& J1, const ECClosedPoint& y,
                                    std::map<int, std::shared_ptr<EllipticLevel>>& cache) {
  if (y.degree == 1) return J1.abel_jacobi(y.rep);
  auto it = cache.find(y.degree);
  if (it == cache.end())
    it = cache.emplace(y.degree,
                       std::make_shared<EllipticLevel>(J1.spec(), y.degree)).first;
  const EllipticLevel& Jd = *it->second;
  Key acc = Jd.identity();
  ECPoint Q = y.rep;
  for (int i = 0; i < y.degree; ++i) {
    acc = Jd.mul(acc, Jd.abel_jacobi(Q));
    Q = Jd.ec().frobenius(Q);
  }
  RayClass c = Jd.from_key(acc);
  const auto& Fd = Jd.field();
  if (!(c.P.inf || (Fd->in_prime_field(c.P.x) && Fd->in_prime_field(c.P.y))))
    throw Error(Errc::numerical_failure, "closed-point class is not rational");
  for (Elem v : c.t)
    if (!Fd->in_prime_field(v))
      throw Error(Errc::numerical_failure, "closed-point class is not rational");
  return J1.key(c);  // codes agree across levels on the prime subfield
}

// Level-1 model: group, closed points with classes, and per-class
// effective-divisor counts, ready for the generic L-function routines.
inline LevelModel build_elliptic_model(const EllipticSpecPtr& spec, int B,
                                       std::uint64_t budget = 1000000) {
  EllipticLevel J1(spec, 1);
  LevelModel m;
  m.r = 1;
  m.field_size = spec->q();
  m.B = B;
  m.G = J1.group_structure(budget);
  m.carrier = carrier_for(m.G.exponent, m.field_size, B);

  m.closed_points.emplace_back(1, J1.identity());  // the basepoint O
  std::map<int, std::shared_ptr<EllipticLevel>> cache;
  for (const auto& y : ec_closed_points(spec, B))
    m.closed_points.emplace_back(y.degree, ec_class_of_closed_point(J1, y, cache));

  // Effective divisors as closed-point multisets, counted per class.
  std::vector<std::map<Key, std::uint64_t>> dp(B + 1);
  dp[0][J1.identity()] = 1;
  for (const auto& [d, cls] : m.closed_points)
    for (int deg = d; deg <= B; ++deg)
      for (const auto& [k, c] : dp[deg - d]) dp[deg][J1.mul(k, cls)] += c;
  m.divisor_counts.assign(B + 1, std::vector<std::uint64_t>(m.G.order, 0));
  for (int d = 0; d <= B; ++d)
    for (const auto& [k, c] : dp[d]) m.divisor_counts[d][m.G.index.at(k)] += c;
  return m;
}

}  // namespace genjac
