#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <tuple>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "genjac/characters.hpp"
#include "genjac/error.hpp"
#include "genjac/genus0.hpp"
#include "genjac/parse.hpp"

namespace genjac {

// ---------------------------------------------------------------------------
// Bundles: the published data of one curve -- per level the abstract
// group, the carrier, and one L-series per character -- plus (optionally)
// the element correspondence psi_r against some other curve's groups.
// ---------------------------------------------------------------------------

// psi_r as an explicit element-to-element table: (key in the source
// group, key in this bundle's group).
using PsiTable = std::vector<std::pair<Key, Key>>;

struct BundleLevel {
  int r = 1;
  std::uint64_t field_size = 0;  // q^r
  int B = 0;
  AbelianStructure G;
  FourierCarrier carrier;
  std::vector<LSeries> series;  // one per character
};

struct LBundle {
  std::string tag;
  std::uint32_t q = 0;
  std::string modulus;               // printable over the prime field
  std::vector<BundleLevel> levels;   // levels[r-1]
  std::vector<PsiTable> psi;         // optional; psi[r-1]: source key -> key here

  const BundleLevel& level(int r) const {
    if (r < 1 || static_cast<std::size_t>(r) > levels.size())
      throw Error(Errc::incomplete_bundle, "bundle has no level " + std::to_string(r));
    return levels[r - 1];
  }
};

inline LBundle build_lbundle(const Genus0SpecPtr& spec, int R, int B,
                             std::uint64_t budget = 1000000) {
  LBundle b;
  b.tag = spec->tag();
  b.q = spec->q();
  b.modulus = spec->modulus().to_string();
  for (int r = 1; r <= R; ++r) {
    JmLevel J(spec, r);
    LevelModel m = build_genus0_model(J, B, budget);
    BundleLevel lev;
    lev.r = r;
    lev.field_size = m.field_size;
    lev.B = B;
    lev.G = std::move(m.G);
    lev.carrier = m.carrier;
    LevelModel view;  // lfun needs G back; keep a light re-bind
    view.r = r;
    view.field_size = lev.field_size;
    view.B = B;
    view.G = lev.G;
    view.closed_points = std::move(m.closed_points);
    view.divisor_counts = std::move(m.divisor_counts);
    view.carrier = lev.carrier;
    for (const auto& chi : character_group(lev.G, r))
      lev.series.push_back(lfun_divisor_sum(view, chi));
    b.levels.push_back(std::move(lev));
  }
  return b;
}

// The class map J_A -> J_B induced by the point map x -> u x + v
// preceded by the l-fold coefficient Frobenius: class(f) maps to
// class(f^(l)((x - v)/u)).
inline Key induced_class_map(const JmLevel& A, const JmLevel& B, Elem u, Elem v, int l,
                             Key k) {
  const auto& F = B.field();
  Poly f(F, A.from_key(k).coeff_frobenius(static_cast<std::uint32_t>(l)).coeffs());
  if (u == 0) throw Error(Errc::invalid_input, "affine map must be invertible");
  Elem ui = F->inv(u);
  Poly arg(F, {F->neg(F->mul(ui, v)), ui});
  Poly comp = Poly::zero(F);
  for (int i = f.degree(); i >= 0; --i)
    comp = comp * arg + Poly::constant(F, f.coeff(i));
  return B.key(B.normalize(comp));
}

// Full psi_r table for the map above.
inline PsiTable induced_psi(const JmLevel& A, const JmLevel& B, Elem u, Elem v, int l,
                            std::uint64_t budget = 1000000) {
  PsiTable t;
  for (Key k : A.enumerate(budget)) t.emplace_back(k, induced_class_map(A, B, u, v, l, k));
  std::sort(t.begin(), t.end());
  return t;
}

// ---------------------------------------------------------------------------
// Count tables: N_d(E) = number of effective degree-d divisors on U in
// the class E, recovered by character inversion.
// ---------------------------------------------------------------------------

struct CountTable {
  int r = 1;
  int B = 0;
  std::vector<Key> elements;                       // sorted group elements
  std::vector<std::vector<std::int64_t>> counts;   // [element index][d]

  std::int64_t at(Key e, int d) const {
    auto it = std::lower_bound(elements.begin(), elements.end(), e);
    if (it == elements.end() || *it != e)
      throw Error(Errc::invalid_input, "element not in count table");
    return counts[static_cast<std::size_t>(it - elements.begin())][d];
  }
};

// N_d(E) = |G|^{-1} sum_chi chi(E)^{-1} a_d(chi), computed in F_P and
// lifted to the symmetric range; honest inputs lift to N_d >= 0.
inline CountTable invert_counts(const LBundle& bundle, int r, int B) {
  const BundleLevel& lev = bundle.level(r);
  if (B > lev.B) throw Error(Errc::invalid_input, "B exceeds the bundle series bound");
  if (lev.series.size() != lev.G.order)
    throw Error(Errc::incomplete_bundle, "bundle does not carry all characters");
  std::map<std::vector<std::uint32_t>, std::size_t> by_exps;
  for (std::size_t i = 0; i < lev.series.size(); ++i) {
    if (lev.series[i].chi.exps.size() != lev.G.invariant_factors.size())
      throw Error(Errc::incomplete_bundle, "character shape does not match the group");
    if (!by_exps.emplace(lev.series[i].chi.exps, i).second)
      throw Error(Errc::incomplete_bundle, "duplicate character in bundle");
  }

  const auto& fc = lev.carrier;
  std::uint64_t inv_order = fc.inv(lev.G.order % fc.P);
  CountTable ct;
  ct.r = r;
  ct.B = B;
  ct.elements = lev.G.elements;
  ct.counts.assign(lev.G.order, std::vector<std::int64_t>(B + 1, 0));
  for (std::size_t i = 0; i < lev.G.order; ++i) {
    Key E = lev.G.elements[i];
    for (int d = 0; d <= B; ++d) {
      std::uint64_t s = 0;
      for (const auto& L : lev.series) {
        std::uint64_t w = fc.inv(chi_value(lev.G, fc, L.chi, E));
        s = fc.add(s, fc.mul(w, L.coeffs[d]));
      }
      std::uint64_t n = fc.mul(s, inv_order);
      if (n >= (fc.P + 1) / 2)
        throw Error(Errc::carrier_too_small,
                    "recovered count does not lift from F_P to a nonnegative integer");
      ct.counts[i][d] = static_cast<std::int64_t>(n);
    }
  }
  return ct;
}

// ---------------------------------------------------------------------------
// Point detection: E is the class of a rational point iff exactly one
// effective degree-1 divisor lies in E.
// ---------------------------------------------------------------------------

struct DetectedPoints {
  int r = 1;
  std::vector<Key> points;  // sorted
  bool no_points = false;   // warning: empty N_1 column
};

inline DetectedPoints detect_points(const CountTable& ct) {
  if (ct.B < 1) throw Error(Errc::invalid_input, "count table lacks the N_1 column");
  DetectedPoints out;
  out.r = ct.r;
  for (std::size_t i = 0; i < ct.elements.size(); ++i) {
    std::int64_t n1 = ct.counts[i][1];
    if (n1 >= 2)
      throw Error(Errc::injectivity_violation,
                  "some class holds two degree-1 divisors (corrupted input)");
    if (n1 == 1) out.points.push_back(ct.elements[i]);
  }
  out.no_points = out.points.empty();
  return out;
}

// ---------------------------------------------------------------------------
// L-function matching: does chi -> chi o psi^{-1} carry bundle A's
// series onto bundle B's, coefficient by coefficient?
// ---------------------------------------------------------------------------

struct MatchReport {
  bool ok = false;
  bool psi_ok = false;
  int levels_checked = 0;
  std::string reason;
};

namespace detail {

// Verified isomorphism check: bijective and multiplicative against a
// generating set of the source group.
inline bool verify_psi(const AbelianStructure& GA, const AbelianStructure& GB,
                       const PsiTable& psi, std::string& why) {
  if (GA.order != GB.order) {
    why = "group orders differ";
    return false;
  }
  if (psi.size() != GA.order) {
    why = "psi table size differs from the group order";
    return false;
  }
  std::unordered_map<Key, Key> f;
  std::unordered_map<Key, bool> hit;
  for (const auto& [a, b] : psi) {
    if (!GA.index.count(a) || !GB.index.count(b)) {
      why = "psi table mentions a key outside the groups";
      return false;
    }
    if (!f.emplace(a, b).second) {
      why = "psi table repeats a source element";
      return false;
    }
    if (hit[b]) {
      why = "psi table is not injective";
      return false;
    }
    hit[b] = true;
  }
  for (Key g : GA.generators) {
    for (Key e : GA.elements) {
      if (f.at(GA.mul(g, e)) != GB.mul(f.at(g), f.at(e))) {
        why = "psi is not multiplicative";
        return false;
      }
    }
  }
  return true;
}

}  // namespace detail

inline MatchReport check_lfun_matching(const LBundle& A, const LBundle& B,
                                       const std::vector<PsiTable>& psi) {
  MatchReport rep;
  int R = static_cast<int>(std::min(A.levels.size(), B.levels.size()));
  if (R == 0 || psi.size() < static_cast<std::size_t>(R))
    throw Error(Errc::incomplete_bundle, "matching needs a psi table for every level");
  for (int r = 1; r <= R; ++r) {
    const BundleLevel& la = A.level(r);
    const BundleLevel& lb = B.level(r);
    std::string why;
    if (!detail::verify_psi(la.G, lb.G, psi[r - 1], why)) {
      rep.ok = false;
      rep.psi_ok = false;
      rep.reason = "level " + std::to_string(r) + ": " + why;
      return rep;
    }
    if (la.carrier.N != lb.carrier.N || la.carrier.P != lb.carrier.P ||
        la.B != lb.B)
      throw Error(Errc::carrier_mismatch,
                  "bundles carry incomparable series at level " + std::to_string(r));

    std::unordered_map<Key, Key> inv;  // psi^{-1}
    for (const auto& [a, b] : psi[r - 1]) inv.emplace(b, a);

    std::map<std::vector<std::uint32_t>, std::size_t> b_index;
    for (std::size_t i = 0; i < lb.series.size(); ++i)
      b_index.emplace(lb.series[i].chi.exps, i);
    if (b_index.size() != lb.G.order)
      throw Error(Errc::incomplete_bundle, "bundle B does not carry all characters");

    if (la.series.size() != la.G.order)
      throw Error(Errc::incomplete_bundle, "bundle A does not carry all characters");
    for (const auto& LA : la.series) {
      // chi' = chi o psi^{-1}, expressed against B's basis
      std::vector<std::uint32_t> exps(lb.G.invariant_factors.size());
      for (std::size_t j = 0; j < lb.G.generators.size(); ++j) {
        std::uint64_t t = chi_exponent(la.G, LA.chi, inv.at(lb.G.generators[j]));
        std::uint64_t step = lb.G.exponent / lb.G.invariant_factors[j];
        if (t % step != 0)
          throw Error(Errc::numerical_failure, "transported character escapes the dual");
        exps[j] = static_cast<std::uint32_t>(t / step);
      }
      const LSeries& LB = lb.series[b_index.at(exps)];
      if (LA.coeffs != LB.coeffs) {
        rep.ok = false;
        rep.psi_ok = true;
        rep.levels_checked = r;
        rep.reason = "level " + std::to_string(r) + ": series differ for a character";
        return rep;
      }
    }
    rep.levels_checked = r;
  }
  rep.ok = true;
  rep.psi_ok = true;
  return rep;
}

// ---------------------------------------------------------------------------
// Twist search: find (alpha, l) with alpha an invertible affine map and
// l a Frobenius exponent such that psi agrees with the induced class map
// after the l-fold Frobenius, on all detected points up to level R.
// ---------------------------------------------------------------------------

struct TwistWitness {
  bool found = false;
  AffineMap alpha;  // x -> u x + v, the matrix class [[u, v], [0, 1]]
  int l = 0;
  int verified_levels = 0;
  std::vector<std::pair<int, AffineMap>> all;  // every verified (l, alpha), sorted
  std::string reason;                          // when not found
};

namespace detail {

// A point of P^1(F_q): affine value or infinity.
using ProjPt = std::optional<Elem>;

// Matrix sending (z0, z1, z2) to (0, infinity, 1); entries over F_q.
struct Mat2 {
  Elem a = 1, b = 0, c = 0, d = 1;
};

inline Mat2 to_standard_triple(const FieldCtxPtr& F, ProjPt z0, ProjPt z1, ProjPt z2) {
  auto sub = [&](Elem x, Elem y) { return F->sub(x, y); };
  if (!z0) return {0, sub(*z2, *z1), 1, F->neg(*z1)};
  if (!z1) return {1, F->neg(*z0), 0, sub(*z2, *z0)};
  if (!z2) return {1, F->neg(*z0), 1, F->neg(*z1)};
  Elem p = sub(*z2, *z1), q = sub(*z2, *z0);
  return {p, F->neg(F->mul(*z0, p)), q, F->neg(F->mul(*z1, q))};
}

inline Mat2 mat_mul(const FieldCtxPtr& F, const Mat2& x, const Mat2& y) {
  return {F->add(F->mul(x.a, y.a), F->mul(x.b, y.c)),
          F->add(F->mul(x.a, y.b), F->mul(x.b, y.d)),
          F->add(F->mul(x.c, y.a), F->mul(x.d, y.c)),
          F->add(F->mul(x.c, y.b), F->mul(x.d, y.d))};
}

inline Mat2 mat_adjugate(const FieldCtxPtr& F, const Mat2& x) {
  return {x.d, F->neg(x.b), F->neg(x.c), x.a};
}

// Convert a detected group element back to the point of U it came from.
inline std::optional<UPoint> element_to_point(const JmLevel& J, Key k) {
  if (k == J.identity()) return UPoint::inf();
  Poly u = J.from_key(k);
  if (u.degree() != 1) return std::nullopt;
  const auto& F = J.field();
  return UPoint::affine(F->neg(F->div(u.coeff(0), u.coeff(1))));
}

}  // namespace detail

inline TwistWitness search_twist(const Genus0SpecPtr& specA, const LBundle& bundleB,
                                 int R, std::uint64_t budget = 1000000) {
  TwistWitness w;
  if (R < 1) throw Error(Errc::invalid_input, "need at least one level");
  if (bundleB.q != specA->q()) {
    w.reason = "base fields differ";
    return w;
  }
  auto baseB = make_field(bundleB.q);
  Genus0SpecPtr specB = make_genus0(parse_poly(baseB, bundleB.modulus));

  if (bundleB.psi.size() < static_cast<std::size_t>(R))
    throw Error(Errc::incomplete_bundle, "bundle lacks psi tables up to the requested level");

  std::vector<JmLevel> JA, JB;
  std::vector<std::unordered_map<Key, Key>> psi(R);
  std::vector<std::vector<Key>> detected(R);
  for (int r = 1; r <= R; ++r) {
    JA.emplace_back(specA, r);
    JB.emplace_back(specB, r);
    const BundleLevel& lev = bundleB.level(r);
    if (lev.G.order != JA.back().order_formula()) {
      w.reason = "group orders differ at level " + std::to_string(r) +
                 ": no isomorphism psi can exist";
      return w;
    }
    std::string why;
    AbelianStructure GA = JA.back().group_structure(budget);
    if (!detail::verify_psi(GA, lev.G, bundleB.psi[r - 1], why)) {
      w.reason = "psi is not an isomorphism at level " + std::to_string(r) + ": " + why;
      return w;
    }
    for (const auto& [a, b] : bundleB.psi[r - 1]) psi[r - 1].emplace(a, b);
    detected[r - 1] = detect_points(invert_counts(bundleB, r, 1)).points;
  }
  if (detected[0].empty()) {
    w.reason = "no points detected at level 1";
    return w;
  }

  const auto& F = specA->base();
  const Poly& mB = specB->modulus();

  // Frobenius exponent bound: least s such that Frob^s fixes every
  // modulus root and acts trivially on every level field checked, so
  // exponents beyond s are indistinguishable from smaller ones here.
  std::uint64_t s = 1;
  for (const auto& [p, e] : specA->modulus_factors().factors)
    s = std::lcm<std::uint64_t>(s, static_cast<std::uint64_t>(p.degree()));
  for (int r = 1; r <= R; ++r) s = std::lcm<std::uint64_t>(s, static_cast<std::uint64_t>(r));

  // Candidate maps from matched point triples at level 1; with fewer
  // than three points on either side, fall back to full enumeration.
  std::vector<detail::ProjPt> ptsA, ptsB;
  for (const auto& [p, k] : JA[0].points_of_U())
    ptsA.push_back(p.infinity ? detail::ProjPt{} : detail::ProjPt{p.x});
  for (Key k : detected[0]) {
    auto p = detail::element_to_point(JB[0], k);
    if (!p) {
      w.reason = "a detected class is not a point class (corrupted input)";
      return w;
    }
    ptsB.push_back(p->infinity ? detail::ProjPt{} : detail::ProjPt{p->x});
  }

  std::vector<AffineMap> cands;
  if (ptsA.size() >= 3 && ptsB.size() >= 3) {
    auto triples = [](std::size_t n) {
      std::vector<std::array<std::size_t, 3>> t;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k)
            if (i != j && j != k && i != k) t.push_back({i, j, k});
      return t;
    };
    for (const auto& ta : triples(ptsA.size())) {
      detail::Mat2 Ma =
          detail::to_standard_triple(F, ptsA[ta[0]], ptsA[ta[1]], ptsA[ta[2]]);
      for (const auto& tb : triples(ptsB.size())) {
        detail::Mat2 Mb =
            detail::to_standard_triple(F, ptsB[tb[0]], ptsB[tb[1]], ptsB[tb[2]]);
        detail::Mat2 al = detail::mat_mul(F, detail::mat_adjugate(F, Mb), Ma);
        if (al.c != 0 || al.d == 0 || al.a == 0) continue;  // must fix infinity
        cands.push_back({F->div(al.a, al.d), F->div(al.b, al.d)});
      }
    }
  } else {
    for (Elem u = 1; u < F->q(); ++u)
      for (Elem v = 0; v < F->q(); ++v) cands.push_back({u, v});
  }
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

  for (std::uint64_t l = 0; l < s; ++l) {
    Poly twisted = specA->modulus().coeff_frobenius(static_cast<std::uint32_t>(l));
    for (const AffineMap& al : cands) {
      // (i) alpha carries the twisted modulus of A onto the modulus of B
      if (pullback_modulus(mB, F, al.u, al.v) != twisted) continue;
      bool ok = true;
      for (int r = 1; r <= R && ok; ++r) {
        const auto& Fr = JA[r - 1].field();
        for (const auto& [p, k] : JA[r - 1].points_of_U()) {
          // image of the point under Frob^l then alpha
          UPoint img = UPoint::inf();
          if (!p.infinity) {
            Elem x = p.x;
            for (std::uint64_t i = 0; i < l; ++i) x = Fr->frobenius(x);
            img = UPoint::affine(Fr->add(Fr->mul(al.u, x), al.v));
          }
          // (ii) agreement with psi on detected points
          Key expect;
          if (!img.infinity && JB[r - 1].modulus().eval(img.x) == 0) {
            ok = false;
            break;
          }
          expect = JB[r - 1].class_of_point(img);
          auto it = psi[r - 1].find(k);
          if (it == psi[r - 1].end() || it->second != expect) {
            ok = false;
            break;
          }
          // (iii) descent: alpha commutes with the q^s Frobenius
          if (!p.infinity) {
            Elem xs = p.x;
            for (std::uint64_t i = 0; i < s; ++i) xs = Fr->frobenius(xs);
            Elem lhs = Fr->add(Fr->mul(al.u, xs), al.v);
            Elem rhs = Fr->add(Fr->mul(al.u, p.x), al.v);
            for (std::uint64_t i = 0; i < s; ++i) rhs = Fr->frobenius(rhs);
            if (lhs != rhs) {
              ok = false;
              break;
            }
          }
        }
      }
      if (ok) w.all.emplace_back(static_cast<int>(l), al);
    }
  }

  if (w.all.empty()) {
    w.reason = "no candidate passed verification";
    return w;
  }
  std::sort(w.all.begin(), w.all.end(), [](const auto& x, const auto& y) {
    return std::tuple(x.first, x.second.u, x.second.v) <
           std::tuple(y.first, y.second.u, y.second.v);
  });
  w.found = true;
  w.l = w.all.front().first;
  w.alpha = w.all.front().second;
  w.verified_levels = R;
  return w;
}

// ---------------------------------------------------------------------------
// The commuting-triangle comparison: for moduli of equal support, a
// reduction map exists only down the divisibility order, and an
// isomorphism commuting with both Abel-Jacobi maps forces m = m'.
// ---------------------------------------------------------------------------

struct Af13Report {
  bool a_divides_b = false;  // reduction J_B -> J_A exists
  bool b_divides_a = false;  // reduction J_A -> J_B exists
  std::uint64_t order_a = 0;
  std::uint64_t order_b = 0;
  bool isomorphic = false;
  std::string verdict;
};

inline Af13Report verify_af13(const Genus0SpecPtr& specA, const Genus0SpecPtr& specB) {
  if (!specA->same_curve(*specB))
    throw Error(Errc::invalid_comparison, "moduli live on different curves");
  auto support = [](const Genus0SpecPtr& s) {
    std::vector<std::string> f;
    for (const auto& [p, e] : s->modulus_factors().factors) f.push_back(p.to_string());
    std::sort(f.begin(), f.end());
    return f;
  };
  if (support(specA) != support(specB))
    throw Error(Errc::invalid_comparison, "moduli have different supports");

  Af13Report rep;
  rep.a_divides_b = specA->modulus().divides(specB->modulus());
  rep.b_divides_a = specB->modulus().divides(specA->modulus());
  rep.order_a = JmLevel(specA, 1).order_formula();
  rep.order_b = JmLevel(specB, 1).order_formula();
  rep.isomorphic = specA->modulus() == specB->modulus();
  if (rep.isomorphic)
    rep.verdict = "equal moduli: the comparison map is the identity";
  else if (rep.order_a == rep.order_b)
    rep.verdict = "orders agree but moduli differ: no commuting isomorphism";
  else
    rep.verdict = "orders " + std::to_string(rep.order_a) + " vs " +
                  std::to_string(rep.order_b) + ": no commuting isomorphism";
  return rep;
}

}  // namespace genjac
