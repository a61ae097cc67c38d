#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "genjac/error.hpp"
#include "genjac/genus0.hpp"

namespace genjac {

// ---------------------------------------------------------------------------
// Stabilizer shadow: for each nonzero a, how many points u of U have
// j(u)·a again a point class?  Finiteness of (U+a) ∩ U over the
// algebraic closure shows up here as a uniform small bound across
// levels.
// ---------------------------------------------------------------------------

struct StabReport {
  int r = 1;
  std::uint64_t num_points = 0;  // #U(F_{q^r}): the identity row, reported apart
  std::vector<std::pair<Key, std::uint64_t>> counts;  // per nonzero a
  std::uint64_t max_count = 0;
  std::uint64_t claimed_bound = 0;  // deg(m) + 2, the desk constant
  bool bound_ok = false;
};

inline StabReport stab_counts(const Genus0SpecPtr& spec, int r,
                              std::uint64_t budget = 1000000) {
  JmLevel J(spec, r);
  StabReport rep;
  rep.r = r;
  rep.claimed_bound = static_cast<std::uint64_t>(spec->modulus().degree()) + 2;
  std::vector<Key> img;
  for (const auto& [p, k] : J.points_of_U()) img.push_back(k);
  std::sort(img.begin(), img.end());
  rep.num_points = img.size();
  for (Key a : J.enumerate(budget)) {
    if (a == J.identity()) continue;
    std::uint64_t n = 0;
    for (Key u : img)
      if (std::binary_search(img.begin(), img.end(), J.mul(u, a))) ++n;
    rep.counts.emplace_back(a, n);
    rep.max_count = std::max(rep.max_count, n);
  }
  rep.bound_ok = rep.max_count <= rep.claimed_bound;
  return rep;
}

// ---------------------------------------------------------------------------
// Unique pi-fold sums: fraction of group elements whose fiber under
// the degree-pi Abel-Jacobi extension holds exactly one effective
// divisor.
// ---------------------------------------------------------------------------

struct SumFractionReport {
  int r = 1;
  int pi = 0;
  std::uint64_t order = 0;
  std::uint64_t unique = 0;          // elements with a one-divisor fiber
  std::uint64_t total_divisors = 0;  // #Div_{>=0}^pi(U)

  // fraction = unique / order, exact rational
  bool operator<(const SumFractionReport& o) const {
    return static_cast<__uint128_t>(unique) * o.order <
           static_cast<__uint128_t>(o.unique) * order;
  }
};

namespace detail {

// Class distribution of effective degree-d divisors, by unbounded
// multiset choice over the closed points of U (infinity included).
inline std::vector<std::map<Key, std::uint64_t>> divisor_class_counts(const JmLevel& J,
                                                                      int B) {
  std::vector<std::map<Key, std::uint64_t>> dp(B + 1);
  dp[0][J.identity()] = 1;
  std::vector<std::pair<int, Key>> pts;
  pts.emplace_back(1, J.identity());
  for (const Poly& p : J.closed_points(B)) pts.emplace_back(p.degree(), J.class_of_poly(p));
  for (const auto& [d, cls] : pts)
    for (int deg = d; deg <= B; ++deg)
      for (const auto& [k, c] : dp[deg - d]) dp[deg][J.mul(k, cls)] += c;
  return dp;
}

}  // namespace detail

inline SumFractionReport unique_sum_fraction(const Genus0SpecPtr& spec, int r,
                                             std::uint64_t budget = 1000000) {
  JmLevel J(spec, r);
  SumFractionReport rep;
  rep.r = r;
  rep.pi = spec->pi();
  rep.order = J.order_formula();
  if (rep.order > budget) throw Error(Errc::budget_exceeded, "group order exceeds budget");
  auto fibers = detail::divisor_class_counts(J, rep.pi)[rep.pi];
  for (const auto& [k, c] : fibers) {
    rep.total_divisors += c;
    if (c == 1) ++rep.unique;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Generation in few steps: smallest t with every element a sum of t
// terms drawn from the point classes and their inverses.
// ---------------------------------------------------------------------------

inline int generation_cover(const Genus0SpecPtr& spec, int r,
                            std::uint64_t budget = 1000000) {
  JmLevel J(spec, r);
  std::uint64_t order = J.order_formula();
  if (order > budget) throw Error(Errc::budget_exceeded, "group order exceeds budget");
  std::vector<Key> gens;
  for (const auto& [p, k] : J.points_of_U()) {
    gens.push_back(k);
    gens.push_back(J.inv(k));
  }
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());

  std::vector<Key> reach = {J.identity()};
  int t = 0;
  while (reach.size() < order) {
    std::vector<Key> next;
    for (Key a : reach)
      for (Key g : gens) next.push_back(J.mul(a, g));
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    // identity is a point class, so reach only grows
    if (next.size() <= reach.size())
      throw Error(Errc::numerical_failure, "point classes do not generate the group");
    reach = std::move(next);
    ++t;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Fixed points of the automorphisms preserving the data: at most two
// on a genus-0 curve for any non-identity map.
// ---------------------------------------------------------------------------

struct FixedPointReport {
  int r = 1;
  std::uint64_t num_points = 0;  // the identity automorphism, reported apart
  std::vector<std::pair<AffineMap, std::uint64_t>> counts;  // non-identity maps
  bool bound_ok = true;  // every non-identity count <= 2
};

inline FixedPointReport fixed_point_counts(const Genus0SpecPtr& spec, int r) {
  JmLevel J(spec, r);
  const auto& F = J.field();
  FixedPointReport rep;
  rep.r = r;
  auto pts = J.points_of_U();
  rep.num_points = pts.size();
  for (const AffineMap& a : automorphisms_fixing_data(*spec)) {
    if (a.is_identity()) continue;
    std::uint64_t n = 0;
    for (const auto& [p, k] : pts) {
      if (p.infinity) {
        ++n;  // affine maps fix infinity
        continue;
      }
      if (F->add(F->mul(a.u, p.x), a.v) == p.x) ++n;
    }
    rep.counts.emplace_back(a, n);
    if (n > 2) rep.bound_ok = false;
  }
  return rep;
}

}  // namespace genjac
