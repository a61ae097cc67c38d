#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "genjac/error.hpp"
#include "genjac/fourier.hpp"

namespace genjac {

using Key = std::uint64_t;
using MulFn = std::function<Key(Key, Key)>;

// Invariant-factor decomposition of a finite abelian group given by an
// element enumeration and a multiplication callback on opaque keys.
// Factors are ascending, n_1 | n_2 | ... | n_k; generator i has exact
// order n_i and the product map is verified to be a bijection.
struct AbelianStructure {
  std::vector<Key> elements;  // sorted
  std::unordered_map<Key, std::size_t> index;
  std::vector<std::uint64_t> invariant_factors;
  std::vector<Key> generators;
  std::uint64_t order = 1;
  std::uint64_t exponent = 1;
  Key identity = 0;
  // Exponent vector of each element (by element index) against the
  // generator basis.
  std::vector<std::vector<std::uint32_t>> dlog;
  // Mixed-radix coordinate offset -> element key.
  std::vector<Key> by_coords;

  const std::vector<std::uint32_t>& coords(Key k) const {
    auto it = index.find(k);
    if (it == index.end()) throw Error(Errc::invalid_input, "key not in group");
    return dlog[it->second];
  }

  std::size_t coord_offset(const std::vector<std::uint32_t>& a) const {
    std::size_t off = 0;
    for (std::size_t i = 0; i < a.size(); ++i) off = off * invariant_factors[i] + a[i];
    return off;
  }

  Key from_coords(const std::vector<std::uint32_t>& a) const { return by_coords[coord_offset(a)]; }

  // Multiplication through verified discrete logs.
  Key mul(Key x, Key y) const {
    const auto& a = coords(x);
    const auto& b = coords(y);
    std::vector<std::uint32_t> c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      c[i] = static_cast<std::uint32_t>((a[i] + b[i]) % invariant_factors[i]);
    return from_coords(c);
  }

  Key inv(Key x) const {
    const auto& a = coords(x);
    std::vector<std::uint32_t> c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      c[i] = static_cast<std::uint32_t>((invariant_factors[i] - a[i]) % invariant_factors[i]);
    return from_coords(c);
  }
};

namespace detail {

inline Key key_pow(const MulFn& mul, Key identity, Key a, std::uint64_t e) {
  Key r = identity;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

inline std::uint64_t key_order(const MulFn& mul, Key identity, Key a, std::uint64_t group_order) {
  std::uint64_t ord = group_order;
  for (std::uint64_t ell : prime_divisors(group_order)) {
    while (ord % ell == 0 && key_pow(mul, identity, a, ord / ell) == identity) ord /= ell;
  }
  return ord;
}

struct RawDecomposition {
  std::vector<Key> generators;           // orders descending: first has maximal order
  std::vector<std::uint64_t> orders;
};

// Recursive decomposition: split off a cyclic factor of maximal order,
// decompose the quotient, lift quotient generators.
inline RawDecomposition decompose(const std::vector<Key>& elements, Key identity,
                                  const MulFn& mul) {
  RawDecomposition out;
  const std::uint64_t n = elements.size();
  if (n == 1) return out;

  Key g = identity;
  std::uint64_t max_ord = 1;
  for (Key e : elements) {
    std::uint64_t o = key_order(mul, identity, e, n);
    if (o > max_ord) {
      max_ord = o;
      g = e;
    }
  }

  // Discrete-log table of the cyclic subgroup <g>.
  std::unordered_map<Key, std::uint64_t> cyc_log;
  {
    Key x = identity;
    for (std::uint64_t i = 0; i < max_ord; ++i) {
      cyc_log.emplace(x, i);
      x = mul(x, g);
    }
  }

  out.generators.push_back(g);
  out.orders.push_back(max_ord);
  if (max_ord == n) return out;

  // Quotient by <g>: canonical coset representative = minimal key.
  std::unordered_map<Key, Key> rep;
  std::vector<Key> quotient_elems;
  for (Key e : elements) {
    if (rep.count(e)) continue;
    Key best = e, x = e;
    std::vector<Key> coset;
    for (std::uint64_t i = 0; i < max_ord; ++i) {
      coset.push_back(x);
      best = std::min(best, x);
      x = mul(x, g);
    }
    for (Key c : coset) rep.emplace(c, best);
    quotient_elems.push_back(best);
  }
  std::sort(quotient_elems.begin(), quotient_elems.end());
  quotient_elems.erase(std::unique(quotient_elems.begin(), quotient_elems.end()),
                       quotient_elems.end());
  MulFn qmul = [&rep, &mul](Key a, Key b) { return rep.at(mul(a, b)); };
  RawDecomposition sub = decompose(quotient_elems, rep.at(identity), qmul);

  Key g_inv = key_pow(mul, identity, g, max_ord - 1);
  for (std::size_t i = 0; i < sub.generators.size(); ++i) {
    Key r = sub.generators[i];
    std::uint64_t m = sub.orders[i];
    // r^m lies in <g>, say g^t; maximality of ord(g) forces m | t, and
    // r * g^{-t/m} is an honest order-m lift.
    std::uint64_t t = cyc_log.at(key_pow(mul, identity, r, m));
    if (t % m != 0) throw Error(Errc::numerical_failure, "abelian lift failed");
    Key lift = mul(r, key_pow(mul, identity, g_inv, t / m));
    out.generators.push_back(lift);
    out.orders.push_back(m);
  }
  return out;
}

}  // namespace detail

inline AbelianStructure abelian_structure(std::vector<Key> elements, Key identity,
                                          const MulFn& mul) {
  AbelianStructure s;
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  s.elements = std::move(elements);
  s.identity = identity;
  s.order = s.elements.size();
  for (std::size_t i = 0; i < s.elements.size(); ++i) s.index.emplace(s.elements[i], i);

  auto raw = detail::decompose(s.elements, identity, mul);
  // Ascending invariant factors (raw order is descending).
  for (std::size_t i = raw.generators.size(); i-- > 0;) {
    s.generators.push_back(raw.generators[i]);
    s.invariant_factors.push_back(raw.orders[i]);
  }
  s.exponent = s.invariant_factors.empty() ? 1 : s.invariant_factors.back();

  // Enumerate all products against the basis; this both fills the
  // discrete-log table and certifies the decomposition.
  s.dlog.assign(s.order, {});
  s.by_coords.assign(s.order, identity);
  const std::size_t k = s.generators.size();
  std::vector<std::uint32_t> a(k, 0);
  std::vector<bool> seen(s.order, false);
  std::uint64_t filled = 0;
  std::function<void(std::size_t, Key)> walk = [&](std::size_t i, Key acc) {
    if (i == k) {
      auto it = s.index.find(acc);
      if (it == s.index.end()) throw Error(Errc::numerical_failure, "generator product escapes group");
      if (seen[it->second])
        throw Error(Errc::numerical_failure, "generator map not injective");
      seen[it->second] = true;
      s.dlog[it->second] = a;
      s.by_coords[s.coord_offset(a)] = acc;
      ++filled;
      return;
    }
    Key x = acc;
    for (std::uint64_t e = 0; e < s.invariant_factors[i]; ++e) {
      a[i] = static_cast<std::uint32_t>(e);
      walk(i + 1, x);
      x = mul(x, s.generators[i]);
    }
    a[i] = 0;
  };
  if (s.order == 1) {
    s.dlog[0] = {};
  } else {
    walk(0, identity);
    if (filled != s.order)
      throw Error(Errc::numerical_failure, "generator map not surjective");
  }
  return s;
}

}  // namespace genjac
