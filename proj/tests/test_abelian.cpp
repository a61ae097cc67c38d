#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "genjac/abelian.hpp"

using namespace genjac;

namespace {

// Product of cyclic groups given by moduli; key = mixed-radix packing.
struct ProductGroup {
  std::vector<std::uint64_t> mods;

  std::vector<Key> elements() const {
    std::uint64_t n = 1;
    for (auto m : mods) n *= m;
    std::vector<Key> out(n);
    std::iota(out.begin(), out.end(), 0);
    return out;
  }

  MulFn mul() const {
    auto mods_copy = mods;
    return [mods_copy](Key a, Key b) {
      Key r = 0, radix = 1;
      for (auto m : mods_copy) {
        r += (a % m + b % m) % m * radix;
        a /= m;
        b /= m;
        radix *= m;
      }
      return r;
    };
  }
};

}  // namespace

TEST_CASE("cyclic group") {
  ProductGroup g{{12}};
  auto s = abelian_structure(g.elements(), 0, g.mul());
  CHECK(s.order == 12);
  CHECK(s.exponent == 12);
  CHECK(s.invariant_factors == std::vector<std::uint64_t>{12});
}

TEST_CASE("trivial group") {
  ProductGroup g{{1}};
  auto s = abelian_structure(g.elements(), 0, g.mul());
  CHECK(s.order == 1);
  CHECK(s.exponent == 1);
  CHECK(s.invariant_factors.empty());
}

TEST_CASE("invariant factors of products") {
  struct Case {
    std::vector<std::uint64_t> mods;
    std::vector<std::uint64_t> expect;
  };
  for (const auto& c : {Case{{2, 4}, {2, 4}},
                        Case{{4, 2}, {2, 4}},
                        Case{{3, 3}, {3, 3}},
                        Case{{2, 3}, {6}},
                        Case{{2, 6, 4}, {2, 2, 12}},
                        Case{{8, 9, 5}, {360}},
                        Case{{2, 2, 2}, {2, 2, 2}}}) {
    ProductGroup g{c.mods};
    auto s = abelian_structure(g.elements(), 0, g.mul());
    CHECK(s.invariant_factors == c.expect);
    // generator orders are exact
    auto mul = g.mul();
    for (std::size_t i = 0; i < s.generators.size(); ++i) {
      Key x = 0;
      std::uint64_t ord = 0;
      do {
        x = mul(x, s.generators[i]);
        ++ord;
      } while (x != 0);
      CHECK(ord == s.invariant_factors[i]);
    }
    // discrete logs reproduce every element
    for (Key e : s.elements) {
      const auto& a = s.coords(e);
      Key x = 0;
      for (std::size_t i = 0; i < a.size(); ++i)
        for (std::uint32_t j = 0; j < a[i]; ++j) x = mul(x, s.generators[i]);
      CHECK(x == e);
    }
  }
}
