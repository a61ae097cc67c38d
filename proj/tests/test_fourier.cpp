#include <catch2/catch_amalgamated.hpp>

#include "genjac/fourier.hpp"

using namespace genjac;

TEST_CASE("carrier search examples") {
  auto c1 = find_fourier_carrier(3, 10);
  CHECK(c1.P == 13);
  CHECK(c1.zeta == 3);
  CHECK(verify_root_order(c1));

  auto c2 = find_fourier_carrier(1, 5);
  CHECK(c2.P == 7);
  CHECK(c2.zeta == 1);
  CHECK(verify_root_order(c2));

  // smallest prime = 1 (mod 2) above 100 is 101, with -1 as the
  // order-2 root
  auto c3 = find_fourier_carrier(2, 100);
  CHECK(c3.P == 101);
  CHECK(c3.zeta == 100);
  CHECK(verify_root_order(c3));
}

TEST_CASE("root order is exact for composite N") {
  for (std::uint64_t N : {4ull, 6ull, 8ull, 12ull, 24ull}) {
    auto c = find_fourier_carrier(N, 1000);
    CHECK(c.P % N == 1);
    CHECK(c.P > 1000);
    CHECK(verify_root_order(c));
    // all N powers of zeta are distinct
    std::uint64_t x = 1;
    for (std::uint64_t i = 1; i < N; ++i) {
      x = c.mul(x, c.zeta);
      CHECK(x != 1);
    }
    CHECK(c.mul(x, c.zeta) == 1);
  }
}

TEST_CASE("modular arithmetic") {
  auto c = find_fourier_carrier(3, 1 << 20);
  for (std::uint64_t a : {std::uint64_t{1}, std::uint64_t{12345}, c.P - 1}) {
    CHECK(c.mul(a, c.inv(a)) == 1);
    CHECK(c.add(a, c.sub(0, a)) == 0);
  }
  CHECK_THROWS_AS(c.inv(0), Error);
}
