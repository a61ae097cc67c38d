#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "genjac/gf.hpp"

using namespace genjac;

TEST_CASE("prime field arithmetic") {
  auto F3 = make_field(3);
  CHECK(F3->q() == 3);
  CHECK(F3->add(2, 2) == 1);
  CHECK(F3->mul(2, 2) == 1);
  CHECK(F3->frobenius(2) == 2);
  CHECK(F3->inv(2) == 2);
  CHECK_THROWS_AS(F3->inv(0), Error);
}

TEST_CASE("F9 built as F3[y]/(y^2+1)") {
  auto F9 = make_field(3, 2);
  CHECK(F9->q() == 9);
  CHECK(F9->defining_poly() == std::vector<std::uint32_t>{1, 0, 1});
  Elem y = F9->from_coeffs({0, 1});
  // y*y reduces to -1 = 2
  CHECK(F9->mul(y, y) == 2);
  // Frobenius fixes the prime subfield and has order 2
  CHECK(F9->frobenius(2) == 2);
  CHECK(F9->frobenius(F9->frobenius(y)) == y);
  CHECK(F9->frobenius(y) != y);
}

TEST_CASE("field axioms on random triples") {
  for (auto [p, k] : {std::pair<std::uint32_t, std::uint32_t>{3, 1}, {3, 2}, {2, 3}, {5, 2}, {7, 1}, {3, 4}}) {
    auto F = make_field(p, k);
    std::mt19937 rng(42);
    std::uniform_int_distribution<Elem> dist(0, F->q() - 1);
    for (int i = 0; i < 1000; ++i) {
      Elem a = dist(rng), b = dist(rng), c = dist(rng);
      CHECK(F->add(a, b) == F->add(b, a));
      CHECK(F->mul(a, b) == F->mul(b, a));
      CHECK(F->add(F->add(a, b), c) == F->add(a, F->add(b, c)));
      CHECK(F->mul(F->mul(a, b), c) == F->mul(a, F->mul(b, c)));
      CHECK(F->mul(a, F->add(b, c)) == F->add(F->mul(a, b), F->mul(a, c)));
      CHECK(F->add(a, F->neg(a)) == 0);
      if (a != 0) {
        CHECK(F->mul(a, F->inv(a)) == 1);
        CHECK(F->pow(a, F->q() - 1) == 1);
      }
      // Frobenius is additive and multiplicative
      CHECK(F->frobenius(F->add(a, b)) == F->add(F->frobenius(a), F->frobenius(b)));
      CHECK(F->frobenius(F->mul(a, b)) == F->mul(F->frobenius(a), F->frobenius(b)));
    }
  }
}

TEST_CASE("generator has full multiplicative order") {
  for (auto [p, k] : {std::pair<std::uint32_t, std::uint32_t>{3, 2}, {2, 4}, {5, 2}}) {
    auto F = make_field(p, k);
    CHECK(F->mult_order(F->generator()) == F->q() - 1);
  }
}
