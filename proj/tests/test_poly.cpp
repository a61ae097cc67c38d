#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>

#include "genjac/parse.hpp"
#include "genjac/poly.hpp"

using namespace genjac;

namespace {

// Necklace count: number of monic irreducibles of degree d over F_q.
std::int64_t moebius(int n) {
  std::int64_t m = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      m = -m;
    }
  }
  if (n > 1) m = -m;
  return m;
}

std::int64_t necklace_count(std::int64_t q, int d) {
  std::int64_t s = 0;
  for (int e = 1; e <= d; ++e) {
    if (d % e) continue;
    std::int64_t qde = 1;
    for (int i = 0; i < d / e; ++i) qde *= q;
    s += moebius(e) * qde;
  }
  return s / d;
}

Poly random_poly(const FieldCtxPtr& F, int max_deg, std::mt19937& rng) {
  std::uniform_int_distribution<int> ddist(0, max_deg);
  std::uniform_int_distribution<Elem> cdist(0, F->q() - 1);
  int d = ddist(rng);
  std::vector<Elem> c(d + 1);
  for (auto& x : c) x = cdist(rng);
  if (c.back() == 0) c.back() = 1;
  return Poly(F, std::move(c));
}

}  // namespace

TEST_CASE("polynomial parsing and printing") {
  auto F3 = make_field(3);
  Poly f = parse_poly(F3, "x^3 + 2*x + 1");
  CHECK(f.degree() == 3);
  CHECK(f.coeff(0) == 1);
  CHECK(f.coeff(1) == 2);
  CHECK(f.coeff(2) == 0);
  CHECK(f.coeff(3) == 1);
  CHECK(parse_poly(F3, f.to_string()) == f);
  CHECK(parse_poly(F3, "x^2 - 1") == parse_poly(F3, "x^2 + 2"));
  CHECK(parse_poly(F3, "4") == Poly::constant(F3, 1));
  CHECK_THROWS_AS(parse_poly(F3, "x +"), Error);

  auto F9 = make_field(3, 2);
  Poly g = parse_poly(F9, "x^2 + [0,1]*x + 2");
  CHECK(g.coeff(1) == F9->from_coeffs({0, 1}));
}

TEST_CASE("factorization examples over F_3") {
  auto F3 = make_field(3);
  auto x = Poly::x(F3);

  auto f1 = poly_factor(parse_poly(F3, "x^3"));
  REQUIRE(f1.factors.size() == 1);
  CHECK(f1.factors[0].first == x);
  CHECK(f1.factors[0].second == 3);

  auto f2 = poly_factor(parse_poly(F3, "x^2+1"));
  REQUIRE(f2.factors.size() == 1);
  CHECK(f2.factors[0].second == 1);
  CHECK(f2.factors[0].first == parse_poly(F3, "x^2+1"));

  auto f3 = poly_factor(parse_poly(F3, "x^2+2"));
  REQUIRE(f3.factors.size() == 2);
  CHECK(f3.factors[0].first == parse_poly(F3, "x+1"));
  CHECK(f3.factors[1].first == parse_poly(F3, "x+2"));

  CHECK_THROWS_AS(poly_factor(Poly::zero(F3)), Error);
}

TEST_CASE("irreducible enumeration") {
  auto F3 = make_field(3);
  auto irr1 = irreducibles_up_to(F3, 1);
  REQUIRE(irr1.size() == 3);
  CHECK(irr1[0] == parse_poly(F3, "x"));
  CHECK(irr1[1] == parse_poly(F3, "x+1"));
  CHECK(irr1[2] == parse_poly(F3, "x+2"));
  CHECK(irreducibles_up_to(F3, 2).size() == 6);

  auto F2 = make_field(2);
  auto irr2 = irreducibles_up_to(F2, 2);
  REQUIRE(irr2.size() == 3);
  CHECK(irr2[2] == parse_poly(F2, "x^2+x+1"));
}

TEST_CASE("irreducible counts match the necklace formula") {
  for (std::uint32_t q : {2u, 3u}) {
    auto F = make_field(q);
    std::vector<std::vector<Poly>> by_deg(1);
    for (int d = 1; d <= 4; ++d) {
      by_deg.push_back(irreducibles_of_degree(F, d, by_deg));
      CHECK(static_cast<std::int64_t>(by_deg[d].size()) == necklace_count(q, d));
    }
  }
  auto F9 = make_field(3, 2);
  std::vector<std::vector<Poly>> by_deg(1);
  for (int d = 1; d <= 3; ++d) {
    by_deg.push_back(irreducibles_of_degree(F9, d, by_deg));
    CHECK(static_cast<std::int64_t>(by_deg[d].size()) == necklace_count(9, d));
  }
}

TEST_CASE("factorization is multiplicity-additive on products") {
  auto F3 = make_field(3);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Poly f = random_poly(F3, 6, rng);
    Poly g = random_poly(F3, 6, rng);
    if (f.is_zero() || g.is_zero()) continue;
    std::map<Poly, int> merged;
    for (const auto& [p, e] : poly_factor(f).factors) merged[p] += e;
    for (const auto& [p, e] : poly_factor(g).factors) merged[p] += e;
    auto fg = poly_factor(f * g);
    std::map<Poly, int> got(fg.factors.begin(), fg.factors.end());
    CHECK(got == merged);
    CHECK(fg.product(F3) == f * g);
  }
}

TEST_CASE("divmod and gcd") {
  auto F5 = make_field(5);
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Poly a = random_poly(F5, 7, rng);
    Poly b = random_poly(F5, 4, rng);
    if (b.is_zero()) continue;
    auto [q, r] = a.divmod(b);
    CHECK(q * b + r == a);
    CHECK(r.degree() < b.degree());
    Poly g = poly_gcd(a, b);
    if (!a.is_zero()) CHECK(g.divides(a));
    CHECK(g.divides(b));
  }
}

TEST_CASE("modular inverse") {
  auto F3 = make_field(3);
  Poly m = parse_poly(F3, "x^3");
  Poly u = parse_poly(F3, "1+x");
  Poly ui = poly_invmod(u, m);
  CHECK((u * ui % m).is_one());
  CHECK_THROWS_AS(poly_invmod(Poly::x(F3), m), Error);
}
