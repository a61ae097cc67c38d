#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "genjac/characters.hpp"
#include "genjac/parse.hpp"

using namespace genjac;

namespace {

LevelModel model_x3_q3(int r = 1, int B = 6) {
  auto F3 = make_field(3);
  auto spec = make_genus0(parse_poly(F3, "x^3"));
  JmLevel J(spec, r);
  return build_genus0_model(J, B);
}

// The character with chi(1+x) = zeta_3 and chi(1+x^2) = 1 on the
// (q=3, m=x^3) instance.
Character pick_chi(const LevelModel& m, const JmLevel& J) {
  auto F = J.field();
  Key gx = J.key(parse_poly(F, "1+x"));
  Key gx2 = J.key(parse_poly(F, "1+x^2"));
  for (const auto& chi : character_group(m.G)) {
    if (chi_exponent(m.G, chi, gx) == m.G.exponent / 3 &&
        chi_exponent(m.G, chi, gx2) == 0)
      return chi;
  }
  FAIL("character not found");
  return {};
}

}  // namespace

TEST_CASE("character group sizes") {
  auto m = model_x3_q3();
  CHECK(character_group(m.G).size() == 9);

  auto trivial = abelian_structure({Key{0}}, 0, [](Key, Key) { return Key{0}; });
  CHECK(character_group(trivial).size() == 1);

  auto F3 = make_field(3);
  auto spec = make_genus0(parse_poly(F3, "x^3+x"));
  JmLevel J(spec, 1);
  auto mm = build_genus0_model(J, 6);
  auto chars = character_group(mm.G);
  CHECK(chars.size() == 8);
  // a generator value has exact order 8 in F_P
  CHECK(mm.carrier.P % 8 == 1);
  bool found_order8 = false;
  for (const auto& chi : chars) {
    std::uint64_t v = chi_value(mm.G, mm.carrier, chi, mm.G.generators[0]);
    std::uint64_t x = v;
    int ord = 1;
    while (x != 1) {
      x = mm.carrier.mul(x, v);
      ++ord;
    }
    if (ord == 8) found_order8 = true;
  }
  CHECK(found_order8);
}

TEST_CASE("characters are homomorphisms and orthogonal") {
  auto m = model_x3_q3();
  auto chars = character_group(m.G);
  const auto& fc = m.carrier;
  std::mt19937 rng(5);
  std::uniform_int_distribution<std::size_t> dist(0, m.G.order - 1);
  auto F3 = make_field(3);
  auto spec = make_genus0(parse_poly(F3, "x^3"));
  JmLevel J(spec, 1);
  auto mul = [&J](Key a, Key b) { return J.mul(a, b); };
  for (const auto& chi : chars) {
    for (int t = 0; t < 20; ++t) {
      Key a = m.G.elements[dist(rng)], b = m.G.elements[dist(rng)];
      CHECK(chi_value(m.G, fc, chi, mul(a, b)) ==
            fc.mul(chi_value(m.G, fc, chi, a), chi_value(m.G, fc, chi, b)));
    }
  }
  for (const auto& chi : chars) {
    for (const auto& chi2 : chars) {
      std::uint64_t s = 0;
      for (Key e : m.G.elements)
        s = fc.add(s, fc.mul(chi_value(m.G, fc, chi, e),
                             fc.inv(chi_value(m.G, fc, chi2, e))));
      CHECK(s == (chi.exps == chi2.exps ? m.G.order % fc.P : 0));
    }
  }
}

TEST_CASE("frobenius values at closed points") {
  auto F3 = make_field(3);
  auto spec = make_genus0(parse_poly(F3, "x^3"));
  JmLevel J(spec, 1);
  auto m = build_genus0_model(J, 6);
  Character chi = pick_chi(m, J);
  std::uint64_t zeta = m.carrier.zeta;

  CHECK(frobenius_value(m, chi, J, ClosedPoint::inf()) == 1);
  CHECK(frobenius_value(m, chi, J, ClosedPoint::affine(parse_poly(J.field(), "x+1"))) ==
        zeta);
  CHECK(frobenius_value(m, chi, J, ClosedPoint::affine(parse_poly(J.field(), "x+2"))) ==
        m.carrier.mul(zeta, zeta));
  CHECK_THROWS_AS(frobenius_value(m, chi, J, ClosedPoint::affine(Poly::x(J.field()))),
                  Error);
}

TEST_CASE("trivial character gives the zeta function of U") {
  auto m = model_x3_q3();
  Character triv{1, std::vector<std::uint32_t>(m.G.invariant_factors.size(), 0)};
  auto L = lfun_euler(m, triv);
  std::uint64_t expect = 1;
  for (int d = 0; d <= m.B; ++d) {
    CHECK(L.coeffs[d] == expect % m.carrier.P);
    expect *= 3;
  }
  CHECK(L.coeffs[1] == 3);  // #U(F_3)
}

TEST_CASE("nontrivial character collapses to the constant series") {
  auto F3 = make_field(3);
  auto spec = make_genus0(parse_poly(F3, "x^3"));
  JmLevel J(spec, 1);
  auto m = build_genus0_model(J, 6);
  Character chi = pick_chi(m, J);
  auto L = lfun_euler(m, chi);
  CHECK(L.coeffs[0] == 1);
  for (int d = 1; d <= m.B; ++d) CHECK(L.coeffs[d] == 0);

  // divisor-sum route: a_1 = 1 + zeta + zeta^2 = 0
  auto Ld = lfun_divisor_sum(m, chi);
  CHECK(Ld.coeffs[1] == 0);
  CHECK(Ld.cyclo[1] == std::vector<std::int64_t>{1, 1, 1});
}

TEST_CASE("euler and divisor-sum routes agree") {
  auto F3 = make_field(3);
  auto F2 = make_field(2);
  struct Case {
    Genus0SpecPtr spec;
    int r;
  };
  for (const auto& c : {Case{make_genus0(parse_poly(F3, "x^3")), 1},
                        Case{make_genus0(parse_poly(F3, "x^3+x")), 1},
                        Case{make_genus0(parse_poly(F2, "x^3")), 1},
                        Case{make_genus0(parse_poly(F2, "x^3")), 2}}) {
    JmLevel J(c.spec, c.r);
    int B = c.spec->modulus().degree() + 3;
    auto m = build_genus0_model(J, B);
    for (const auto& chi : character_group(m.G, c.r)) {
      auto Le = lfun_euler(m, chi);
      auto Ld = lfun_divisor_sum(m, chi);
      CHECK(Le.coeffs == Ld.coeffs);
    }
  }
}

TEST_CASE("polynomial part and degree bound") {
  auto F3 = make_field(3);
  auto spec = make_genus0(parse_poly(F3, "x^3"));
  JmLevel J(spec, 1);
  auto m = build_genus0_model(J, 6);

  Character chi = pick_chi(m, J);
  auto P = polynomial_part(lfun_divisor_sum(m, chi), *spec);
  // 1 - T
  REQUIRE(P.coeffs.size() == 2);
  CHECK(P.coeffs[0] == 1);
  CHECK(P.coeffs[1] == m.carrier.P - 1);

  Character triv{1, std::vector<std::uint32_t>(m.G.invariant_factors.size(), 0)};
  CHECK_THROWS_AS(polynomial_part(lfun_divisor_sum(m, triv), *spec), Error);

  // every nontrivial character obeys the degree bound
  for (const auto& c : character_group(m.G)) {
    if (c.trivial()) continue;
    auto Pc = polynomial_part(lfun_divisor_sum(m, c), *spec);
    CHECK(Pc.coeffs.size() <= 3);
  }
}

TEST_CASE("weil magnitudes") {
  auto F3 = make_field(3);
  auto spec = make_genus0(parse_poly(F3, "x^3"));
  JmLevel J(spec, 1);
  auto m = build_genus0_model(J, 6);

  Character chi = pick_chi(m, J);
  auto mags = weil_magnitudes(polynomial_part(lfun_divisor_sum(m, chi), *spec));
  REQUIRE(mags.size() == 1);
  CHECK(std::abs(mags[0] - 1.0) < 1e-6);

  // a primitive character (nontrivial on 1+x^2) has a degree-2
  // polynomial with magnitudes in {1, sqrt(3)}
  Key gx2 = J.key(parse_poly(J.field(), "1+x^2"));
  bool checked = false;
  for (const auto& c : character_group(m.G)) {
    if (chi_exponent(m.G, c, gx2) == 0) continue;
    auto P = polynomial_part(lfun_divisor_sum(m, c), *spec);
    CHECK(P.coeffs.size() == 3);
    for (double a : weil_magnitudes(P)) {
      bool ok = std::abs(a - 1.0) < 1e-6 || std::abs(a - std::sqrt(3.0)) < 1e-6;
      CHECK(ok);
    }
    checked = true;
  }
  CHECK(checked);
}

TEST_CASE("characters factoring through a smaller modulus of equal support") {
  auto F3 = make_field(3);
  auto big = make_genus0(parse_poly(F3, "x^3"));
  auto small = make_genus0_aux(parse_poly(F3, "x^2"));
  JmLevel Jb(big, 1), Js(small, 1);
  auto mb = build_genus0_model(Jb, 6);
  auto ms = build_genus0_model(Js, 6);
  REQUIRE(mb.carrier.N == ms.carrier.N);

  for (const auto& chi_s : character_group(ms.G)) {
    // pull back along the reduction map, expressed in the big basis
    Character chi_b;
    bool found = false;
    for (const auto& cand : character_group(mb.G)) {
      bool match = true;
      for (Key e : mb.G.elements) {
        if (chi_exponent(mb.G, cand, e) !=
            chi_exponent(ms.G, chi_s, reduction_map(Jb, Js, e))) {
          match = false;
          break;
        }
      }
      if (match) {
        chi_b = cand;
        found = true;
        break;
      }
    }
    REQUIRE(found);
    // same support, so the two L-functions agree as zeta-combinations
    auto Lb = lfun_divisor_sum(mb, chi_b);
    auto Ls = lfun_divisor_sum(ms, chi_s);
    for (int d = 0; d <= 6; ++d) CHECK(Lb.cyclo[d] == Ls.cyclo[d]);
  }
}
