#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "genjac/genus0.hpp"
#include "genjac/parse.hpp"

using namespace genjac;

namespace {

Genus0SpecPtr spec_x3_q3() {
  auto F3 = make_field(3);
  return make_genus0(parse_poly(F3, "x^3"));
}

Genus0SpecPtr spec_mixed_q3() {
  auto F3 = make_field(3);
  return make_genus0(parse_poly(F3, "x^3+x"));  // x(x^2+1)
}

Genus0SpecPtr spec_x3_q2() {
  auto F2 = make_field(2);
  return make_genus0(parse_poly(F2, "x^3"));
}

}  // namespace

TEST_CASE("spec construction enforces the dimension hypothesis") {
  auto F3 = make_field(3);
  CHECK_THROWS_AS(make_genus0(parse_poly(F3, "x^2")), Error);
  try {
    make_genus0(parse_poly(F3, "x^2"));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::hypothesis_violated);
  }
  CHECK(spec_x3_q3()->pi() == 2);
  CHECK(spec_mixed_q3()->pi() == 2);
}

TEST_CASE("class arithmetic in J_m for q=3, m=x^3") {
  auto spec = spec_x3_q3();
  JmLevel J(spec, 1);
  auto F = J.field();

  Key a = J.key(parse_poly(F, "1+x"));
  Key prod = J.mul(a, a);
  CHECK(J.from_key(prod) == parse_poly(F, "1+2*x+x^2"));
  CHECK(J.inv(a) == J.key(parse_poly(F, "1+2*x+x^2")));
  CHECK(J.mul(a, J.identity()) == a);
  CHECK(J.mul(a, J.inv(a)) == J.identity());
  // normalization of a non-unit must fail
  CHECK_THROWS_AS(J.normalize(parse_poly(F, "x")), Error);
}

TEST_CASE("Abel-Jacobi classes of points, q=3, m=x^3") {
  auto spec = spec_x3_q3();
  JmLevel J(spec, 1);
  auto F = J.field();

  CHECK(J.class_of_point(UPoint::affine(1)) == J.key(parse_poly(F, "1+2*x")));
  CHECK(J.class_of_point(UPoint::affine(2)) == J.key(parse_poly(F, "1+x")));
  CHECK(J.class_of_point(UPoint::inf()) == J.identity());
  CHECK_THROWS_AS(J.class_of_point(UPoint::affine(0)), Error);

  auto pts = J.points_of_U();
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].second == J.identity());
}

TEST_CASE("class_of_divisor is multiplicative") {
  auto spec = spec_mixed_q3();
  JmLevel J(spec, 1);
  auto F = J.field();
  Poly f1 = parse_poly(F, "x+1");
  Poly f2 = parse_poly(F, "x^2+x+2");
  EffectiveDivisor D1{{{ClosedPoint::affine(f1), 1}}};
  EffectiveDivisor D2{{{ClosedPoint::affine(f2), 2}, {ClosedPoint::inf(), 1}}};
  EffectiveDivisor D12{{{ClosedPoint::affine(f1), 1},
                        {ClosedPoint::affine(f2), 2},
                        {ClosedPoint::inf(), 1}}};
  CHECK(J.class_of_divisor(D12) == J.mul(J.class_of_divisor(D1), J.class_of_divisor(D2)));

  EffectiveDivisor bad{{{ClosedPoint::affine(Poly::x(F)), 1}}};
  CHECK_THROWS_AS(J.class_of_divisor(bad), Error);
}

TEST_CASE("group orders: formula vs enumeration") {
  struct Case {
    Genus0SpecPtr spec;
    int r;
    std::uint64_t order;
  };
  for (const auto& c : {Case{spec_x3_q3(), 1, 9},
                        Case{spec_mixed_q3(), 1, 8},
                        Case{spec_x3_q2(), 1, 4},
                        Case{spec_x3_q3(), 2, 81}}) {
    JmLevel J(c.spec, c.r);
    CHECK(J.order_formula() == c.order);
    CHECK(J.enumerate().size() == c.order);
  }
}

TEST_CASE("order formula for m=x^2 at level 2") {
  auto F3 = make_field(3);
  auto spec = make_genus0_aux(parse_poly(F3, "x^2"));
  JmLevel J(spec, 2);
  CHECK(J.order_formula() == 9);
  CHECK(J.enumerate().size() == 9);
}

TEST_CASE("group structure") {
  {
    JmLevel J(spec_x3_q3(), 1);
    auto s = J.group_structure();
    CHECK(s.order == 9);
    CHECK(s.invariant_factors == std::vector<std::uint64_t>{3, 3});
  }
  {
    JmLevel J(spec_mixed_q3(), 1);
    auto s = J.group_structure();
    CHECK(s.order == 8);
    CHECK(s.exponent == 8);
    CHECK(s.invariant_factors == std::vector<std::uint64_t>{8});
  }
  {
    JmLevel J(spec_x3_q2(), 1);
    auto s = J.group_structure();
    CHECK(s.order == 4);
  }
}

TEST_CASE("points of U at higher levels and AJ injectivity") {
  for (const auto& spec : {spec_x3_q3(), spec_mixed_q3(), spec_x3_q2()}) {
    for (int r = 1; r <= 3; ++r) {
      JmLevel J(spec, r);
      auto pts = J.points_of_U();
      std::set<Key> classes;
      for (const auto& [u, k] : pts) classes.insert(k);
      CHECK(classes.size() == pts.size());
    }
  }
  JmLevel J2(spec_x3_q3(), 2);
  CHECK(J2.points_of_U().size() == 9);
  JmLevel J1(spec_mixed_q3(), 1);
  CHECK(J1.points_of_U().size() == 3);
}

TEST_CASE("reduction map") {
  auto F3 = make_field(3);
  auto big = make_genus0(parse_poly(F3, "x^3"));
  auto small = make_genus0_aux(parse_poly(F3, "x^2"));
  JmLevel Jb(big, 1), Js(small, 1);

  Key a = Jb.key(parse_poly(Jb.field(), "1+x+x^2"));
  CHECK(reduction_map(Jb, Js, a) == Js.key(parse_poly(Js.field(), "1+x")));
  // identity on equal moduli
  JmLevel Jb2(big, 1);
  CHECK(reduction_map(Jb, Jb2, a) == a);
  // commutes with Abel-Jacobi on common points
  Key p_big = Jb.class_of_point(UPoint::affine(2));
  Key p_small = Js.class_of_point(UPoint::affine(2));
  CHECK(reduction_map(Jb, Js, p_big) == p_small);
  // no canonical map when m does not divide m'
  auto other = make_genus0(parse_poly(F3, "x^3+x"));
  JmLevel Jo(other, 1);
  CHECK_THROWS_AS(reduction_map(Jb, Jo, a), Error);

  // surjective homomorphism with kernel of the right size
  auto elems = Jb.enumerate();
  std::set<Key> image;
  std::size_t kernel = 0;
  for (Key e : elems) {
    Key im = reduction_map(Jb, Js, e);
    image.insert(im);
    if (im == Js.identity()) ++kernel;
  }
  CHECK(image.size() == Js.enumerate().size());
  CHECK(kernel == elems.size() / image.size());
  CHECK(kernel > 1);  // strictly larger modulus, same support
}

TEST_CASE("function with prescribed orders") {
  auto F3 = make_field(3);
  auto spec = make_genus0(parse_poly(F3, "x^3+x"));
  auto [num, den] = function_with_orders(
      *spec, {{Poly::x(F3), 1}, {parse_poly(F3, "x^2+1"), 1}});
  CHECK(num == parse_poly(F3, "x^3+x"));
  CHECK(den.is_one());

  auto spec2 = make_genus0(parse_poly(F3, "x^3"));
  auto [n2, d2] = function_with_orders(*spec2, {{Poly::x(F3), 3}});
  CHECK(n2 == parse_poly(F3, "x^3"));

  auto [n3, d3] = function_with_orders(*spec2, {{Poly::x(F3), -2}});
  CHECK(n3.is_one());
  CHECK(d3 == parse_poly(F3, "x^2"));

  CHECK_THROWS_AS(function_with_orders(*spec2, {{parse_poly(F3, "x+1"), 1}}), Error);

  // the divisor of the output restricted to Supp(m) equals the target
  auto fac = poly_factor(num);
  REQUIRE(fac.factors.size() == 2);
  CHECK(fac.factors[0].second == 1);
  CHECK(fac.factors[1].second == 1);
}

TEST_CASE("automorphisms fixing the modulus") {
  auto F3 = make_field(3);
  {
    auto spec = make_genus0(parse_poly(F3, "x^3"));
    auto maps = automorphisms_fixing_data(*spec);
    REQUIRE(maps.size() == 2);
    CHECK(maps[0] == AffineMap{1, 0});
    CHECK(maps[1] == AffineMap{2, 0});
  }
  {
    auto spec = make_genus0(parse_poly(F3, "x^3+2*x"));  // x(x+1)(x+2)
    auto maps = automorphisms_fixing_data(*spec);
    CHECK(maps.size() == 6);
  }
  {
    auto F2 = make_field(2);
    auto spec = make_genus0(parse_poly(F2, "x^3"));
    auto maps = automorphisms_fixing_data(*spec);
    REQUIRE(maps.size() == 1);
    CHECK(maps[0].is_identity());
  }
}

TEST_CASE("frobenius on classes") {
  JmLevel J(spec_x3_q3(), 2);
  auto elems = J.enumerate();
  for (Key e : elems) {
    Key f = J.frobenius(e);
    CHECK(J.frobenius(f) == e);  // order divides r = 2
    // multiplicative
  }
  Key a = elems[1], b = elems[2];
  CHECK(J.frobenius(J.mul(a, b)) == J.mul(J.frobenius(a), J.frobenius(b)));
}
