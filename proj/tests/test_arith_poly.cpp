#include "doctest.h"
#include "kcx/arith_poly.hpp"
#include "test_util.hpp"

using namespace kcx;

TEST_CASE("normalize expands and orders terms") {
  auto r = make_ring(0, {"x", "y"});
  CHECK(parse_poly("(x+y)^2", r).to_string() == "x^2 + 2*x*y + y^2");
  CHECK(parse_poly("3*(1/3)*x", r) == parse_poly("x", r));
  CHECK(parse_poly("-2/4*y + x - x", r).to_string() == "-1/2*y");
  auto r2 = make_ring(2, {"x", "y"});
  CHECK(parse_poly("x^2 + y^2 - 1", r2).to_string() == "x^2 + y^2 + 1");
}

TEST_CASE("grevlex order") {
  auto r = make_ring(0, {"x", "y", "z"});
  // degree first, then smaller power of the last variable wins
  CHECK(parse_poly("z^2 + x*y + x", r).to_string() == "x*y + z^2 + x");
  CHECK(parse_poly("x*z + y^2", r).to_string() == "y^2 + x*z");
}

TEST_CASE("parse errors") {
  auto r = make_ring(0, {"x", "y"});
  CHECK_THROWS_AS(parse_poly("x + w", r), ParseError);
  CHECK_THROWS_AS(parse_poly("x^-1", r), ParseError);
  CHECK_THROWS_AS(parse_poly("x^y", r), ParseError);
  CHECK_THROWS_AS(parse_poly("x(y)", r), ParseError);
  CHECK_THROWS_AS(parse_poly("x y", r), ParseError);
  try {
    parse_poly("x +\n  $", r);
    FAIL("expected throw");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.col == 3);
  }
  CHECK_THROWS_AS(make_ring(4, {"x"}), ArithError);
}

TEST_CASE("scalars") {
  Scalar a(3, 7), b(5, 7);
  CHECK((a * b).value() == 1);
  CHECK((a / b * b) == a);
  CHECK((-Scalar(0, 7)).is_zero());
  CHECK(Scalar(mpq_class(1, 2), 7).value() == 4);
  CHECK(Scalar(mpq_class(6, 4), 0).value() == mpq_class(3, 2));
  CHECK_THROWS_AS(Scalar(0, 5).inverse(), ArithError);
}

TEST_CASE("substitution") {
  auto r = make_ring(0, {"x", "y"});
  auto t = make_ring(0, {"u", "v"});
  auto p = parse_poly("x*y", r);
  auto q = poly_substitute(p, {{"x", parse_poly("u+v", t)}, {"y", parse_poly("u", t)}}, t);
  CHECK(q == parse_poly("u^2 + u*v", t));
  auto c = parse_poly("x^2+y^2-1", r);
  CHECK(poly_substitute(c, std::vector<Polynomial>{parse_poly("x", r), parse_poly("y", r)}, r) == c);
  CHECK(poly_substitute(parse_poly("x", r), {{"x", Polynomial(t)}}, t).is_zero());
  CHECK_THROWS_AS(poly_substitute(p, {{"x", parse_poly("u", t)}}, t), ArithError);
}

TEST_CASE("partials") {
  auto r = make_ring(0, {"x", "y"});
  CHECK(formal_partial(parse_poly("x^2+y^2-1", r), "x") == parse_poly("2*x", r));
  CHECK(formal_partial(parse_poly("y^2-x^3-1", r), "x") == parse_poly("-3*x^2", r));
  CHECK(formal_partial(parse_poly("7", r), "x").is_zero());
}

TEST_CASE("ring axioms, Leibniz, mixed partials, Frobenius on random polynomials") {
  std::mt19937 rng(11);
  auto r = make_ring(0, {"x", "y", "z"});
  for (int it = 0; it < 60; ++it) {
    auto a = testing::random_poly(rng, r, 3, 4);
    auto b = testing::random_poly(rng, r, 3, 4);
    auto c = testing::random_poly(rng, r, 2, 3);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
    CHECK((a - a).is_zero());
    for (size_t v = 0; v < 3; ++v)
      CHECK(formal_partial(a * b, v) == a * formal_partial(b, v) + b * formal_partial(a, v));
    CHECK(formal_partial(formal_partial(a, 0), 1) == formal_partial(formal_partial(a, 1), 0));
  }
  for (uint32_t p : {2u, 3u, 5u}) {
    auto rp = make_ring(p, {"x", "y"});
    for (int it = 0; it < 10; ++it) {
      auto a = testing::random_poly(rng, rp, 2, 3);
      auto b = testing::random_poly(rng, rp, 2, 3);
      CHECK((a + b).pow(p) == a.pow(p) + b.pow(p));
    }
  }
}
