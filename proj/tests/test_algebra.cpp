#include "doctest.h"
#include "kcx/algebra.hpp"
#include "test_util.hpp"

using namespace kcx;

TEST_CASE("presented algebras reduce modulo relations") {
  auto circle = make_algebra(0, {"x", "y"}, {"x^2 + y^2 - 1"}, "circle");
  CHECK(circle->is_zero(circle->parse("x^2 + y^2 - 1")));
  CHECK(circle->render(circle->parse("x^2")) == "-y^2 + 1");
  auto fat = make_algebra(0, {"x"}, {"x^2"});
  CHECK(fat->is_zero(fat->parse("x^3 + x^2")));
  CHECK(!fat->is_zero(fat->parse("x")));
  auto a = make_element(circle, circle->parse("x^2"));
  auto b = make_element(circle, circle->parse("1 - y^2"));
  CHECK(element_equal(a, b));
  CHECK_THROWS_AS(make_algebra(4, {"x"}, {}), ArithError);
  CHECK_THROWS_AS(make_algebra(0, {"x", "x"}, {}), ArithError);
}

TEST_CASE("morphisms are certified against relations") {
  auto q = make_algebra(0, {"t"}, {});
  auto fat = make_algebra(0, {"x"}, {"x^2"});
  // x -> 1 does not kill x^2
  try {
    make_morphism(fat, q, std::map<std::string, std::string>{{"x", "1"}});
    FAIL("expected failure");
  } catch (const WellDefinednessFailure& e) {
    CHECK(e.relation == "x^2");
    CHECK(e.residue == "1");
    CHECK(e.index == 0);
  }
  auto ok = make_morphism(fat, q, std::map<std::string, std::string>{{"x", "0"}});
  CHECK(ok.certified);

  // projective line transition on the chart R[y, w]/(y w - 1)
  auto line = make_algebra(0, {"x"}, {});
  auto chart = make_algebra(0, {"y", "w"}, {"y*w - 1"});
  auto t = make_morphism(line, chart, std::map<std::string, std::string>{{"x", "w"}});
  CHECK(chart->render(t.apply(line->parse("x^2"))) == "w^2");
  CHECK(chart->is_zero(t.apply(line->parse("x")) * chart->gen("y") - chart->constant(1)));
}

TEST_CASE("morphisms are multiplicative and compose") {
  std::mt19937 rng(17);
  auto a = make_algebra(0, {"x", "y"}, {"x^2 + y^2 - 1"});
  auto b = make_algebra(0, {"s", "t"}, {"s^2 + t^2 - 1"});
  // rotation by a rational angle (3/5, 4/5)
  auto rot = make_morphism(a, b, std::map<std::string, std::string>{{"x", "3/5*s - 4/5*t"},
                                                                    {"y", "4/5*s + 3/5*t"}});
  for (int i = 0; i < 50; ++i) {
    auto p = testing::random_poly(rng, a->ring(), 3, 3);
    auto r = testing::random_poly(rng, a->ring(), 3, 3);
    CHECK(rot.apply(p * r) == b->reduce(rot.apply(p) * rot.apply(r)));
    CHECK(rot.apply(p + r) == b->reduce(rot.apply(p) + rot.apply(r)));
  }
  auto back = make_morphism(b, a, std::map<std::string, std::string>{{"s", "3/5*x + 4/5*y"},
                                                                     {"t", "-4/5*x + 3/5*y"}});
  CHECK(morphism_equal(compose_morphisms(back, rot), identity_morphism(a)));
  auto swap = make_morphism(a, a, std::map<std::string, std::string>{{"x", "y"}, {"y", "x"}});
  CHECK(first_difference(swap, identity_morphism(a)) == std::optional<size_t>(0));
  CHECK_THROWS_AS(compose_morphisms(rot, rot), BoundaryMismatch);
}

TEST_CASE("tensor products over a base") {
  auto A = make_algebra(0, {"x"}, {});
  auto B1 = make_algebra(0, {"x", "u"}, {"u^2 - x"});
  auto B2 = make_algebra(0, {"x", "v"}, {"v^2 + x"});
  auto f1 = make_morphism(A, B1, std::map<std::string, std::string>{{"x", "x"}});
  auto f2 = make_morphism(A, B2, std::map<std::string, std::string>{{"x", "x"}});
  auto t = tensor_over_base(f1, f2);
  // the right copy of x is identified with the left one
  CHECK(t.alg->ngens() == 3);
  auto u = t.i0.apply(B1->parse("u"));
  auto v = t.i1.apply(B2->parse("v"));
  CHECK(t.alg->is_zero(u * u + v * v));
  // middle linearity: (a u) (x) v = u (x) (a v) for a in A
  auto ax = A->parse("x");
  CHECK(t.alg->reduce(t.i0.apply(f1.apply(ax) * B1->parse("u")) * v) ==
        t.alg->reduce(u * t.i1.apply(f2.apply(ax) * B2->parse("v"))));
  CHECK(t.alg->render(t.alg->reduce(u * v)) == "u@v");
  CHECK(t.alg->render(v) == "1@v");
  CHECK(t.alg->render(u) == "u@1");

  // copair with compatible legs, and a failing pair
  auto C = make_algebra(0, {"a"}, {});
  auto h1 = make_morphism(B1, C, std::map<std::string, std::string>{{"x", "a^2"}, {"u", "a"}});
  auto h2 = make_morphism(B2, C, std::map<std::string, std::string>{{"x", "-a^2"}, {"v", "a"}});
  CHECK_THROWS_AS(copair(t, h1, h2), WellDefinednessFailure);
  auto Cc = make_algebra(0, {"a", "i"}, {"i^2 + 1"});
  auto g1 = make_morphism(B1, Cc, std::map<std::string, std::string>{{"x", "a^2"}, {"u", "a"}});
  auto g2 = make_morphism(B2, Cc, std::map<std::string, std::string>{{"x", "a^2"}, {"v", "i*a"}});
  auto c = copair(t, g1, g2);
  CHECK(Cc->render(c.apply(t.alg->reduce(u * v))) == "a^2*i");
  CHECK(morphism_equal(compose_morphisms(c, t.i0), g1));
  CHECK(morphism_equal(compose_morphisms(c, t.i1), g2));
}

TEST_CASE("localization") {
  auto line = make_algebra(0, {"y"}, {}, "Y");
  auto ly = localize(line, "y");
  CHECK(ly->ngens() == 2);
  CHECK(ly->name() == "Y[y]");
  CHECK(ly->display_names()[1] == "y_inv");
  CHECK(ly->is_zero(ly->parse("y*y_inv - 1")));
  CHECK(localize(ly, "y") == ly);
  CHECK_THROWS_AS(localize(line, "z"), ArithError);
}
