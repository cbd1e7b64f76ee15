#include <random>

#include "doctest.h"
#include "kcx/connections.hpp"
#include "test_util.hpp"

using namespace kcx;

namespace {

AlgebraPtr circle() { return make_algebra(0, {"x", "y"}, {"x^2 + y^2 - 1"}, "circle"); }

Connection circle_canonical(const ModulePtr& om) {
  return make_connection(om, std::vector<std::string>{"-x*d(x)@d(x) - x*d(y)@d(y)", "-y*d(x)@d(x) - y*d(y)@d(y)"},
                         "canonical");
}

Vec vec_of(const ModulePtr& m, std::initializer_list<const char*> parts) {
  Vec v;
  for (auto* p : parts) v.push_back(m->base()->parse(p));
  return v;
}

}  // namespace

TEST_CASE("circle connections") {
  auto om = kahler_module(circle());
  CHECK_NOTHROW(circle_canonical(om));
  try {
    make_connection(om, std::vector<std::string>{"0", "0"});
    FAIL("naive connection accepted");
  } catch (const WellDefinednessFailure& e) {
    CHECK(e.residue == "2*d(x)@d(x) + 2*d(y)@d(y)");
  }
}

TEST_CASE("elliptic curve connection") {
  auto e = make_algebra(0, {"x", "y"}, {"y^2 - x^3 - 1"});
  auto om = kahler_module(e);
  // the printed images leave 21*x^4*d(x)@d(x) on the defining relation
  CHECK_THROWS_AS(make_connection(om, std::vector<std::string>{"-2*x^2*d(x)@d(x) - 2/3*x*d(y)@d(y)",
                                                               "3*x*y*d(x)@d(x) + y*d(y)@d(y)"}),
                  WellDefinednessFailure);
  auto fixed = make_connection(
      om, std::vector<std::string>{"2*x^2*d(x)@d(x) - 2/3*x*d(y)@d(y)", "3*x*y*d(x)@d(x) - y*d(y)@d(y)"});
  // it is the retract of the free connection along x/3 * f_x + y/2 * f_y = 1
  auto free2 = free_canonical_connection(e, 2);
  const ModulePtr& m = free2.module;
  auto s = make_module_map(om, m, {parse_module_sum("(1 + x^3)*e1 - 2/3*x*y*e2", m),
                                   parse_module_sum("3/2*x^2*y*e1 - x^3*e2", m)});
  auto r = make_module_map(m, om, {om->unit(0), om->unit(1)});
  CHECK(connection_equal(retract_connection(free2, s, r), fixed));
}

TEST_CASE("Leibniz rule") {
  auto plane = make_algebra(0, {"x1", "x2"}, {});
  auto om = kahler_module(plane);
  auto c = make_connection(om, std::vector<std::string>{"0", "0"});
  Vec e = vec_of(om, {"x1^3", "0"});
  CHECK(c.omega_m->render(apply_connection(c, e)) == "3*x1^2*d(x1)@d(x1)");
  CHECK(c.omega_m->render(apply_connection(c, om->zero())) == "0");
  // nabla(a m) - a nabla(m) = d(a) (x) m, so nabla is not A-linear
  auto tw = make_connection(om, std::vector<std::string>{"x2*d(x1)@d(x1)", "0"});
  Vec m = vec_of(om, {"x1", "x2"});
  Polynomial a = plane->parse("x1*x2 + 1");
  Vec lhs = apply_connection(tw, scale(m, a));
  Vec rhs = scale(apply_connection(tw, m), a);
  CHECK(!tw.omega_m->is_zero(sub(lhs, rhs)));
  CHECK(tw.omega_m->is_zero(sub(sub(lhs, rhs), tensor_vec(tw.omega_m, differential(a), m))));

  auto f = free_canonical_connection(plane, 2);
  CHECK(f.omega_m->render(apply_connection(f, vec_of(f.module, {"x1^3", "0"}))) == "3*x1^2*d(x1)@e1");
  CHECK(free_canonical_connection(plane, 0).gamma.empty());
}

TEST_CASE("horizontal and vertical forms on the circle") {
  auto om = kahler_module(circle());
  auto c = circle_canonical(om);
  BundleContext ctx(om);
  auto h = to_horizontal(ctx, c);
  auto k = to_vertical(ctx, c);
  auto rep = verify_connection_axioms(ctx, k, h);
  for (auto& e : rep.entries) {
    INFO(e.id << " at " << e.witness << ": " << e.lhs << " vs " << e.rhs);
    CHECK(e.pass);
  }
  CHECK(rep.entries.size() == 11);
  CHECK(connection_equal(from_horizontal(ctx, h, om), c));
  CHECK(morphism_equal(to_horizontal(ctx, from_horizontal(ctx, h, om)), h));
  CHECK(morphism_equal(vertical_from_horizontal(ctx, h), k));
  const size_t dm = ctx.ts()->index_of_display("d(d(x))");
  CHECK(h.images[dm] == ctx.ta_s().alg->reduce(omega_m_to_poly(ctx, c, c.gamma[0])));
}

TEST_CASE("forced axiom failures") {
  auto plane = make_algebra(0, {"x"}, {});
  auto om = kahler_module(plane);
  auto c = make_connection(om, std::vector<std::string>{"x*d(x)@d(x)"});
  BundleContext ctx(om);
  auto h = to_horizontal(ctx, c);
  const auto& w = ctx.ta_s().alg;
  const size_t n = 1, ns = 2;

  auto doubled = h;
  doubled.images[n] = w->reduce(h.images[n] * w->constant(2));
  doubled.reps = doubled.images;
  auto rep = verify_horizontal_axioms(ctx, doubled);
  CHECK(!rep.find("H.2")->pass);
  CHECK_THROWS_AS(from_horizontal(ctx, doubled), AxiomFailure);

  auto perturbed = h;
  const Polynomial dx = ctx.ta_s().i0.images[1];
  perturbed.images[ns + n] = w->reduce(h.images[ns + n] + dx * dx);
  perturbed.reps = perturbed.images;
  rep = verify_horizontal_axioms(ctx, perturbed);
  CHECK((!rep.find("H.3")->pass || !rep.find("H.4")->pass));

  auto k = to_vertical(ctx, c);
  auto bad = k;
  bad.images[n] = ctx.ts()->reduce(k.images[n] * ctx.ts()->constant(2));
  bad.reps = bad.images;
  CHECK(!verify_vertical_axioms(ctx, bad).find("K.1")->pass);
  CHECK(verify_vertical_axioms(ctx, k).all_pass());
}

TEST_CASE("connection spaces") {
  auto fat = make_algebra(0, {"x"}, {"x^2"});
  CHECK(solve_connection_space(kahler_module(fat), 3).space.empty);
  auto plane = make_algebra(0, {"x1", "x2"}, {});
  auto sp = solve_connection_space(kahler_module(plane), 1);
  CHECK(!sp.space.empty);
  CHECK(sp.space.dim() == 24);
  auto om = kahler_module(circle());
  auto cs = solve_connection_space(om, 1);
  CHECK(!cs.space.empty);
  CHECK(cs.contains(circle_canonical(om)));
  // the naive Gamma = 0 is excluded
  CHECK(!cs.space.contains(std::vector<Scalar>(cs.space.unknowns.size(), Scalar(0, 0))));
  // every solution is a genuine connection
  std::vector<Scalar> x = cs.space.particular;
  for (size_t b = 0; b < cs.space.dim(); ++b)
    for (size_t u = 0; u < x.size(); ++u) x[u] += cs.space.basis[b][u] * Scalar(static_cast<long>(b % 3) - 1, 0);
  CHECK_NOTHROW(make_connection(om, cs.gamma_of(x)));
}

TEST_CASE("pullback and retract") {
  auto q = make_algebra(0, {}, {});
  auto plane = make_algebra(0, {"x1", "x2"}, {});
  auto base = free_canonical_connection(q, 2);
  auto f = make_morphism(q, plane, std::vector<Polynomial>{});
  CHECK(connection_equal(pullback_connection(base, f), free_canonical_connection(plane, 2)));

  auto om = kahler_module(circle());
  auto canon = circle_canonical(om);
  CHECK(connection_equal(pullback_connection(canon, identity_morphism(om->base())), canon));

  auto free2 = free_canonical_connection(om->base(), 2);
  const ModulePtr& m = free2.module;
  auto s = make_module_map(om, m, {parse_module_sum("y^2*e1 - x*y*e2", m), parse_module_sum("-x*y*e1 + x^2*e2", m)});
  auto r = make_module_map(m, om, {om->unit(0), om->unit(1)});
  auto ret = retract_connection(free2, s, r);
  CHECK(connection_equal(ret, canon));
  CHECK(render_gamma(ret, 0) == render_gamma(canon, 0));
  CHECK(render_gamma(ret, 1) == render_gamma(canon, 1));
  auto wrong = make_module_map(m, om, {om->unit(1), om->unit(0)});
  CHECK_THROWS_AS(retract_connection(free2, s, wrong), SectionRetractionFailure);
}

TEST_CASE("projective line gluing") {
  for (uint32_t p : {0u, 2u}) {
    auto u1 = make_algebra(p, {"x"}, {}, "U1");
    auto u2 = make_algebra(p, {"y"}, {}, "U2");
    auto l1 = localize(u1, "x"), l2 = localize(u2, "y");
    GlueData g;
    g.chart1 = u1;
    g.chart2 = u2;
    g.var1 = "x";
    g.var2 = "y";
    g.transition = make_morphism(l1, l2, std::map<std::string, std::string>{{"x", "y_inv"}, {"x_inv", "y"}});
    g.inverse = make_morphism(l2, l1, std::map<std::string, std::string>{{"y", "x_inv"}, {"y_inv", "x"}});
    auto res = glued_connection_check(g, 6);
    CHECK(res.solved);
    if (p == 0) {
      CHECK(res.space.empty);
    } else {
      REQUIRE(res.space.unique());
      for (auto& v : res.space.particular) CHECK(v.is_zero());
    }
  }
  // identity gluing of two planes with the same data
  auto a = make_algebra(0, {"x"}, {}, "A");
  auto b = make_algebra(0, {"x"}, {}, "B");
  auto la = localize(a, "x"), lb = localize(b, "x");
  GlueData g;
  g.chart1 = a;
  g.chart2 = b;
  g.var1 = g.var2 = "x";
  g.transition = make_morphism(la, lb, std::map<std::string, std::string>{{"x", "x"}, {"x_inv", "x_inv"}});
  g.inverse = make_morphism(lb, la, std::map<std::string, std::string>{{"x", "x"}, {"x_inv", "x_inv"}});
  g.conn1 = make_connection(kahler_module(a), std::vector<std::string>{"x^2*d(x)@d(x)"});
  g.conn2 = make_connection(kahler_module(b), std::vector<std::string>{"x^2*d(x)@d(x)"});
  CHECK(glued_connection_check(g).report.all_pass());
  g.conn2 = make_connection(kahler_module(b), std::vector<std::string>{"x*d(x)@d(x)"});
  CHECK(!glued_connection_check(g).report.all_pass());
  g.inverse = g.transition;
  CHECK_THROWS_AS(glued_connection_check(g), BoundaryMismatch);
}

TEST_CASE("random plane connections round trip") {
  auto plane = make_algebra(0, {"x1", "x2"}, {});
  auto om = kahler_module(plane);
  BundleContext ctx(om);
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-3, 3);
  auto monos = standard_monomials(plane, 2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vec> g(2, Vec(4, plane->zero()));
    for (auto& v : g)
      for (auto& p : v)
        for (auto& m : monos)
          if (int c = coef(rng)) p.add_term(m, Scalar(c, 0));
    auto c = make_connection(om, g);
    auto h = to_horizontal(ctx, c);
    auto back = from_horizontal(ctx, h, om);
    CHECK(connection_equal(back, c));
    CHECK(morphism_equal(to_horizontal(ctx, back), h));
    CHECK(morphism_equal(vertical_from_horizontal(ctx, h), to_vertical(ctx, c)));
  }
}

TEST_CASE("axioms on the sphere") {
  auto s2 = make_algebra(0, {"x", "y", "z"}, {"x^2 + y^2 + z^2 - 1"});
  auto om = kahler_module(s2);
  std::vector<std::string> ims;
  for (const char* v : {"x", "y", "z"})
    ims.push_back(std::string("-") + v + "*d(x)@d(x) - " + v + "*d(y)@d(y) - " + v + "*d(z)@d(z)");
  auto c = make_connection(om, ims);
  BundleContext ctx(om);
  auto rep = verify_connection_axioms(ctx, to_vertical(ctx, c), to_horizontal(ctx, c));
  for (auto& e : rep.entries) {
    INFO(e.id << " at " << e.witness);
    CHECK(e.pass);
  }
}
