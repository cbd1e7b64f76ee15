#include <random>

#include "doctest.h"
#include "kcx/curvature_torsion.hpp"
#include "test_util.hpp"

using namespace kcx;

namespace {

AlgebraPtr plane() { return make_algebra(0, {"x1", "x2"}, {}, "plane"); }

Connection sphere_canonical() {
  auto s2 = make_algebra(0, {"x", "y", "z"}, {"x^2 + y^2 + z^2 - 1"}, "S2");
  std::vector<std::string> ims;
  for (const char* v : {"x", "y", "z"})
    ims.push_back(std::string("-") + v + "*d(x)@d(x) - " + v + "*d(y)@d(y) - " + v + "*d(z)@d(z)");
  return make_connection(kahler_module(s2), ims);
}

Connection elliptic() {
  auto e = make_algebra(0, {"x", "y"}, {"y^2 - x^3 - 1"}, "E");
  return make_connection(kahler_module(e), std::vector<std::string>{"2*x^2*d(x)@d(x) - 2/3*x*d(y)@d(y)",
                                                                    "3*x*y*d(x)@d(x) - y*d(y)@d(y)"});
}

void check_all_pass(const std::vector<CorrespondenceEntry>& rs) {
  for (auto& e : rs) {
    INFO(e.generator << " psi=" << e.psi << " phi=" << e.phi << " half=" << e.half);
    CHECK(e.pass());
  }
}

}  // namespace

TEST_CASE("plane curvature") {
  auto om = kahler_module(plane());
  auto flat = make_connection(om, std::vector<std::string>{"0", "0"});
  auto r = check_curvature_correspondence(flat);
  CHECK(r.flat);
  CHECK(r.tangent_flat);
  check_all_pass(r.residuals);

  auto twisted = make_connection(om, std::vector<std::string>{"x2*d(x1)@d(x1)", "0"});
  auto t = check_curvature_correspondence(twisted);
  CHECK_FALSE(t.flat);
  CHECK_FALSE(t.tangent_flat);
  // by hand: d(x1) ^ (d(x2) (x) d(x1) + x2^2 d(x1) (x) d(x1))
  const auto& wm = t.spaces.wedge_m;
  Vec expect = wm->zero();
  expect[0] = plane()->constant(1);
  CHECK(t.curvature[0] == wm->normal_form(expect));
  CHECK(wm->is_zero(t.curvature[1]));
  check_all_pass(t.residuals);

  // C(m1) = m1 d(x1) d'(x2) - m1 d'(x1) d(x2), expanded by hand
  BundleContext ctx(om);
  const auto& t2 = ctx.t2s();
  const size_t ns = 4;
  Polynomial c1 = t2->gen(2) * (t2->gen(ns) * t2->gen(2 * ns + 1) - t2->gen(2 * ns) * t2->gen(ns + 1));
  CHECK(t.tangent->images[2] == t2->reduce(c1));
  CHECK(t.tangent->images[0] == t2->gen(0));
  CHECK(t.tangent->images[1] == t2->gen(1));
}

TEST_CASE("circle is flat") {
  auto c = make_algebra(0, {"x", "y"}, {"x^2 + y^2 - 1"});
  auto om = kahler_module(c);
  auto conn = make_connection(om, std::vector<std::string>{"-x*d(x)@d(x) - x*d(y)@d(y)",
                                                           "-y*d(x)@d(x) - y*d(y)@d(y)"});
  auto sp = curvature_spaces(conn);
  CHECK(sp.wedge->rank() == 1);
  CHECK(sp.wedge->is_zero(sp.wedge->unit(0)));
  auto r = check_curvature_correspondence(conn);
  CHECK(r.flat);
  check_all_pass(r.residuals);
  auto t = check_torsion_correspondence(conn);
  CHECK(t.torsion_free);
  CHECK(t.routes_agree);
  check_all_pass(t.residuals);
}

TEST_CASE("curvature correspondence on the sphere and the elliptic curve") {
  auto s = check_curvature_correspondence(sphere_canonical());
  check_all_pass(s.residuals);
  CHECK_FALSE(s.flat);
  auto e = check_curvature_correspondence(elliptic());
  check_all_pass(e.residuals);
  CHECK(e.flat);
}

TEST_CASE("psi and phi") {
  auto om = kahler_module(make_algebra(0, {"x", "y", "z"}, {}));
  auto m = free_module(om->base(), 2);
  auto conn = free_canonical_connection(om->base(), 2);
  auto sp = curvature_spaces(conn);
  BundleContext ctx(conn.module);
  const auto& wm = sp.wedge_m;
  CHECK(embed_wedge(ctx, wm, wm->zero()).is_zero());
  CHECK(project_wedge(ctx, wm, Polynomial(ctx.t2s()->ring())) == wm->zero());
  // phi(psi(w)) = 2w on every basis element
  for (size_t k = 0; k < wm->rank(); ++k) {
    Vec v = project_wedge(ctx, wm, embed_wedge(ctx, wm, wm->unit(k)));
    CHECK(v == scale(wm->unit(k), om->base()->constant(2)));
  }
  // psi((dx ^ dy) (x) e1) = e1 dx d'y - e1 d'x dy
  const auto& t2 = ctx.t2s();
  const size_t ns = 5;
  Polynomial want = t2->gen(3) * (t2->gen(ns) * t2->gen(2 * ns + 1) - t2->gen(2 * ns) * t2->gen(ns + 1));
  CHECK(embed_wedge(ctx, wm, wm->unit(0)) == want);
  // d'd terms and wrong bidegrees are dropped
  CHECK(project_wedge(ctx, wm, t2->gen(3) * t2->gen(3 * ns)) == wm->zero());
  CHECK(project_wedge(ctx, wm, t2->gen(3) * t2->gen(ns) * t2->gen(ns + 1)) == wm->zero());

  auto a = om->base();
  auto w = wedge_square(om);
  const auto& t2a = tangent_algebra(tangent_algebra(a));
  for (size_t k = 0; k < w->rank(); ++k)
    CHECK(project_wedge_hat(a, w, embed_wedge_hat(a, w, w->unit(k))) == scale(w->unit(k), a->constant(2)));
  Polynomial hat = t2a->gen(3) * t2a->gen(7) - t2a->gen(6) * t2a->gen(4);
  CHECK(embed_wedge_hat(a, w, w->unit(0)) == hat);
  CHECK(project_wedge_hat(a, w, t2a->gen(9)) == w->zero());
}

TEST_CASE("curvature is A-linear") {
  std::mt19937 rng(7);
  auto a = plane();
  auto om = kahler_module(a);
  auto conn = make_connection(om, std::vector<std::string>{"x2*d(x1)@d(x1) + x1*d(x2)@d(x1)",
                                                           "x1^2*d(x1)@d(x2) - d(x2)@d(x2)"});
  auto sp = curvature_spaces(conn);
  for (int t = 0; t < 20; ++t) {
    Polynomial f = testing::random_poly(rng, a->ring(), 2, 3);
    Vec e{testing::random_poly(rng, a->ring(), 2, 2), testing::random_poly(rng, a->ring(), 2, 2)};
    Vec lhs = curvature_of(conn, sp, scale(e, f));
    Vec rhs = scale(curvature_of(conn, sp, e), f);
    CHECK(sp.wedge_m->is_zero(sub(lhs, rhs)));
  }
}

TEST_CASE("plane torsion") {
  auto om = kahler_module(plane());
  auto zero = check_torsion_correspondence(make_connection(om, std::vector<std::string>{"0", "0"}));
  CHECK(zero.torsion_free);
  CHECK(zero.routes_agree);
  CHECK(zero.horizontal_symmetric);
  check_all_pass(zero.residuals);

  auto sym = check_torsion_correspondence(
      make_connection(om, std::vector<std::string>{"x2*d(x1)@d(x2) + x2*d(x2)@d(x1)", "d(x1)@d(x1)"}));
  CHECK(sym.torsion_free);
  CHECK(sym.horizontal_symmetric);
  check_all_pass(sym.residuals);

  auto asym = check_torsion_correspondence(make_connection(om, std::vector<std::string>{"d(x1)@d(x2)", "0"}));
  CHECK_FALSE(asym.torsion_free);
  CHECK_FALSE(asym.horizontal_symmetric);
  CHECK(asym.routes_agree);
  CHECK(asym.render(0) == "d(x1)^d(x2)");
  CHECK(asym.wedge->is_zero(asym.torsion[1]));
  check_all_pass(asym.residuals);
  // V(a) = a
  CHECK(asym.tangent->images[0] == asym.tangent->cod->gen(0));
}

TEST_CASE("torsion needs Omega") {
  auto conn = free_canonical_connection(plane(), 2);
  CHECK_THROWS_AS(module_torsion(conn), ModuleNotKahler);
}

TEST_CASE("char 2 skips the halving") {
  auto a = make_algebra(2, {"x1", "x2"}, {});
  auto om = kahler_module(a);
  auto conn = make_connection(om, std::vector<std::string>{"x2*d(x1)@d(x1)", "0"});
  auto r = check_curvature_correspondence(conn);
  CHECK_FALSE(r.flat);
  for (auto& e : r.residuals) {
    CHECK(e.psi.empty());
    CHECK(e.phi.empty());
    CHECK(e.half.empty());
  }
}
