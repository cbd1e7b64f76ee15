#include <functional>

#include "kcx/cli.hpp"

namespace kcx::cli {

namespace {

struct Outcome {
  bool pass = true;
  std::string witness, residue;
  void need(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    witness += (witness.empty() ? "" : "; ") + what;
  }
};

Connection conn(const ModulePtr& m, std::vector<std::string> ims) { return make_connection(m, ims); }

bool axioms_and_roundtrip(const Connection& c) {
  BundleContext ctx(c.module);
  AlgebraMorphism k = to_vertical(ctx, c), h = to_horizontal(ctx, c);
  return verify_connection_axioms(ctx, k, h).all_pass() && connection_equal(from_horizontal(ctx, h), c) &&
         morphism_equal(vertical_from_horizontal(ctx, h), k);
}

AlgebraPtr plane() { return make_algebra(0, {"x1", "x2"}, {}, "plane"); }
AlgebraPtr circle() { return make_algebra(0, {"x", "y"}, {"x^2 + y^2 - 1"}, "circle"); }

Connection circle_canonical() {
  return conn(kahler_module(circle()), {"-x*d(x)@d(x) - x*d(y)@d(y)", "-y*d(x)@d(x) - y*d(y)@d(y)"});
}

Outcome plane_canonical() {
  Outcome o;
  auto c = conn(kahler_module(plane()), {"0", "0"});
  o.need(axioms_and_roundtrip(c), "axioms");
  auto cr = check_curvature_correspondence(c);
  o.need(cr.flat && cr.correspondence_holds(), "flat");
  auto tr = check_torsion_correspondence(c);
  o.need(tr.torsion_free && tr.correspondence_holds(), "torsion-free");
  if (o.pass) o.witness = "flat, torsion-free";
  return o;
}

Outcome plane_twisted() {
  Outcome o;
  auto c = conn(kahler_module(plane()), {"x2*d(x1)@d(x1)", "0"});
  o.need(axioms_and_roundtrip(c), "axioms");
  auto cr = check_curvature_correspondence(c);
  o.need(!cr.flat, "expected curvature");
  o.need(cr.correspondence_holds(), "curvature correspondence");
  o.residue = cr.render(0);
  if (o.pass) o.witness = "curved";
  return o;
}

Outcome affine_n_space() {
  Outcome o;
  auto a = make_algebra(0, {"x1", "x2", "x3"}, {}, "A3");
  auto c = conn(kahler_module(a), {"x1*d(x2)@d(x3)", "0", "x3^2*d(x3)@d(x3)"});
  o.need(axioms_and_roundtrip(c), "axioms");
  auto tr = check_torsion_correspondence(c);
  o.need(!tr.torsion_free && tr.correspondence_holds(), "torsion correspondence");
  o.need(check_curvature_correspondence(c).correspondence_holds(), "curvature correspondence");
  o.residue = tr.render(0);
  if (o.pass) o.witness = "axioms, torsion routes agree";
  return o;
}

Outcome circle_case() {
  Outcome o;
  auto c = circle_canonical();
  o.need(axioms_and_roundtrip(c), "axioms");
  auto cr = check_curvature_correspondence(c);
  o.need(cr.flat && cr.correspondence_holds(), "flat");
  auto tr = check_torsion_correspondence(c);
  o.need(tr.torsion_free && tr.correspondence_holds(), "torsion-free");
  if (o.pass) o.witness = "accepted, flat";
  return o;
}

Outcome circle_naive() {
  Outcome o;
  try {
    conn(kahler_module(circle()), {"0", "0"});
    o.need(false, "naive connection accepted");
  } catch (const WellDefinednessFailure& e) {
    o.residue = e.residue;
    o.need(e.residue == "2*d(x)@d(x) + 2*d(y)@d(y)", "unexpected residue");
    if (o.pass) o.witness = "rejected on " + e.relation;
  }
  return o;
}

Outcome sphere2() {
  Outcome o;
  auto s2 = make_algebra(0, {"x", "y", "z"}, {"x^2 + y^2 + z^2 - 1"}, "S2");
  std::vector<std::string> ims;
  for (const char* v : {"x", "y", "z"})
    ims.push_back(std::string("-") + v + "*d(x)@d(x) - " + v + "*d(y)@d(y) - " + v + "*d(z)@d(z)");
  auto c = conn(kahler_module(s2), ims);
  o.need(axioms_and_roundtrip(c), "axioms");
  auto cr = check_curvature_correspondence(c);
  o.need(cr.correspondence_holds(), "curvature correspondence");
  if (o.pass) o.witness = cr.flat ? "flat" : "curved, residuals zero";
  return o;
}

Outcome elliptic() {
  Outcome o;
  auto e = make_algebra(0, {"x", "y"}, {"y^2 - x^3 - 1"}, "E");
  auto om = kahler_module(e);
  try {
    conn(om, {"-2*x^2*d(x)@d(x) - 2/3*x*d(y)@d(y)", "3*x*y*d(x)@d(x) + y*d(y)@d(y)"});
    o.need(false, "printed sign variant accepted");
  } catch (const WellDefinednessFailure& w) {
    o.residue = w.residue;
  }
  auto c = conn(om, {"2*x^2*d(x)@d(x) - 2/3*x*d(y)@d(y)", "3*x*y*d(x)@d(x) - y*d(y)@d(y)"});
  o.need(axioms_and_roundtrip(c), "axioms");
  o.need(check_curvature_correspondence(c).correspondence_holds(), "curvature correspondence");
  if (o.pass) o.witness = "sign-corrected connection certified";
  return o;
}

Outcome fat_point() {
  Outcome o;
  auto f = make_algebra(0, {"x"}, {"x^2"}, "fat");
  auto sp = solve_connection_space(kahler_module(f), 3);
  o.need(sp.space.empty, "expected no connection");
  o.witness = sp.space.status();
  return o;
}

Outcome free_a3() {
  Outcome o;
  auto c = free_canonical_connection(plane(), 3);
  o.need(axioms_and_roundtrip(c), "axioms");
  o.need(module_curvature(c).flat, "flat");
  Vec v = c.module->zero();
  v[0] = plane()->parse("x1^3");
  o.residue = c.omega_m->render(apply_connection(c, v));
  o.need(o.residue == "3*x1^2*d(x1)@e1", "Leibniz");
  if (o.pass) o.witness = "flat";
  return o;
}

Outcome retract_circle() {
  Outcome o;
  auto canon = circle_canonical();
  auto free2 = free_canonical_connection(canon.module->base(), 2);
  const ModulePtr& m = free2.module;
  auto s = make_module_map(canon.module, m,
                           {parse_module_sum("y^2*e1 - x*y*e2", m), parse_module_sum("-x*y*e1 + x^2*e2", m)});
  auto r = make_module_map(m, canon.module, {canon.module->unit(0), canon.module->unit(1)});
  o.need(connection_equal(retract_connection(free2, s, r), canon), "retract differs");
  if (o.pass) o.witness = "equals canonical";
  return o;
}

Outcome pullback_free() {
  Outcome o;
  auto q = make_algebra(0, {}, {}, "Q");
  auto p = plane();
  auto f = make_morphism(q, p, std::vector<Polynomial>{});
  o.need(connection_equal(pullback_connection(free_canonical_connection(q, 2), f),
                          free_canonical_connection(p, 2)),
         "pullback differs");
  if (o.pass) o.witness = "equals canonical";
  return o;
}

GlueData p1(uint32_t p) {
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
  return g;
}

Outcome p1_char0() {
  Outcome o;
  auto res = glued_connection_check(p1(0), 6);
  o.need(res.solved && res.space.empty, "expected no solution");
  o.witness = res.space.status();
  return o;
}

Outcome p1_char2() {
  Outcome o;
  auto res = glued_connection_check(p1(2), 6);
  o.need(res.solved && res.space.unique(), "expected a unique solution");
  bool zero = true;
  for (auto& v : res.space.particular) zero = zero && v.is_zero();
  o.need(zero, "expected p = q = 0");
  o.witness = res.space.status();
  return o;
}

Outcome dualnum() {
  Outcome o;
  auto qx = make_algebra(0, {"x"}, {}, "Qx");
  auto q = make_algebra(0, {}, {}, "Q");
  o.need(dual_connection_solve(free_module(qx, 1), 2).empty, "Q[x] rank 1");
  o.need(dual_connection_solve(free_module(q, 1), 2).empty, "Q rank 1");
  o.need(!dual_connection_solve(free_module(q, 0), 2).empty, "zero module");
  if (o.pass) o.witness = "only the zero module";
  return o;
}

const std::vector<std::pair<std::string, std::function<Outcome()>>>& cases() {
  static const std::vector<std::pair<std::string, std::function<Outcome()>>> all = {
      {"plane-canonical", plane_canonical},   {"plane-twisted", plane_twisted},
      {"affine-n-space", affine_n_space},     {"circle-canonical", circle_case},
      {"circle-naive-reject", circle_naive},  {"sphere2", sphere2},
      {"elliptic", elliptic},                 {"fat-point-empty", fat_point},
      {"free-A3", free_a3},                   {"retract-circle", retract_circle},
      {"pullback-free", pullback_free},       {"p1-char0-empty", p1_char0},
      {"p1-char2-unique", p1_char2},          {"dualnum-nogo", dualnum},
  };
  return all;
}

}  // namespace

std::vector<std::string> gallery_ids() {
  std::vector<std::string> out;
  for (auto& [id, f] : cases()) out.push_back(id);
  return out;
}

Report run_gallery() {
  Report r;
  for (auto& [id, f] : cases()) {
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o.pass = false;
      o.witness = std::string("error: ") + e.what();
    }
    r.add(id, o.pass, o.witness, o.residue);
  }
  return r;
}

}  // namespace kcx::cli
