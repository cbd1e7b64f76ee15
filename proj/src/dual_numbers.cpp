#include "kcx/tangent.hpp"

#include <algorithm>

namespace kcx {

namespace {

Polynomial embed(const Polynomial& p, const RingPtr& target) {
  std::vector<Polynomial> vars;
  for (size_t i = 0; i < p.ring()->nvars(); ++i) vars.push_back(Polynomial::variable(target, i));
  return poly_substitute(p, vars, target);
}

AlgebraPtr adjoin_nilpotents(const AlgebraPtr& a, const std::vector<std::string>& names,
                             const std::vector<std::pair<size_t, size_t>>& zero_products) {
  auto vars = a->names();
  auto display = a->display_names();
  auto roles = a->roles();
  for (auto& n : names) {
    vars.push_back("e:" + n);
    display.push_back(n);
    roles.push_back(Role::Epsilon);
  }
  auto ring = make_ring(a->characteristic(), vars);
  std::vector<Polynomial> rels;
  for (auto& r : a->relations()) rels.push_back(embed(r, ring));
  const size_t n = a->ngens();
  for (auto [i, j] : zero_products)
    rels.push_back(Polynomial::variable(ring, n + i) * Polynomial::variable(ring, n + j));
  Provenance prov;
  prov.kind = ProvKind::Dual;
  prov.base = a;
  return PresentedAlgebra::create(ring, rels, display, roles, prov);
}

std::vector<Polynomial> base_images(const AlgebraPtr& a, const AlgebraPtr& target) {
  std::vector<Polynomial> v;
  for (size_t i = 0; i < a->ngens(); ++i) v.push_back(target->gen(i));
  return v;
}

AlgebraMorphism certified_map(const AlgebraPtr& dom, const AlgebraPtr& cod,
                              std::vector<Polynomial> ims, const std::string& name) {
  return make_morphism(dom, cod, std::move(ims), true, name);
}

}  // namespace

DualNumbers dual_numbers_structure(const AlgebraPtr& a) {
  DualNumbers d;
  const size_t n = a->ngens();
  d.base = a;
  d.t = adjoin_nilpotents(a, {"eps"}, {{0, 0}});
  d.pair = adjoin_nilpotents(a, {"eps1", "eps2"}, {{0, 0}, {1, 1}, {0, 1}});
  d.tt = adjoin_nilpotents(a, {"eps", "eps'"}, {{0, 0}, {1, 1}});
  auto eps = d.t->gen(n);
  auto e = d.tt->gen(n), ep = d.tt->gen(n + 1);

  auto ims = base_images(a, a);
  ims.push_back(a->zero());
  d.p = certified_map(d.t, a, ims, "p");
  d.zero = certified_map(a, d.t, base_images(a, d.t), "0");
  ims = base_images(a, d.t);
  ims.push_back(eps);
  ims.push_back(eps);
  d.sum = certified_map(d.pair, d.t, ims, "+");
  ims = base_images(a, d.t);
  ims.push_back(-eps);
  d.neg = certified_map(d.t, d.t, ims, "-");
  ims = base_images(a, d.tt);
  ims.push_back(e * ep);
  d.lift = certified_map(d.t, d.tt, ims, "l");
  ims = base_images(a, d.tt);
  ims.push_back(ep);
  ims.push_back(e);
  d.flip = certified_map(d.tt, d.tt, ims, "c");
  return d;
}

DualBundle dual_module_bundle(const ModulePtr& m) {
  DualBundle b;
  b.base = m->base();
  b.module = m;
  const auto& a = b.base;
  const size_t n = a->ngens(), r = m->rank();
  std::vector<std::string> names;
  std::vector<std::pair<size_t, size_t>> prods;
  for (size_t i = 0; i < r; ++i) {
    names.push_back(m->gens()[i] + "*eps");
    for (size_t j = i; j < r; ++j) prods.emplace_back(i, j);
  }
  auto with_module_relations = [&](const AlgebraPtr& raw) {
    std::vector<Polynomial> rels = raw->relations();
    for (auto& rel : m->relations()) {
      Polynomial p(raw->ring());
      for (size_t k = 0; k < r; ++k) p += embed(rel[k], raw->ring()) * raw->gen(n + k);
      rels.push_back(p);
    }
    return PresentedAlgebra::create(raw->ring(), rels, raw->display_names(), raw->roles(),
                                    raw->provenance());
  };
  b.alg = with_module_relations(adjoin_nilpotents(a, names, prods));
  auto lnames = names;
  lnames.push_back("eps'");
  auto lprods = prods;
  lprods.emplace_back(r, r);
  b.lifted = with_module_relations(adjoin_nilpotents(a, lnames, lprods));

  auto ims = base_images(a, a);
  for (size_t j = 0; j < r; ++j) ims.push_back(a->zero());
  b.q = certified_map(b.alg, a, ims, "q");
  ims = base_images(a, b.lifted);
  for (size_t j = 0; j < r; ++j) ims.push_back(b.lifted->gen(n + j) * b.lifted->gen(n + r));
  b.lambda = certified_map(b.alg, b.lifted, ims, "lambda");
  return b;
}

AffineSolutionSpace dual_connection_solve(const ModulePtr& m, unsigned degree_bound) {
  DualBundle bun = dual_module_bundle(m);
  const auto& a = bun.base;
  const size_t n = a->ngens(), r = m->rank();
  const auto monos = standard_monomials(a, degree_bound);

  // K(g) = b + sum_k n_k (m_k eps) for g in {m_1 eps, ..., m_r eps, eps'}.
  std::vector<std::string> unknowns;
  struct Slot {
    size_t g;
    int k;  // -1: constant part b, else coefficient of m_k eps
    size_t mono;
  };
  std::vector<Slot> slots;
  for (size_t g = 0; g <= r; ++g) {
    const std::string gname = g < r ? m->gens()[g] + "*eps" : "eps'";
    for (int k = -1; k < static_cast<int>(r); ++k)
      for (size_t t = 0; t < monos.size(); ++t) {
        std::string part = k < 0 ? "b" : "n" + std::to_string(k + 1);
        unknowns.push_back("K(" + gname + ")." + part + "[" +
                           render_monomial(monos[t], a->display_names()) + "]");
        slots.push_back({g, k, t});
      }
  }
  const size_t first = n + r + 1;
  auto vars = bun.lifted->names();
  for (size_t u = 0; u < unknowns.size(); ++u) vars.push_back("$u" + std::to_string(u));
  auto ring = make_ring(a->characteristic(), vars);
  std::vector<Polynomial> gens;
  for (auto& g : bun.lifted->relations()) gens.push_back(embed(g, ring));
  auto gb = groebner_basis(gens, ring);
  auto nf = [&](const Polynomial& p) { return normal_form(p, gb); };
  auto var = [&](size_t i) { return Polynomial::variable(ring, i); };
  const Polynomial eps_p = var(n + r);

  auto image = [&](size_t g, bool drop_constant) {
    Polynomial p(ring);
    for (size_t u = 0; u < slots.size(); ++u) {
      const Slot& s = slots[u];
      if (s.g != g || (drop_constant && s.k < 0)) continue;
      std::vector<uint32_t> e(ring->nvars(), 0);
      for (size_t i = 0; i < n; ++i) e[i] = monos[s.mono][i];
      Polynomial term = Polynomial::term(ring, Monomial(e), Scalar(1, ring->p)) * var(first + u);
      if (s.k >= 0) term = term * var(n + static_cast<size_t>(s.k));
      p += term;
    }
    return p;
  };
  auto lambda = [&](const Polynomial& p) {
    std::vector<Polynomial> ims;
    for (size_t i = 0; i < ring->nvars(); ++i)
      ims.push_back(i >= n && i < n + r ? var(i) * eps_p : var(i));
    return poly_substitute(p, ims, ring);
  };

  // Lift compatibility: lambda(K(g)) = K(g) eps'. Linear; forces the constant parts to vanish.
  std::vector<LinearEquation> eqs;
  for (size_t g = 0; g <= r; ++g) {
    Polynomial kg = image(g, false);
    for (auto& e : coefficient_equations(nf(lambda(kg) - kg * eps_p), first, unknowns.size()))
      eqs.push_back(e);
  }
  auto lift_space = affine_linear_solve(eqs, unknowns, ring->p);
  if (lift_space.empty) return lift_space;
  for (size_t u = 0; u < slots.size(); ++u) {
    if (slots[u].k >= 0) continue;
    bool forced = lift_space.particular[u].is_zero();
    for (auto& v : lift_space.basis) forced = forced && v[u].is_zero();
    if (!forced) throw NonlinearError("constant part of K is not forced to zero; residual system is not linear");
  }

  // Retract of the lift: K(m eps) K(eps') = m eps, with the forced forms substituted.
  const Polynomial kp = image(r, true);
  for (size_t j = 0; j < r; ++j) {
    Polynomial res = nf(var(n + j) - image(j, true) * kp);
    for (auto& e : coefficient_equations(res, first, unknowns.size())) eqs.push_back(e);
  }
  return affine_linear_solve(eqs, unknowns, ring->p);
}

}  // namespace kcx
