#include "kcx/curvature_torsion.hpp"

namespace kcx {

namespace {

Polynomial lift_base(const Polynomial& p, size_t n, const RingPtr& ring) {
  std::vector<Polynomial> gens;
  for (size_t i = 0; i < n; ++i) gens.push_back(Polynomial::variable(ring, i));
  return poly_substitute(p, gens, ring);
}

// Adds coef * (g_i ^ g_l) (x) e_q into a wedge (x) M vector of rank r.
void add_wedge(Vec& out, const ModulePtr& wedge, size_t r, size_t i, size_t l, size_t q,
               const Polynomial& coef) {
  if (i == l || coef.is_zero()) return;
  if (i < l) out[static_cast<size_t>(wedge->wedge_index(i, l)) * r + q] += coef;
  else out[static_cast<size_t>(wedge->wedge_index(l, i)) * r + q] -= coef;
}

Vec reduce_vec(const ModulePtr& m, const Vec& v) { return m->normal_form(v); }

Vec scaled(const Vec& v, const Scalar& s) {
  Vec out;
  for (auto& p : v) out.push_back(p.scaled(s));
  return out;
}

std::string render_if_nonzero(const ModulePtr& m, const Vec& v) {
  Vec nf = m->normal_form(v);
  return m->is_zero(nf) ? std::string() : m->render(nf);
}

std::string render_if_nonzero(const AlgebraPtr& a, const Polynomial& p) {
  Polynomial nf = a->reduce(p);
  return nf.is_zero() ? std::string() : a->render(nf);
}

bool is_kahler(const Connection& c) {
  return c.module->kind() == ModKind::Kahler && c.module->base() == c.omega->base() &&
         c.module->rank() == c.omega->rank();
}

}  // namespace

CurvatureSpaces curvature_spaces(const Connection& c) {
  CurvatureSpaces sp;
  sp.wedge = wedge_square(c.omega);
  sp.wedge_m = tensor_modules(sp.wedge, c.module);
  return sp;
}

Vec curvature_of(const Connection& c, const CurvatureSpaces& sp, const Vec& e) {
  const size_t n = c.omega->rank(), r = c.module->rank();
  const Vec first = apply_connection(c, e);
  Vec out = sp.wedge_m->zero();
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < r; ++k) {
      const Polynomial& a = first[i * r + k];
      if (a.is_zero()) continue;
      Vec ak = c.module->zero();
      ak[k] = a;
      const Vec second = apply_connection_formal(c, ak);
      for (size_t l = 0; l < n; ++l)
        for (size_t q = 0; q < r; ++q) add_wedge(out, sp.wedge, r, i, l, q, second[l * r + q]);
    }
  return out;
}

Vec torsion_of(const Connection& c, const ModulePtr& wedge, const Vec& e) {
  if (!is_kahler(c)) throw ModuleNotKahler("torsion needs a connection on Omega(A)");
  return wedge_map(c.omega_m, wedge, apply_connection_formal(c, e));
}

// ---------------- psi / phi ----------------

Polynomial embed_wedge(const BundleContext& ctx, const ModulePtr& wedge_m, const Vec& v) {
  const AlgebraPtr& t2 = ctx.t2s();
  const auto& ring = t2->ring();
  const size_t n = ctx.base()->ngens(), ns = ctx.s()->ngens(), r = ctx.module()->rank();
  const ModulePtr& wedge = wedge_m->left();
  Polynomial out(ring);
  for (size_t w = 0; w < wedge->rank(); ++w) {
    auto [i, l] = wedge->wedge_pairs()[w];
    for (size_t q = 0; q < r; ++q) {
      const Polynomial& a = v[w * r + q];
      if (a.is_zero()) continue;
      Polynomial m = t2->gen(n + q);
      Polynomial term = t2->gen(ns + i) * t2->gen(2 * ns + l) - t2->gen(2 * ns + i) * t2->gen(ns + l);
      out += lift_base(a, n, ring) * m * term;
    }
  }
  return out;
}

Vec project_wedge(const BundleContext& ctx, const ModulePtr& wedge_m, const Polynomial& p) {
  const size_t n = ctx.base()->ngens(), ns = ctx.s()->ngens(), r = ctx.module()->rank();
  const ModulePtr& wedge = wedge_m->left();
  const RingPtr& ar = ctx.base()->ring();
  Vec out = wedge_m->zero();
  for (auto& [mono, coef] : p.terms()) {
    int mq = -1, di = -1, dl = -1;
    bool ok = true;
    std::vector<uint32_t> be(n, 0);
    for (size_t v = 0; v < mono.nvars() && ok; ++v) {
      const uint32_t e = mono[v];
      if (!e) continue;
      if (v < n) be[v] = e;
      else if (e != 1) ok = false;
      else if (v < ns && mq < 0) mq = static_cast<int>(v - n);
      else if (v >= ns && v < ns + n && di < 0) di = static_cast<int>(v - ns);
      else if (v >= 2 * ns && v < 2 * ns + n && dl < 0) dl = static_cast<int>(v - 2 * ns);
      else ok = false;
    }
    if (!ok || mq < 0 || di < 0 || dl < 0) continue;
    add_wedge(out, wedge, r, static_cast<size_t>(di), static_cast<size_t>(dl),
              static_cast<size_t>(mq), Polynomial::term(ar, Monomial(be), coef));
  }
  return out;
}

Polynomial embed_wedge_hat(const AlgebraPtr& a, const ModulePtr& wedge, const Vec& v) {
  const AlgebraPtr& t2 = tangent_algebra(tangent_algebra(a));
  const size_t n = a->ngens();
  Polynomial out(t2->ring());
  for (size_t w = 0; w < wedge->rank(); ++w) {
    if (v[w].is_zero()) continue;
    auto [i, l] = wedge->wedge_pairs()[w];
    Polynomial term = t2->gen(n + i) * t2->gen(2 * n + l) - t2->gen(2 * n + i) * t2->gen(n + l);
    out += lift_base(v[w], n, t2->ring()) * term;
  }
  return out;
}

Vec project_wedge_hat(const AlgebraPtr& a, const ModulePtr& wedge, const Polynomial& p) {
  const size_t n = a->ngens();
  Vec out = wedge->zero();
  for (auto& [mono, coef] : p.terms()) {
    int di = -1, dl = -1;
    bool ok = true;
    std::vector<uint32_t> be(n, 0);
    for (size_t v = 0; v < mono.nvars() && ok; ++v) {
      const uint32_t e = mono[v];
      if (!e) continue;
      if (v < n) be[v] = e;
      else if (e != 1) ok = false;
      else if (v < 2 * n && di < 0) di = static_cast<int>(v - n);
      else if (v >= 2 * n && v < 3 * n && dl < 0) dl = static_cast<int>(v - 2 * n);
      else ok = false;
    }
    if (!ok || di < 0 || dl < 0) continue;
    add_wedge(out, wedge, 1, static_cast<size_t>(di), static_cast<size_t>(dl), 0,
              Polynomial::term(a->ring(), Monomial(be), coef));
  }
  return out;
}

// ---------------- curvature ----------------

bool CurvatureResult::correspondence_holds() const {
  for (auto& e : residuals)
    if (!e.pass()) return false;
  return true;
}

CurvatureResult module_curvature(const Connection& c) {
  CurvatureResult res;
  res.spaces = curvature_spaces(c);
  for (size_t j = 0; j < c.module->rank(); ++j) {
    Vec v = reduce_vec(res.spaces.wedge_m, curvature_of(c, res.spaces, c.module->unit(j)));
    if (!res.spaces.wedge_m->is_zero(v)) res.flat = false;
    res.curvature.push_back(std::move(v));
  }
  return res;
}

AlgebraMorphism tangent_curvature(const BundleContext& ctx, const AlgebraMorphism& k) {
  const AlgebraMorphism tk = tangent_apply_functor(k);
  const AlgebraMorphism tkk = compose_morphisms(tk, k);
  const AlgebraMorphism ctkk = compose_morphisms(tangent_flip(ctx.s()), tkk);
  AlgebraMorphism out = bundle_combine(ctx.sym(), ctkk, tkk, Sign::Minus);
  out.name = "C";
  return out;
}

CurvatureResult check_curvature_correspondence(const Connection& c) {
  CurvatureResult res = module_curvature(c);
  BundleContext ctx(c.module);
  const AlgebraMorphism k = to_vertical(ctx, c);
  res.tangent = tangent_curvature(ctx, k);
  const AlgebraPtr& t2 = ctx.t2s();
  const size_t n = ctx.base()->ngens();
  const uint32_t p = c.module->base()->characteristic();
  const ModulePtr& wm = res.spaces.wedge_m;
  for (size_t j = 0; j < c.module->rank(); ++j) {
    const Polynomial& cj = res.tangent->images[n + j];
    if (!cj.is_zero()) res.tangent_flat = false;
    CorrespondenceEntry e;
    e.generator = c.module->gens()[j];
    e.psi = render_if_nonzero(t2, cj - embed_wedge(ctx, wm, res.curvature[j]));
    const Vec phi = project_wedge(ctx, wm, res.tangent->reps[n + j]);
    e.phi = render_if_nonzero(wm, sub(phi, scaled(res.curvature[j], Scalar(2, p))));
    if (p != 2)
      e.half = render_if_nonzero(wm, sub(res.curvature[j], scaled(phi, Scalar(1, p) / Scalar(2, p))));
    res.residuals.push_back(std::move(e));
  }
  return res;
}

// ---------------- torsion ----------------

bool TorsionResult::correspondence_holds() const {
  if (!routes_agree) return false;
  for (auto& e : residuals)
    if (!e.pass()) return false;
  return true;
}

TorsionResult module_torsion(const Connection& c) {
  if (!is_kahler(c)) throw ModuleNotKahler("torsion needs a connection on Omega(A)");
  TorsionResult res;
  res.wedge = wedge_square(c.omega);
  for (size_t i = 0; i < c.module->rank(); ++i) {
    Vec v = res.wedge->normal_form(torsion_of(c, res.wedge, c.module->unit(i)));
    if (!res.wedge->is_zero(v)) res.torsion_free = false;
    res.torsion.push_back(std::move(v));
  }
  return res;
}

namespace {

// T(S_A(Omega)) generators [x, m, d(x), d(m)]; exchange m_i and d(x_i).
AlgebraMorphism swap_m_dx(const BundleContext& ctx) {
  const AlgebraPtr& ts = ctx.ts();
  const size_t n = ctx.base()->ngens(), ns = ctx.s()->ngens();
  std::vector<Polynomial> ims;
  for (size_t v = 0; v < ts->ngens(); ++v) ims.push_back(ts->gen(v));
  for (size_t i = 0; i < n; ++i) std::swap(ims[n + i], ims[ns + i]);
  return make_morphism(ts, ts, std::move(ims), true, "c'");
}

// T(A) (x)_A S_A(Omega): exchange d(x_i) and m_i.
AlgebraMorphism swap_w(const BundleContext& ctx) {
  const TensorProduct& w = ctx.ta_s();
  const size_t n = ctx.base()->ngens();
  std::vector<Polynomial> ims;
  for (size_t v = 0; v < w.alg->ngens(); ++v) ims.push_back(w.alg->gen(v));
  auto var_of = [](const Polynomial& q) {
    size_t k = 0;
    while (!q.leading_monomial()[k]) ++k;
    return k;
  };
  for (size_t i = 0; i < n; ++i) {
    const size_t a = var_of(w.i0.images[n + i]), b = var_of(w.i1.images[n + i]);
    std::swap(ims[a], ims[b]);
  }
  return make_morphism(w.alg, w.alg, std::move(ims), true, "tau");
}

}  // namespace

AlgebraMorphism torsion_identification(const BundleContext& ctx) {
  const size_t n = ctx.base()->ngens();
  if (ctx.module()->kind() != ModKind::Kahler || ctx.module()->rank() != n)
    throw ModuleNotKahler("identification needs S_A(Omega)");
  const AlgebraPtr& t2a = ctx.t2a();
  std::vector<Polynomial> ims;
  for (size_t i = 0; i < n; ++i) ims.push_back(t2a->gen(i));
  for (size_t i = 0; i < n; ++i) ims.push_back(t2a->gen(2 * n + i));
  for (size_t i = 0; i < n; ++i) ims.push_back(t2a->gen(n + i));
  for (size_t i = 0; i < n; ++i) ims.push_back(t2a->gen(3 * n + i));
  return make_morphism(ctx.ts(), t2a, std::move(ims), true, "Phi");
}

TangentTorsion tangent_torsion(const BundleContext& ctx, const AlgebraMorphism& k,
                               const AlgebraMorphism& h) {
  const AlgebraMorphism c = swap_m_dx(ctx);
  TangentTorsion out{bundle_combine(ctx.sym(), compose_morphisms(c, k), k, Sign::Minus), {}, true, {}};
  out.k_route.name = "V";
  const AlgebraMorphism uh = compose_morphisms(ctx.u(), h);
  std::vector<bool> fiber(ctx.ts()->ngens(), false);
  for (size_t v = ctx.s()->ngens(); v < fiber.size(); ++v) fiber[v] = true;
  const AlgebraMorphism flat =
      combine_on_fiber(compose_morphisms(uh, c), compose_morphisms(c, uh), fiber, Sign::Minus);
  out.h_route = bracketing(ctx, flat);
  out.h_route.name = "V_H";
  if (auto i = first_difference(out.k_route, out.h_route)) {
    out.agree = false;
    out.witness = ctx.s()->display_names()[*i];
  }
  return out;
}

TorsionResult check_torsion_correspondence(const Connection& c) {
  TorsionResult res = module_torsion(c);
  BundleContext ctx(c.module);
  const AlgebraMorphism k = to_vertical(ctx, c);
  const AlgebraMorphism h = to_horizontal(ctx, c);
  TangentTorsion tt = tangent_torsion(ctx, k, h);
  res.routes_agree = tt.agree;
  res.route_witness = tt.witness;
  const AlgebraMorphism phi_id = torsion_identification(ctx);
  res.tangent_hat = compose_morphisms(phi_id, tt.k_route);
  res.tangent = std::move(tt.k_route);
  const AlgebraMorphism tau = swap_w(ctx);
  res.horizontal_symmetric =
      !first_difference(compose_morphisms(h, swap_m_dx(ctx)), compose_morphisms(tau, h));
  const AlgebraPtr& a = ctx.base();
  const AlgebraPtr& t2a = ctx.t2a();
  const size_t n = a->ngens();
  const uint32_t p = a->characteristic();
  for (size_t i = 0; i < n; ++i) {
    CorrespondenceEntry e;
    e.generator = c.module->gens()[i];
    const Polynomial& vi = res.tangent_hat->images[n + i];
    e.psi = render_if_nonzero(t2a, vi - embed_wedge_hat(a, res.wedge, res.torsion[i]));
    const Vec phi = project_wedge_hat(a, res.wedge, res.tangent_hat->reps[n + i]);
    e.phi = render_if_nonzero(res.wedge, sub(phi, scaled(res.torsion[i], Scalar(2, p))));
    if (p != 2)
      e.half = render_if_nonzero(res.wedge,
                                 sub(res.torsion[i], scaled(phi, Scalar(1, p) / Scalar(2, p))));
    res.residuals.push_back(std::move(e));
  }
  return res;
}

}  // namespace kcx
