#include "kcx/tangent.hpp"

#include <algorithm>
#include <set>

#include <map>

namespace kcx {

namespace {

Polynomial lift_poly(const Polynomial& p, const RingPtr& target) {
  std::vector<Polynomial> vars;
  for (size_t i = 0; i < p.ring()->nvars(); ++i) vars.push_back(Polynomial::variable(target, i));
  return poly_substitute(p, vars, target);
}

AlgebraMorphism structure_map(const AlgebraPtr& dom, const AlgebraPtr& cod,
                              std::vector<Polynomial> images, const std::string& name) {
  AlgebraMorphism f = make_morphism(dom, cod, std::move(images), false, name);
  f.certified = true;
  return f;
}

AlgebraPtr build_tangent(const AlgebraPtr& b) {
  const size_t n = b->ngens();
  const bool second = b->provenance().kind == ProvKind::Tangent;
  auto vars = b->names();
  auto display = b->display_names();
  auto roles = b->roles();
  for (size_t i = 0; i < n; ++i) {
    if (!second) {
      vars.push_back("d_" + b->names()[i]);
      display.push_back("d(" + b->display_names()[i] + ")");
      roles.push_back(Role::D);
    } else if (i < n / 2) {
      vars.push_back("dp_" + b->names()[i]);
      display.push_back("d'(" + b->display_names()[i] + ")");
      roles.push_back(Role::DPrime);
    } else {
      const AlgebraPtr& inner = b->provenance().base;
      vars.push_back("dpd_" + inner->names()[i - n / 2]);
      display.push_back("d'd(" + inner->display_names()[i - n / 2] + ")");
      roles.push_back(Role::DPrimeD);
    }
  }
  for (size_t i = n; i < display.size(); ++i)
    if (std::find(display.begin(), display.begin() + static_cast<long>(n), display[i]) !=
        display.begin() + static_cast<long>(n)) {
      // the base already shows this name (Kahler generators in S); bracket the tangent one
      const std::string& inner = b->display_names()[i - n];
      display[i] = (roles[i] == Role::D ? "d[" : roles[i] == Role::DPrime ? "d'[" : "d'd[") + inner + "]";
    }
  {
    std::set<std::string> seen(vars.begin(), vars.begin() + static_cast<long>(n));
    for (size_t i = n; i < vars.size(); ++i) {
      while (seen.count(vars[i])) vars[i] += "'";
      seen.insert(vars[i]);
    }
  }
  auto ring = make_ring(b->characteristic(), vars);
  std::vector<Polynomial> rels;
  for (auto& r : b->relations()) rels.push_back(lift_poly(r, ring));
  for (auto& r : b->relations()) {
    Polynomial dr(ring);
    for (size_t i = 0; i < n; ++i)
      dr += lift_poly(formal_partial(r, i), ring) * Polynomial::variable(ring, n + i);
    rels.push_back(dr);
  }
  Provenance prov;
  prov.kind = ProvKind::Tangent;
  prov.base = b;
  // d adds one to a fresh grading coordinate; B's own grading (if any) carries over.
  const auto& bg = b->provenance().grading;
  prov.degree_zero = bg.empty() ? b : b->provenance().degree_zero;
  const size_t width = bg.empty() ? 1 : bg.front().size() + 1;
  for (size_t i = 0; i < 2 * n; ++i) {
    std::vector<uint32_t> g(width, 0);
    if (!bg.empty()) std::copy(bg[i % n].begin(), bg[i % n].end(), g.begin());
    if (i >= n) g.back() = 1;
    prov.grading.push_back(std::move(g));
  }
  return PresentedAlgebra::create(ring, rels, display, roles, prov,
                                  b->name().empty() ? std::string() : "T(" + b->name() + ")");
}

template <class T>
struct Once {
  std::once_flag flag;
  std::optional<T> value;
  template <class F>
  const T& get(F&& make) {
    std::call_once(flag, [&] { value.emplace(make()); });
    return *value;
  }
};

}  // namespace

AlgebraPtr tangent_algebra(const AlgebraPtr& b) {
  static std::mutex mu;
  static std::map<const PresentedAlgebra*, AlgebraPtr> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(b.get());
    if (it != cache.end()) return it->second;
  }
  AlgebraPtr t = build_tangent(b);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(b.get(), t).first->second;
}

Polynomial tangent_differential(const Polynomial& p, const AlgebraPtr& tb) {
  const size_t n = p.ring()->nvars();
  Polynomial out(tb->ring());
  for (size_t i = 0; i < n; ++i) {
    Polynomial di = formal_partial(p, i);
    if (!di.is_zero()) out += lift_poly(di, tb->ring()) * tb->gen(n + i);
  }
  return out;
}

AlgebraMorphism tangent_projection(const AlgebraPtr& b) {
  auto t = tangent_algebra(b);
  std::vector<Polynomial> ims;
  for (size_t i = 0; i < b->ngens(); ++i) ims.push_back(t->gen(i));
  return structure_map(b, t, ims, "p");
}

AlgebraMorphism tangent_zero(const AlgebraPtr& b) {
  auto t = tangent_algebra(b);
  const size_t n = b->ngens();
  std::vector<Polynomial> ims;
  for (size_t i = 0; i < 2 * n; ++i) ims.push_back(i < n ? b->gen(i) : b->zero());
  return structure_map(t, b, ims, "0");
}

AlgebraMorphism tangent_negation(const AlgebraPtr& b) {
  auto t = tangent_algebra(b);
  const size_t n = b->ngens();
  std::vector<Polynomial> ims;
  for (size_t i = 0; i < 2 * n; ++i) ims.push_back(i < n ? t->gen(i) : -t->gen(i));
  return structure_map(t, t, ims, "-");
}

AlgebraMorphism tangent_lift(const AlgebraPtr& b) {
  auto t = tangent_algebra(b);
  auto t2 = tangent_algebra(t);
  const size_t n = b->ngens();
  std::vector<Polynomial> ims;
  for (size_t i = 0; i < 4 * n; ++i) {
    if (i < n) ims.push_back(t->gen(i));
    else if (i < 3 * n) ims.push_back(t->zero());
    else ims.push_back(t->gen(i - 2 * n));
  }
  return structure_map(t2, t, ims, "l");
}

AlgebraMorphism tangent_flip(const AlgebraPtr& b) {
  auto t2 = tangent_algebra(tangent_algebra(b));
  const size_t n = b->ngens();
  std::vector<Polynomial> ims;
  for (size_t i = 0; i < 4 * n; ++i) {
    size_t j = i;
    if (i >= n && i < 2 * n) j = i + n;
    else if (i >= 2 * n && i < 3 * n) j = i - n;
    ims.push_back(t2->gen(j));
  }
  return structure_map(t2, t2, ims, "c");
}

TangentMaps tangent_structure_maps(const AlgebraPtr& b) {
  TangentMaps m;
  m.base = b;
  m.t = tangent_algebra(b);
  m.t2 = tangent_algebra(m.t);
  m.p = tangent_projection(b);
  m.zero = tangent_zero(b);
  m.neg = tangent_negation(b);
  m.lift = tangent_lift(b);
  m.flip = tangent_flip(b);
  m.t_pair = tensor_over_base(m.p, m.p);
  const size_t n = b->ngens();
  std::vector<Polynomial> ims;
  for (size_t i = 0; i < 2 * n; ++i) {
    Polynomial v = m.t_pair.i0.images[i];
    if (i >= n) v += m.t_pair.i1.images[i];
    ims.push_back(v);
  }
  m.sum = structure_map(m.t, m.t_pair.alg, ims, "+");
  m.tau = copair(m.t_pair, m.t_pair.i1, m.t_pair.i0, "tau");
  return m;
}

AlgebraMorphism tangent_apply_functor(const AlgebraMorphism& f) {
  auto tdom = tangent_algebra(f.dom);
  auto tcod = tangent_algebra(f.cod);
  const size_t n = f.dom->ngens();
  std::vector<Polynomial> ims(2 * n), reps(2 * n);
  for (size_t i = 0; i < n; ++i) {
    ims[i] = lift_poly(f.images[i], tcod->ring());
    reps[i] = lift_poly(f.reps[i], tcod->ring());
    ims[n + i] = tangent_differential(f.images[i], tcod);
    reps[n + i] = tangent_differential(f.reps[i], tcod);
  }
  AlgebraMorphism tf = make_morphism(tdom, tcod, ims, false, "T(" + f.name + ")");
  tf.reps = reps;
  tf.certified = f.certified;
  return tf;
}

// ---------------- S_A(M) ----------------

SymBundle sym_algebra_bundle(const AlgebraPtr& a, const ModulePtr& m) {
  if (m->base() != a) throw BoundaryMismatch("module is not over this algebra");
  const size_t n = a->ngens();
  auto vars = a->names();
  auto display = a->display_names();
  auto roles = a->roles();
  for (auto& g : m->gens()) {
    vars.push_back("m:" + g);
    display.push_back(g);
    roles.push_back(Role::Module);
  }
  auto ring = make_ring(a->characteristic(), vars);
  std::vector<Polynomial> rels;
  for (auto& r : a->relations()) rels.push_back(lift_poly(r, ring));
  for (auto& r : m->relations()) {
    Polynomial p(ring);
    for (size_t k = 0; k < r.size(); ++k) p += lift_poly(r[k], ring) * Polynomial::variable(ring, n + k);
    rels.push_back(p);
  }
  Provenance prov;
  prov.kind = ProvKind::Sym;
  prov.base = a;
  if (m->rank() > 0) {
    prov.degree_zero = a;
    for (size_t i = 0; i < n + m->rank(); ++i) prov.grading.push_back({i < n ? 0u : 1u});
  }
  SymBundle s;
  s.base = a;
  s.module = m;
  s.alg = PresentedAlgebra::create(ring, rels, display, roles, prov,
                                   m->name().empty() ? std::string() : "S(" + m->name() + ")");
  const size_t r = m->rank();
  std::vector<Polynomial> q, z, neg;
  for (size_t i = 0; i < n; ++i) q.push_back(s.alg->gen(i));
  s.q = structure_map(a, s.alg, q, "q");
  for (size_t i = 0; i < n + r; ++i) {
    z.push_back(i < n ? a->gen(i) : a->zero());
    neg.push_back(i < n ? s.alg->gen(i) : -s.alg->gen(i));
  }
  s.z = structure_map(s.alg, a, z, "z");
  s.neg = structure_map(s.alg, s.alg, neg, "iota");
  s.pair = tensor_over_base(s.q, s.q);
  std::vector<Polynomial> sigma;
  for (size_t i = 0; i < n + r; ++i) {
    Polynomial v = s.pair.i0.images[i];
    if (i >= n) v += s.pair.i1.images[i];
    sigma.push_back(v);
  }
  s.sigma = structure_map(s.alg, s.pair.alg, sigma, "sigma");
  auto ts = tangent_algebra(s.alg);
  std::vector<Polynomial> lam;
  for (size_t i = 0; i < 2 * (n + r); ++i) {
    if (i < n) lam.push_back(s.alg->gen(i));
    else if (i >= 2 * n + r) lam.push_back(s.alg->gen(i - (n + r)));
    else lam.push_back(s.alg->zero());
  }
  s.lambda = structure_map(ts, s.alg, lam, "lambda");
  return s;
}

Polynomial sym_embed(const SymBundle& s, const Vec& v) {
  Polynomial p(s.alg->ring());
  for (size_t j = 0; j < v.size(); ++j)
    if (!v[j].is_zero()) p += lift_poly(v[j], s.alg->ring()) * s.alg->gen(s.module_gen(j));
  return p;
}

// ---------------- bundle context ----------------

struct BundleContext::Lazy {
  Once<AlgebraPtr> ta, t2a, ts, t2s, t_ta_s;
  Once<TensorProduct> ta_s, t2a_ts;
  Once<AlgebraMorphism> tq, ps, u, iso, tpa;
};

BundleContext::BundleContext(const ModulePtr& m)
    : a_(m->base()), m_(m), sym_(sym_algebra_bundle(m->base(), m)), lazy_(std::make_shared<Lazy>()) {}

const AlgebraPtr& BundleContext::ta() const {
  return lazy_->ta.get([&] { return tangent_algebra(a_); });
}
const AlgebraPtr& BundleContext::t2a() const {
  return lazy_->t2a.get([&] { return tangent_algebra(ta()); });
}
const AlgebraPtr& BundleContext::ts() const {
  return lazy_->ts.get([&] { return tangent_algebra(s()); });
}
const AlgebraPtr& BundleContext::t2s() const {
  return lazy_->t2s.get([&] { return tangent_algebra(ts()); });
}
const TensorProduct& BundleContext::ta_s() const {
  return lazy_->ta_s.get([&] { return tensor_over_base(tangent_projection(a_), sym_.q); });
}
const AlgebraMorphism& BundleContext::tq() const {
  return lazy_->tq.get([&] { return tangent_apply_functor(sym_.q); });
}
const AlgebraMorphism& BundleContext::ps() const {
  return lazy_->ps.get([&] { return tangent_projection(s()); });
}
const AlgebraMorphism& BundleContext::u() const {
  return lazy_->u.get([&] { return copair(ta_s(), tq(), ps(), "U"); });
}
const AlgebraPtr& BundleContext::t_ta_s() const {
  return lazy_->t_ta_s.get([&] { return tangent_algebra(ta_s().alg); });
}
const TensorProduct& BundleContext::t2a_ts() const {
  return lazy_->t2a_ts.get([&] {
    auto tpa = tangent_apply_functor(tangent_projection(a_));
    return tensor_over_base(tpa, tq());
  });
}

const AlgebraMorphism& BundleContext::iso() const {
  return lazy_->iso.get([&] {
    // T(W) for W = T(A) (x)_A S: W's generators go to the base layers of the
    // factors, their differentials to the outer differential of each factor.
    const TensorProduct& w = ta_s();
    const TensorProduct& target = t2a_ts();
    const size_t nw = w.alg->ngens();
    const size_t nl = w.alg->provenance().n_left;  // = generators of T(A)
    const size_t ns = s()->ngens();
    std::vector<int> right_of(nw, -1);
    const auto& rim = w.alg->provenance().right_image;
    for (size_t j = 0; j < rim.size(); ++j) {
      if (rim[j].size() != 1 || rim[j].leading_monomial().degree() != 1) continue;
      size_t k = 0;
      while (!rim[j].leading_monomial()[k]) ++k;
      if (k >= nl) right_of[k] = static_cast<int>(j);
    }
    std::vector<Polynomial> ims(2 * nw);
    for (size_t k = 0; k < nw; ++k) {
      if (k < nl) {
        ims[k] = target.i0.images[k];
        ims[nw + k] = target.i0.images[nl + k];
      } else {
        const size_t j = static_cast<size_t>(right_of[k]);
        ims[k] = target.i1.images[j];
        ims[nw + k] = target.i1.images[ns + j];
      }
    }
    return structure_map(t_ta_s(), target.alg, ims, "iso");
  });
}

AlgebraMorphism u_map(const BundleContext& ctx) { return ctx.u(); }

AlgebraMorphism bracketing(const BundleContext& ctx, const AlgebraMorphism& h) {
  if (h.dom != ctx.ts()) throw BoundaryMismatch("bracketing needs a map out of T(S)");
  const size_t n = ctx.base()->ngens();
  const size_t ns = ctx.s()->ngens();
  for (size_t i = 0; i < n; ++i) {
    if (!h.images[ns + i].is_zero()) {
      std::string g = ctx.ts()->display_names()[ns + i];
      std::string v = h.cod->render(h.images[ns + i]);
      throw BracketingConditionFailure("bracketing condition fails: h(" + g + ") = " + v, g, v);
    }
  }
  std::vector<Polynomial> ims, reps;
  for (size_t i = 0; i < ns; ++i) {
    const size_t src = i < n ? i : ns + i;
    ims.push_back(h.images[src]);
    reps.push_back(h.reps[src]);
  }
  AlgebraMorphism b = make_morphism(ctx.s(), h.cod, ims, false, "{" + h.name + "}");
  b.reps = reps;
  b.certified = h.certified;
  return b;
}

AlgebraMorphism combine_on_fiber(const AlgebraMorphism& f, const AlgebraMorphism& g,
                                 const std::vector<bool>& fiber, Sign sign) {
  if (f.dom != g.dom || f.cod != g.cod) throw BoundaryMismatch("combining maps with different boundaries");
  std::vector<Polynomial> ims, reps;
  for (size_t i = 0; i < f.images.size(); ++i) {
    if (!fiber[i]) {
      Polynomial diff = f.cod->reduce(f.images[i] - g.images[i]);
      if (!diff.is_zero()) {
        std::string name = f.dom->display_names()[i];
        throw BaseMismatch("maps disagree on base generator " + name, name, f.cod->render(diff));
      }
      ims.push_back(f.images[i]);
      reps.push_back(f.reps[i]);
    } else if (sign == Sign::Plus) {
      ims.push_back(f.images[i] + g.images[i]);
      reps.push_back(f.reps[i] + g.reps[i]);
    } else {
      ims.push_back(f.images[i] - g.images[i]);
      reps.push_back(f.reps[i] - g.reps[i]);
    }
  }
  AlgebraMorphism h = make_morphism(f.dom, f.cod, ims, false, f.name + (sign == Sign::Plus ? "+" : "-") + g.name);
  h.reps = reps;
  h.certified = f.certified && g.certified;
  return h;
}

AlgebraMorphism bundle_combine(const SymBundle& s, const AlgebraMorphism& f, const AlgebraMorphism& g,
                               Sign sign) {
  if (f.dom != s.alg) throw BoundaryMismatch("bundle_combine needs maps out of S_A(M)");
  std::vector<bool> fiber(s.alg->ngens(), false);
  for (size_t i = s.base->ngens(); i < fiber.size(); ++i) fiber[i] = true;
  return combine_on_fiber(f, g, fiber, sign);
}

}  // namespace kcx
