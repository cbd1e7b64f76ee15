#include "kcx/connections.hpp"

#include <map>
#include <tuple>

namespace kcx {

namespace {

Polynomial lift(const Polynomial& p, const std::vector<Polynomial>& gens, const RingPtr& ring) {
  return poly_substitute(p, gens, ring);
}

Vec reduce_coeffs(const AlgebraPtr& a, Vec v) {
  for (auto& p : v) p = a->reduce(p);
  return v;
}

// sum_k d(a_k) (x) g_k + a_k Gamma(g_k), unreduced.
Vec leibniz(const ModulePtr& om, const std::vector<Vec>& gamma, const Vec& e) {
  const size_t r = e.size();
  Vec out = om->zero();
  for (size_t k = 0; k < r; ++k) {
    if (e[k].is_zero()) continue;
    Vec unit(r, Polynomial(om->ring()));
    unit[k] = Polynomial::constant(om->ring(), 1);
    out = add(out, tensor_vec(om, differential(e[k]), unit));
    out = add(out, scale(gamma[k], e[k]));
  }
  return out;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return {};
  size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

// "EXPR * d(EXPR) @ GEN" terms separated by top-level + and -.
Vec parse_omega_m_sum(const std::string& text, const ModulePtr& om, const ModulePtr& m) {
  const RingPtr& ring = om->ring();
  Vec out = om->zero();
  std::vector<std::pair<bool, std::string>> terms;
  int depth = 0;
  std::string cur;
  bool neg = false;
  for (size_t i = 0; i < text.size(); ++i) {
    char ch = text[i];
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (depth == 0 && (ch == '+' || ch == '-')) {
      std::string prev = trim(cur);
      if (!prev.empty() && prev.back() != '*' && prev.back() != '/' && prev.back() != '^') {
        terms.emplace_back(neg, prev);
        cur.clear();
        neg = ch == '-';
        continue;
      }
      if (prev.empty()) {
        neg = neg != (ch == '-');
        continue;
      }
    }
    cur += ch;
  }
  if (!trim(cur).empty()) terms.emplace_back(neg, trim(cur));
  if (terms.empty()) return out;
  for (auto& [negative, term] : terms) {
    if (term == "0") continue;
    size_t at = term.rfind('@');
    if (at == std::string::npos) throw ArithError("term '" + term + "' lacks '@'");
    std::string gen = trim(term.substr(at + 1)), left = trim(term.substr(0, at));
    int k = m->index_of(gen);
    if (k < 0) throw ArithError("unknown module generator '" + gen + "'");
    // locate the top-level factor d(...)
    size_t dpos = std::string::npos;
    depth = 0;
    for (size_t i = 0; i + 1 < left.size(); ++i) {
      if (left[i] == '(') ++depth;
      if (left[i] == ')') --depth;
      if (depth == 0 && left[i] == 'd' && left[i + 1] == '(' &&
          (i == 0 || left[i - 1] == '*' || left[i - 1] == ' ')) {
        dpos = i;
      }
    }
    if (dpos == std::string::npos) throw ArithError("term '" + term + "' lacks a d(...) factor");
    size_t close = dpos + 1;
    depth = 0;
    for (; close < left.size(); ++close) {
      if (left[close] == '(') ++depth;
      if (left[close] == ')' && --depth == 0) break;
    }
    if (close >= left.size()) throw ArithError("unbalanced parentheses in '" + term + "'");
    std::string inner = left.substr(dpos + 2, close - dpos - 2);
    auto strip = [](std::string t) {
      t = trim(t);
      while (!t.empty() && t.back() == '*') t = trim(t.substr(0, t.size() - 1));
      while (!t.empty() && t.front() == '*') t = trim(t.substr(1));
      return t;
    };
    std::string before = strip(left.substr(0, dpos)), after = strip(left.substr(close + 1));
    std::string coeff = before.empty() ? after : after.empty() ? before : before + "*" + after;
    Polynomial c = coeff.empty() ? Polynomial::constant(ring, 1) : parse_poly(coeff, ring);
    if (negative) c = -c;
    Vec unit = m->zero();
    unit[static_cast<size_t>(k)] = Polynomial::constant(ring, 1);
    out = add(out, scale(tensor_vec(om, differential(parse_poly(inner, ring)), unit), c));
  }
  return out;
}

}  // namespace

Connection make_connection(const ModulePtr& m, std::vector<Vec> images, std::string name, ModulePtr omega) {
  const AlgebraPtr& a = m->base();
  if (images.size() != m->rank())
    throw ArithError("a connection needs one image per module generator");
  Connection c;
  c.module = m;
  c.omega = omega ? omega : kahler_module(a);
  c.omega_m = tensor_modules(c.omega, m);
  c.name = std::move(name);
  for (auto& v : images) {
    if (v.size() != c.omega_m->rank()) throw ArithError("connection image has the wrong rank");
    c.raw.push_back(reduce_coeffs(a, v));
    c.gamma.push_back(c.omega_m->normal_form(v));
  }
  for (size_t i = 0; i < m->relations().size(); ++i) {
    const Vec& rel = m->relations()[i];
    Vec residue = leibniz(c.omega_m, images, rel);
    Vec nf = c.omega_m->normal_form(residue);
    bool zero = true;
    for (auto& p : nf) zero = zero && p.is_zero();
    if (!zero)
      throw WellDefinednessFailure("connection is not well-defined on relation " + m->render(rel),
                                   m->render(rel), c.omega_m->render(residue), i);
    c.certificate.push_back(nf);
  }
  return c;
}

Connection make_connection(const ModulePtr& m, const std::vector<std::string>& images, std::string name,
                           ModulePtr omega) {
  if (!omega) omega = kahler_module(m->base());
  auto om = tensor_modules(omega, m);
  std::vector<Vec> vs;
  for (auto& s : images) vs.push_back(parse_omega_m_sum(s, om, m));
  return make_connection(m, std::move(vs), std::move(name), omega);
}

Vec apply_connection_formal(const Connection& c, const Vec& e) { return leibniz(c.omega_m, c.gamma, e); }

Vec apply_connection(const Connection& c, const Vec& e) {
  return c.omega_m->normal_form(apply_connection_formal(c, e));
}

bool connection_equal(const Connection& a, const Connection& b) {
  if (a.module->base() != b.module->base() || a.module->gens() != b.module->gens()) return false;
  if (a.module != b.module && a.module->relations() != b.module->relations()) return false;
  return a.gamma == b.gamma;
}

std::string render_gamma(const Connection& c, size_t j) { return c.omega_m->render(c.gamma[j]); }

// ---------------- horizontal and vertical forms ----------------

Polynomial omega_m_to_poly(const BundleContext& ctx, const Connection& c, const Vec& v) {
  const TensorProduct& w = ctx.ta_s();
  const size_t n = ctx.base()->ngens(), r = c.module->rank();
  std::vector<Polynomial> base(w.i0.images.begin(), w.i0.images.begin() + static_cast<long>(n));
  Polynomial p(w.alg->ring());
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < r; ++k) {
      const Polynomial& coef = v[i * r + k];
      if (coef.is_zero()) continue;
      p += lift(coef, base, w.alg->ring()) * w.i0.images[n + i] * w.i1.images[n + k];
    }
  return p;
}

Vec poly_to_omega_m(const BundleContext& ctx, const ModulePtr& omega_m, const Polynomial& p,
                    const std::string& generator) {
  const TensorProduct& w = ctx.ta_s();
  const size_t n = ctx.base()->ngens(), r = ctx.module()->rank();
  const size_t nw = w.alg->ngens();
  std::vector<int> d_of(nw, -1), m_of(nw, -1);
  auto single_var = [](const Polynomial& q) {
    size_t k = 0;
    while (!q.leading_monomial()[k]) ++k;
    return k;
  };
  for (size_t i = 0; i < n; ++i) d_of[single_var(w.i0.images[n + i])] = static_cast<int>(i);
  for (size_t k = 0; k < r; ++k) m_of[single_var(w.i1.images[n + k])] = static_cast<int>(k);
  Vec out = omega_m->zero();
  for (auto& [mono, coef] : p.terms()) {
    int di = -1, mk = -1;
    bool ok = true;
    std::vector<uint32_t> be(n, 0);
    for (size_t v = 0; v < nw && ok; ++v) {
      if (!mono[v]) continue;
      if (v < n) be[v] = mono[v];
      else if (d_of[v] >= 0 && mono[v] == 1 && di < 0) di = d_of[v];
      else if (m_of[v] >= 0 && mono[v] == 1 && mk < 0) mk = m_of[v];
      else ok = false;
    }
    if (!ok || di < 0 || mk < 0) {
      std::string t = w.alg->render(Polynomial::term(w.alg->ring(), mono, coef));
      throw MembershipFailure("H(" + generator + ") has the term " + t + " outside Omega (x) M",
                              generator, t);
    }
    out[static_cast<size_t>(di) * r + static_cast<size_t>(mk)].add_term(Monomial(be), coef);
  }
  return out;
}

AlgebraMorphism to_horizontal(const BundleContext& ctx, const Connection& c) {
  if (ctx.module() != c.module) throw BoundaryMismatch("bundle context built for another module");
  const TensorProduct& w = ctx.ta_s();
  const size_t n = ctx.base()->ngens(), r = c.module->rank();
  std::vector<Polynomial> ims;
  for (size_t i = 0; i < n; ++i) ims.push_back(w.i0.images[i]);
  for (size_t k = 0; k < r; ++k) ims.push_back(w.i1.images[n + k]);
  for (size_t i = 0; i < n; ++i) ims.push_back(w.i0.images[n + i]);
  for (size_t k = 0; k < r; ++k) ims.push_back(omega_m_to_poly(ctx, c, c.gamma[k]));
  return make_morphism(ctx.ts(), w.alg, std::move(ims), true, "H");
}

AlgebraMorphism to_vertical(const BundleContext& ctx, const Connection& c) {
  if (ctx.module() != c.module) throw BoundaryMismatch("bundle context built for another module");
  const size_t n = ctx.base()->ngens(), r = c.module->rank(), ns = n + r;
  const auto& ts = ctx.ts();
  const auto& u = ctx.u();
  std::vector<Polynomial> reps;
  for (size_t i = 0; i < n; ++i) reps.push_back(ts->gen(i));
  for (size_t k = 0; k < r; ++k)
    reps.push_back(ts->gen(ns + n + k) - u.apply_formal(omega_m_to_poly(ctx, c, c.gamma[k])));
  AlgebraMorphism k = make_morphism(ctx.s(), ts, reps, true, "K");
  k.reps = reps;
  return k;
}

// ---------------- axioms ----------------

bool AxiomReport::all_pass() const {
  for (auto& e : entries)
    if (!e.pass) return false;
  return true;
}

const AxiomEntry* AxiomReport::find(const std::string& id) const {
  for (auto& e : entries)
    if (e.id == id) return &e;
  return nullptr;
}

namespace {

AxiomEntry compare(const std::string& id, const AlgebraMorphism& f, const AlgebraMorphism& g) {
  AxiomEntry e;
  e.id = id;
  if (auto i = first_difference(f, g)) {
    e.pass = false;
    e.witness = f.dom->display_names()[*i];
    e.lhs = f.cod->render(f.images[*i]);
    e.rhs = g.cod->render(g.images[*i]);
    e.residue = f.cod->render(f.images[*i] - g.images[*i]);
  }
  return e;
}

AlgebraMorphism operator*(const AlgebraMorphism& g, const AlgebraMorphism& f) {
  return compose_morphisms(g, f);
}

// T(S) generators [x, m, d(x), d(m)]: fiber of T(q) is {m, d(m)}, fiber of p_S is {d(x), d(m)}.
std::vector<bool> fiber_tq(const BundleContext& ctx) {
  const size_t n = ctx.base()->ngens(), ns = ctx.s()->ngens();
  std::vector<bool> f(2 * ns, false);
  for (size_t i = n; i < ns; ++i) f[i] = f[ns + i] = true;
  return f;
}

std::vector<bool> fiber_ps(const BundleContext& ctx) {
  const size_t ns = ctx.s()->ngens();
  std::vector<bool> f(2 * ns, false);
  for (size_t i = ns; i < 2 * ns; ++i) f[i] = true;
  return f;
}

}  // namespace

AxiomReport verify_horizontal_axioms(const BundleContext& ctx, const AlgebraMorphism& h) {
  AxiomReport rep;
  const TensorProduct& w = ctx.ta_s();
  const auto& s = ctx.s();
  rep.entries.push_back(compare("H.1", h * ctx.tq(), w.i0));
  rep.entries.push_back(compare("H.2", h * ctx.ps(), w.i1));
  const AlgebraMorphism th = tangent_apply_functor(h);
  const TensorProduct& t2 = ctx.t2a_ts();
  const AlgebraMorphism& iso = ctx.iso();
  const AlgebraMorphism lift_s = tangent_lift(s);
  auto rhs3 = copair(t2, w.i0 * tangent_lift(ctx.base()), w.i1 * tangent_zero(s)) * iso * th;
  rep.entries.push_back(compare("H.3", h * lift_s, rhs3));
  const AlgebraMorphism tl = tangent_apply_functor(ctx.sym().lambda);
  auto rhs4 = copair(t2, w.i0 * tangent_zero(ctx.ta()), w.i1 * ctx.sym().lambda) * iso * th;
  rep.entries.push_back(compare("H.4", h * (tl * tangent_flip(s)), rhs4));
  rep.entries.push_back(compare("H.U", h * ctx.u(), identity_morphism(w.alg)));
  return rep;
}

AxiomReport verify_vertical_axioms(const BundleContext& ctx, const AlgebraMorphism& k) {
  AxiomReport rep;
  const auto& s = ctx.s();
  const auto& lam = ctx.sym().lambda;
  rep.entries.push_back(compare("K.1", lam * k, identity_morphism(s)));
  rep.entries.push_back(compare("K.2", k * ctx.sym().q, ctx.ps() * ctx.sym().q));
  const AlgebraMorphism tk = tangent_apply_functor(k);
  const AlgebraMorphism kl = k * lam;
  rep.entries.push_back(compare("K.3", kl, tangent_lift(s) * tk));
  rep.entries.push_back(compare("K.4", kl, tangent_apply_functor(lam) * (tangent_flip(s) * tk)));
  return rep;
}

AxiomReport verify_connection_axioms(const BundleContext& ctx, const AlgebraMorphism& k,
                                     const AlgebraMorphism& h) {
  AxiomReport rep = verify_horizontal_axioms(ctx, h);
  for (auto& e : verify_vertical_axioms(ctx, k).entries) rep.entries.push_back(e);
  const auto& sym = ctx.sym();
  rep.entries.push_back(compare("C.1", h * k, ctx.ta_s().i1 * (sym.q * sym.z)));
  AxiomEntry c2;
  c2.id = "C.2";
  try {
    auto inner = combine_on_fiber(k * sym.lambda, ctx.ps() * tangent_zero(ctx.s()), fiber_tq(ctx), Sign::Plus);
    auto total = combine_on_fiber(inner, ctx.u() * h, fiber_ps(ctx), Sign::Plus);
    c2 = compare("C.2", total, identity_morphism(ctx.ts()));
  } catch (const BaseMismatch& e) {
    c2.pass = false;
    c2.witness = e.generator;
    c2.lhs = e.difference;
    c2.rhs = "0";
    c2.residue = e.difference;
  }
  rep.entries.push_back(c2);
  return rep;
}

Connection from_horizontal(const BundleContext& ctx, const AlgebraMorphism& h, ModulePtr omega) {
  AxiomReport rep = verify_horizontal_axioms(ctx, h);
  if (!rep.all_pass()) {
    for (auto& e : rep.entries)
      if (!e.pass)
        throw AxiomFailure("horizontal map fails " + e.id + " at " + e.witness, rep);
  }
  const ModulePtr& m = ctx.module();
  if (!omega) omega = kahler_module(ctx.base());
  auto om = tensor_modules(omega, m);
  const size_t n = ctx.base()->ngens(), ns = ctx.s()->ngens();
  std::vector<Vec> gamma;
  for (size_t k = 0; k < m->rank(); ++k) {
    const std::string g = ctx.ts()->display_names()[ns + n + k];
    gamma.push_back(poly_to_omega_m(ctx, om, h.images[ns + n + k], g));
  }
  return make_connection(m, std::move(gamma), "nabla_H", omega);
}

AlgebraMorphism vertical_from_horizontal(const BundleContext& ctx, const AlgebraMorphism& h) {
  AlgebraMorphism flat =
      combine_on_fiber(identity_morphism(ctx.ts()), ctx.u() * h, fiber_ps(ctx), Sign::Minus);
  flat.name = "Kflat";
  return bracketing(ctx, flat);
}

// ---------------- solvers ----------------

namespace {

// Collects "normal form of sum_u x_u delta_u + constant = 0" coefficientwise.
class LinearSystem {
 public:
  LinearSystem(size_t nunknowns, uint32_t p) : n_(nunknowns), p_(p) {}
  // residual(x) must be affine in x; it is sampled at 0 and the unit vectors.
  template <class F>
  void add_affine(const ModulePtr& target, F residual) {
    const size_t width = target->rank();
    std::vector<Scalar> x(n_, Scalar(0, p_));
    const Vec raw0 = residual(x);
    Vec r0 = target->normal_form(raw0);
    for (size_t t = 0; t < width; ++t)
      for (auto& [m, c] : r0[t].terms()) eq(tag_, t, m).rhs -= c;
    for (size_t u = 0; u < n_; ++u) {
      x[u] = Scalar(1, p_);
      Vec ru = target->normal_form(sub(residual(x), raw0));
      x[u] = Scalar(0, p_);
      for (size_t t = 0; t < width; ++t)
        for (auto& [m, c] : ru[t].terms()) {
          auto& e = eq(tag_, t, m);
          auto it = e.coeffs.find(u);
          if (it == e.coeffs.end()) e.coeffs.emplace(u, c);
          else it->second += c;
        }
    }
    ++tag_;
  }
  std::vector<LinearEquation> equations() const {
    std::vector<LinearEquation> out;
    for (auto& [k, e] : eqs_) out.push_back(e);
    return out;
  }

 private:
  LinearEquation& eq(size_t tag, size_t slot, const Monomial& m) {
    auto key = std::make_tuple(tag, slot, m.exponents());
    auto it = eqs_.find(key);
    if (it == eqs_.end()) {
      LinearEquation e;
      e.rhs = Scalar(0, p_);
      it = eqs_.emplace(key, e).first;
    }
    return it->second;
  }
  size_t n_;
  uint32_t p_;
  size_t tag_ = 0;
  std::map<std::tuple<size_t, size_t, std::vector<uint32_t>>, LinearEquation> eqs_;
};

// Christoffel unknowns for `rank` images in a module of width `width` over `monos`.
struct UnknownGamma {
  size_t offset = 0, rank = 0, width = 0;
  std::vector<Monomial> monos;
  RingPtr ring;
  size_t count() const { return rank * width * monos.size(); }
  size_t index(size_t j, size_t t, size_t mu) const { return offset + (j * width + t) * monos.size() + mu; }
  std::vector<Vec> gamma(const std::vector<Scalar>& x) const {
    std::vector<Vec> out(rank, Vec(width, Polynomial(ring)));
    for (size_t j = 0; j < rank; ++j)
      for (size_t t = 0; t < width; ++t)
        for (size_t mu = 0; mu < monos.size(); ++mu) {
          const Scalar& c = x[index(j, t, mu)];
          if (!c.is_zero()) out[j][t].add_term(monos[mu], c);
        }
    return out;
  }
  void names(std::vector<std::string>& out, const std::string& prefix, const ModulePtr& m,
             const ModulePtr& om, const AlgebraPtr& a) const {
    for (size_t j = 0; j < rank; ++j)
      for (size_t t = 0; t < width; ++t)
        for (size_t mu = 0; mu < monos.size(); ++mu)
          out.push_back(prefix + "G(" + m->gens()[j] + ")[" + om->gens()[t] + "][" +
                        render_monomial(monos[mu], a->display_names()) + "]");
  }
};

}  // namespace

std::vector<Vec> ConnectionSpace::gamma_of(const std::vector<Scalar>& x) const {
  UnknownGamma u{0, module->rank(), omega_m->rank(), monomials, module->ring()};
  return u.gamma(x);
}

std::optional<std::vector<Scalar>> ConnectionSpace::coordinates(const Connection& c) const {
  UnknownGamma u{0, module->rank(), omega_m->rank(), monomials, module->ring()};
  std::vector<Scalar> x(u.count(), Scalar(0, module->ring()->p));
  for (size_t j = 0; j < u.rank; ++j)
    for (size_t t = 0; t < u.width; ++t)
      for (auto& [m, coef] : c.raw[j][t].terms()) {
        size_t mu = 0;
        while (mu < monomials.size() && !(monomials[mu] == m)) ++mu;
        if (mu == monomials.size()) return std::nullopt;
        x[u.index(j, t, mu)] = coef;
      }
  return x;
}

bool ConnectionSpace::contains(const Connection& c) const {
  if (space.empty) return false;
  auto x = coordinates(c);
  return x && space.contains(*x);
}

ConnectionSpace solve_connection_space(const ModulePtr& m, unsigned degree_bound) {
  ConnectionSpace cs;
  const AlgebraPtr& a = m->base();
  cs.module = m;
  cs.omega = kahler_module(a);
  cs.omega_m = tensor_modules(cs.omega, m);
  cs.monomials = standard_monomials(a, degree_bound);
  UnknownGamma u{0, m->rank(), cs.omega_m->rank(), cs.monomials, a->ring()};
  std::vector<std::string> names;
  u.names(names, "", m, cs.omega_m, a);
  LinearSystem sys(u.count(), a->characteristic());
  for (auto& rel : m->relations())
    sys.add_affine(cs.omega_m, [&](const std::vector<Scalar>& x) { return leibniz(cs.omega_m, u.gamma(x), rel); });
  cs.space = affine_linear_solve(sys.equations(), names, a->characteristic());
  return cs;
}

// ---------------- constructions ----------------

Connection free_canonical_connection(const AlgebraPtr& a, size_t n) {
  auto m = free_module(a, n);
  auto omega = kahler_module(a);
  std::vector<Vec> zero(n, Vec(omega->rank() * n, a->zero()));
  return make_connection(m, zero, "canonical", omega);
}

Connection pullback_connection(const Connection& c, const AlgebraMorphism& f) {
  if (f.dom != c.module->base()) throw BoundaryMismatch("pullback along a map from another algebra");
  auto mb = base_change(c.module, f);
  auto omb = kahler_module(f.cod);
  auto t = tensor_modules(omb, mb);
  const size_t n = f.dom->ngens(), r = c.module->rank();
  std::vector<Vec> ims;
  for (size_t j = 0; j < r; ++j) {
    Vec v = t->zero();
    for (size_t i = 0; i < n; ++i)
      for (size_t k = 0; k < r; ++k) {
        const Polynomial& coef = c.gamma[j][i * r + k];
        if (coef.is_zero()) continue;
        v = add(v, scale(tensor_vec(t, differential(f.images[i]), mb->unit(k)), f.apply(coef)));
      }
    ims.push_back(v);
  }
  return make_connection(mb, std::move(ims), c.name.empty() ? "pullback" : c.name + "^*", omb);
}

Connection retract_connection(const Connection& c, const ModuleMap& s, const ModuleMap& r) {
  if (s.cod != c.module || r.dom != c.module || s.dom != r.cod)
    throw BoundaryMismatch("section and retraction do not match the connection's module");
  const ModulePtr& mp = s.dom;
  for (size_t j = 0; j < mp->rank(); ++j)
    if (!mp->is_zero(sub(r.apply(s.images[j]), mp->unit(j))))
      throw SectionRetractionFailure("r after s is not the identity on " + mp->gens()[j]);
  auto t = tensor_modules(c.omega, mp);
  const size_t n = c.omega->rank(), rm = c.module->rank();
  std::vector<Vec> ims;
  for (size_t j = 0; j < mp->rank(); ++j) {
    Vec full = apply_connection(c, s.images[j]);
    Vec v = t->zero();
    for (size_t i = 0; i < n; ++i)
      for (size_t l = 0; l < rm; ++l) {
        const Polynomial& coef = full[i * rm + l];
        if (coef.is_zero()) continue;
        v = add(v, scale(tensor_vec(t, c.omega->unit(i), r.images[l]), coef));
      }
    ims.push_back(v);
  }
  return make_connection(mp, std::move(ims), c.name.empty() ? "retract" : c.name + "'", c.omega);
}

// ---------------- gluing ----------------

GlueResult glued_connection_check(const GlueData& g, unsigned window) {
  const AlgebraPtr& l1 = g.transition.dom;
  const AlgebraPtr& l2 = g.transition.cod;
  if (g.inverse.dom != l2 || g.inverse.cod != l1) throw BoundaryMismatch("inverse transition has the wrong boundary");
  auto is_localization = [](const AlgebraPtr& l, const AlgebraPtr& base, const std::string& v) {
    return l->provenance().kind == ProvKind::Localization && l->provenance().base == base &&
           l->index_of(v + "_inv") == static_cast<int>(base->ngens());
  };
  if (!is_localization(l1, g.chart1, g.var1) || !is_localization(l2, g.chart2, g.var2))
    throw BoundaryMismatch("transition must run between the localized charts");
  if (!morphism_equal(compose_morphisms(g.inverse, g.transition), identity_morphism(l1)) ||
      !morphism_equal(compose_morphisms(g.transition, g.inverse), identity_morphism(l2)))
    throw BoundaryMismatch("transition is not invertible");
  const uint32_t p = l2->characteristic();
  const size_t n1 = g.chart1->ngens(), n2 = g.chart2->ngens();
  auto om1 = g.conn1 ? g.conn1->omega : kahler_module(g.chart1);
  auto om2 = g.conn2 ? g.conn2->omega : kahler_module(g.chart2);
  auto t1 = tensor_modules(om1, om1), t2 = tensor_modules(om2, om2);
  auto oml = kahler_module(l2);
  auto tl = tensor_modules(oml, oml);

  UnknownGamma u1{0, g.conn1 ? 0 : n1, t1->rank(), {}, g.chart1->ring()};
  if (!g.conn1) u1.monos = standard_monomials(g.chart1, window);
  UnknownGamma u2{u1.count(), g.conn2 ? 0 : n2, t2->rank(), {}, g.chart2->ring()};
  if (!g.conn2) u2.monos = standard_monomials(g.chart2, window);
  const size_t nunk = u1.count() + u2.count();
  auto gamma1 = [&](const std::vector<Scalar>& x) { return g.conn1 ? g.conn1->gamma : u1.gamma(x); };
  auto gamma2 = [&](const std::vector<Scalar>& x) {
    if (g.conn2) return g.conn2->gamma;
    std::vector<Scalar> y(x.begin() + static_cast<long>(u2.offset), x.end());
    UnknownGamma v = u2;
    v.offset = 0;
    return v.gamma(y);
  };

  // chart2 connection extended to Omega(chart2[var2^-1]); d(u_inv) = -u_inv^2 d(u).
  std::vector<Polynomial> emb2;
  for (size_t i = 0; i < n2; ++i) emb2.push_back(l2->gen(i));
  std::vector<Polynomial> emb1;
  for (size_t i = 0; i < n1; ++i) emb1.push_back(g.transition.images[i]);
  const size_t uidx = static_cast<size_t>(g.chart2->index_of(g.var2));
  auto extended = [&](const std::vector<Scalar>& x) {
    auto gm = gamma2(x);
    std::vector<Vec> out;
    for (size_t i = 0; i < n2; ++i) {
      Vec v = tl->zero();
      for (size_t a = 0; a < n2; ++a)
        for (size_t b = 0; b < n2; ++b)
          v[a * (n2 + 1) + b] = lift(gm[i][a * n2 + b], emb2, l2->ring());
      out.push_back(v);
    }
    const Polynomial uinv = l2->gen(n2);
    Vec e = oml->zero();
    e[uidx] = -(uinv * uinv);
    out.push_back(leibniz(tl, out, e));
    return out;
  };
  auto residual = [&](size_t i, const std::vector<Scalar>& x) {
    auto gm = gamma1(x);
    Vec lhs = tl->zero();
    for (size_t a = 0; a < n1; ++a)
      for (size_t b = 0; b < n1; ++b) {
        const Polynomial& coef = gm[i][a * n1 + b];
        if (coef.is_zero()) continue;
        Polynomial c = l2->reduce(lift(coef, emb1, l2->ring()));
        lhs = add(lhs, scale(tensor_vec(tl, differential(g.transition.images[a]),
                                        differential(g.transition.images[b])), c));
      }
    Vec rhs = leibniz(tl, extended(x), differential(g.transition.images[i]));
    return std::make_pair(lhs, rhs);
  };

  GlueResult res;
  if (nunk == 0 && g.conn1 && g.conn2) {
    std::vector<Scalar> none;
    for (size_t i = 0; i < n1; ++i) {
      auto [lhs, rhs] = residual(i, none);
      AxiomEntry e;
      e.id = "glue";
      e.witness = om1->gens()[i];
      if (!tl->is_zero(sub(lhs, rhs))) {
        e.pass = false;
        e.lhs = tl->render(tl->normal_form(lhs));
        e.rhs = tl->render(tl->normal_form(rhs));
        e.residue = tl->render(tl->normal_form(sub(lhs, rhs)));
      }
      res.report.entries.push_back(e);
    }
    return res;
  }
  res.solved = true;
  std::vector<std::string> names;
  u1.names(names, "chart1.", om1, t1, g.chart1);
  u2.names(names, "chart2.", om2, t2, g.chart2);
  LinearSystem sys(nunk, p);
  for (size_t i = 0; i < n1; ++i)
    sys.add_affine(tl, [&](const std::vector<Scalar>& x) {
      auto [lhs, rhs] = residual(i, x);
      return sub(lhs, rhs);
    });
  // each chart's own well-definedness
  for (auto& rel : om1->relations())
    if (!g.conn1) sys.add_affine(t1, [&](const std::vector<Scalar>& x) { return leibniz(t1, gamma1(x), rel); });
  for (auto& rel : om2->relations())
    if (!g.conn2) sys.add_affine(t2, [&](const std::vector<Scalar>& x) { return leibniz(t2, gamma2(x), rel); });
  res.space = affine_linear_solve(sys.equations(), names, p);
  return res;
}

}  // namespace kcx
