#include "kcx/algebra.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace kcx {
using Vec = std::vector<Polynomial>;
}

namespace kcx {

AlgebraPtr PresentedAlgebra::create(RingPtr ring, std::vector<Polynomial> relations,
                                    std::vector<std::string> display, std::vector<Role> roles,
                                    Provenance prov, std::string name) {
  std::shared_ptr<PresentedAlgebra> a(new PresentedAlgebra());
  if (display.empty()) display = ring->vars;
  if (roles.empty()) roles.assign(ring->nvars(), Role::Base);
  if (display.size() != ring->nvars() || roles.size() != ring->nvars())
    throw ArithError("role/display table must cover every generator exactly once");
  std::set<std::string> seen(ring->vars.begin(), ring->vars.end());
  if (seen.size() != ring->nvars()) throw ArithError("duplicate generator name");
  a->ring_ = std::move(ring);
  for (auto& r : relations)
    if (!r.is_zero()) a->relations_.push_back(r);
  a->display_ = std::move(display);
  a->roles_ = std::move(roles);
  a->prov_ = std::move(prov);
  a->name_ = std::move(name);
  if (!a->prov_.grading.empty()) {
    const auto& g = a->prov_.grading;
    const size_t n0 = a->prov_.degree_zero ? a->prov_.degree_zero->ngens() : SIZE_MAX;
    if (g.size() != a->ngens() || n0 > a->ngens())
      throw ArithError("grading must cover every generator");
    for (size_t i = 0; i < g.size(); ++i) {
      bool zero = true;
      for (auto d : g[i]) zero = zero && d == 0;
      if (zero != (i < n0)) throw ArithError("only degree-zero algebra generators may have degree 0");
    }
    for (auto& r : a->relations_) {
      auto d0 = a->degree_of(r.leading_monomial());
      for (auto& [m, c] : r.terms())
        if (a->degree_of(m) != d0) throw ArithError("relation is not homogeneous for the grading");
    }
  }
  return a;
}

struct PresentedAlgebra::Component {
  std::vector<Monomial> fiber;
  std::map<Monomial, size_t, MonoGreater> index;
  std::optional<ModuleBasis> basis;
};

std::vector<uint32_t> PresentedAlgebra::degree_of(const Monomial& m) const {
  std::vector<uint32_t> d(prov_.grading.front().size(), 0);
  for (size_t i = prov_.degree_zero->ngens(); i < m.nvars(); ++i)
    if (m[i])
      for (size_t k = 0; k < d.size(); ++k) d[k] += m[i] * prov_.grading[i][k];
  return d;
}

namespace {

// Monomials in the variables [n0, n) of exact multidegree `deg`.
void fiber_monomials(const std::vector<std::vector<uint32_t>>& grading, size_t n0, size_t i,
                     std::vector<uint32_t>& left, std::vector<uint32_t>& exps,
                     std::vector<Monomial>& out) {
  if (i == grading.size()) {
    for (auto v : left)
      if (v) return;
    out.emplace_back(exps);
    return;
  }
  const auto& g = grading[i];
  uint32_t k = 0;
  while (true) {
    fiber_monomials(grading, n0, i + 1, left, exps, out);
    bool fits = true;
    for (size_t c = 0; c < g.size(); ++c) fits = fits && left[c] >= g[c];
    if (!fits) break;
    for (size_t c = 0; c < g.size(); ++c) left[c] -= g[c];
    exps[i] = ++k;
  }
  for (size_t c = 0; c < g.size(); ++c) left[c] += k * g[c];
  exps[i] = 0;
}

}  // namespace

const PresentedAlgebra::Component& PresentedAlgebra::component(const std::vector<uint32_t>& deg) const {
  std::lock_guard<std::mutex> lock(comp_mu_);
  auto it = components_.find(deg);
  if (it != components_.end()) return *it->second;
  const AlgebraPtr& base = prov_.degree_zero;
  const size_t n0 = base->ngens(), n = ngens();
  auto comp = std::make_shared<Component>();
  {
    std::vector<uint32_t> left = deg, exps(n, 0);
    fiber_monomials(prov_.grading, n0, n0, left, exps, comp->fiber);
  }
  for (size_t k = 0; k < comp->fiber.size(); ++k) comp->index.emplace(comp->fiber[k], k);
  const size_t rank = comp->fiber.size();
  const RingPtr& br = base->ring();
  auto split = [&](const Polynomial& p) {
    Vec v(rank, Polynomial(br));
    for (auto& [m, c] : p.terms()) {
      std::vector<uint32_t> be(n0), fe(n, 0);
      for (size_t i = 0; i < n; ++i) (i < n0 ? be[i] : fe[i]) = m[i];
      v[comp->index.at(Monomial(fe))].add_term(Monomial(be), c);
    }
    return v;
  };
  std::vector<Vec> rows;
  for (auto& r : relations_) {
    auto dr = degree_of(r.leading_monomial());
    bool nonzero = false, fits = true;
    std::vector<uint32_t> rest(deg.size());
    for (size_t k = 0; k < deg.size(); ++k) {
      nonzero = nonzero || dr[k];
      fits = fits && dr[k] <= deg[k];
      if (fits) rest[k] = deg[k] - dr[k];
    }
    if (!nonzero || !fits) continue;
    std::vector<Monomial> mult;
    std::vector<uint32_t> exps(n, 0);
    fiber_monomials(prov_.grading, n0, n0, rest, exps, mult);
    for (auto& mu : mult) rows.push_back(split(r.times_term(mu, Scalar(1, ring_->p))));
  }
  if (!base->relations().empty())
    for (size_t k = 0; k < rank; ++k)
      for (auto& g : base->basis().basis()) {
        Vec v(rank, Polynomial(br));
        v[k] = g;
        rows.push_back(v);
      }
  comp->basis.emplace(module_groebner_basis(rows, rank, br));
  return *components_.emplace(deg, comp).first->second;
}

Polynomial PresentedAlgebra::graded_reduce(const Polynomial& p) const {
  const size_t n0 = prov_.degree_zero->ngens(), n = ngens();
  std::map<std::vector<uint32_t>, std::vector<std::pair<Monomial, Scalar>>> parts;
  for (auto& [m, c] : p.terms()) parts[degree_of(m)].emplace_back(m, c);
  Polynomial out(ring_);
  const RingPtr& br = prov_.degree_zero->ring();
  for (auto& [deg, terms] : parts) {
    const Component& comp = component(deg);
    Vec v(comp.fiber.size(), Polynomial(br));
    for (auto& [m, c] : terms) {
      std::vector<uint32_t> be(n0), fe(n, 0);
      for (size_t i = 0; i < n; ++i) (i < n0 ? be[i] : fe[i]) = m[i];
      v[comp.index.at(Monomial(fe))].add_term(Monomial(be), c);
    }
    Vec nf = module_normal_form(v, *comp.basis);
    for (size_t k = 0; k < nf.size(); ++k)
      for (auto& [m, c] : nf[k].terms()) {
        std::vector<uint32_t> e = comp.fiber[k].exponents();
        for (size_t i = 0; i < n0; ++i) e[i] = m[i];
        out.add_term(Monomial(e), c);
      }
  }
  return out;
}

const IdealBasis& PresentedAlgebra::basis() const {
  std::call_once(gb_once_, [this] { gb_.emplace(groebner_basis(relations_, ring_)); });
  return *gb_;
}

Polynomial PresentedAlgebra::reduce(const Polynomial& p) const {
  if (relations_.empty()) return p;
  if (!prov_.grading.empty()) return graded_reduce(p);
  return normal_form(p, basis());
}

Polynomial PresentedAlgebra::gen(const std::string& internal_name) const {
  int i = ring_->index_of(internal_name);
  if (i < 0) throw ArithError("no generator named '" + internal_name + "'");
  return gen(static_cast<size_t>(i));
}

Polynomial PresentedAlgebra::parse(const std::string& expr) const {
  return reduce(parse_poly(expr, ring_));
}

int PresentedAlgebra::index_of_display(const std::string& display) const {
  for (size_t i = 0; i < display_.size(); ++i)
    if (display_[i] == display) return static_cast<int>(i);
  return -1;
}

std::string PresentedAlgebra::render(const Polynomial& p) const {
  if (prov_.kind != ProvKind::Tensor) return p.to_string(display_);
  if (p.is_zero()) return "0";
  // Tensor elements print as coefficient*left@right per term.
  std::string out;
  bool first = true;
  const size_t n = ngens();
  for (auto& [m, c] : p.terms()) {
    Monomial l(n), r(n);
    for (size_t i = 0; i < n; ++i) (i < prov_.n_left ? l : r).set(i, m[i]);
    std::string ls = render_monomial(l, display_);
    std::string rs = render_monomial(r, display_);
    bool neg = c.is_negative();
    mpq_class mag = neg ? mpq_class(-c.value()) : c.value();
    out += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
    first = false;
    if (mag != 1) out += mag.get_str() + (ls.empty() ? "" : "*");
    if (!ls.empty()) out += ls;
    if (ls.empty() && mag == 1) out += "1";
    out += "@" + (rs.empty() ? std::string("1") : rs);
  }
  return out;
}

AlgebraPtr make_algebra(uint32_t p, const std::vector<std::string>& vars,
                        const std::vector<std::string>& relations, const std::string& name) {
  auto ring = make_ring(p, vars);
  std::vector<Polynomial> rels;
  for (auto& r : relations) rels.push_back(parse_poly(r, ring));
  return PresentedAlgebra::create(ring, rels, {}, {}, {}, name);
}

AlgebraElement make_element(const AlgebraPtr& a, const Polynomial& p) {
  return AlgebraElement{a, a->reduce(p)};
}

bool element_equal(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.owner != b.owner) throw BoundaryMismatch("elements of different algebras");
  return a.owner->reduce(a.value - b.value).is_zero();
}

// ---------------- morphisms ----------------

Polynomial AlgebraMorphism::apply(const Polynomial& p) const {
  return cod->reduce(poly_substitute(p, images, cod->ring()));
}

Polynomial AlgebraMorphism::apply_formal(const Polynomial& p) const {
  return poly_substitute(p, reps, cod->ring());
}

AlgebraElement AlgebraMorphism::apply(const AlgebraElement& e) const {
  if (e.owner != dom) throw BoundaryMismatch("element is not in the domain");
  return AlgebraElement{cod, apply(e.value)};
}

void certify(AlgebraMorphism& f) {
  f.certificate.clear();
  for (size_t k = 0; k < f.dom->relations().size(); ++k) {
    const Polynomial& rel = f.dom->relations()[k];
    Polynomial res = f.apply(rel);
    f.certificate.push_back(res);
    if (!res.is_zero()) {
      std::string rs = f.dom->render(rel);
      std::string ss = f.cod->render(res);
      throw WellDefinednessFailure("ill-defined morphism: relation " + rs + " maps to " + ss, rs,
                                   ss, k);
    }
  }
  f.certified = true;
}

AlgebraMorphism make_morphism(const AlgebraPtr& dom, const AlgebraPtr& cod,
                              std::vector<Polynomial> images, bool do_certify, std::string name) {
  if (images.size() != dom->ngens()) throw BoundaryMismatch("every domain generator needs an image");
  AlgebraMorphism f;
  f.dom = dom;
  f.cod = cod;
  f.name = std::move(name);
  f.reps = images;
  for (auto& im : images) {
    if (!im.ring() || im.ring()->nvars() != cod->ngens())
      throw BoundaryMismatch("image is not over the codomain ring");
    f.images.push_back(cod->reduce(im));
  }
  if (do_certify) certify(f);
  return f;
}

AlgebraMorphism make_morphism(const AlgebraPtr& dom, const AlgebraPtr& cod,
                              const std::map<std::string, std::string>& images, std::string name) {
  std::vector<Polynomial> ims;
  for (auto& g : dom->names()) {
    auto it = images.find(g);
    if (it == images.end()) throw BoundaryMismatch("missing image for generator '" + g + "'");
    ims.push_back(parse_poly(it->second, cod->ring()));
  }
  return make_morphism(dom, cod, std::move(ims), true, std::move(name));
}

AlgebraMorphism identity_morphism(const AlgebraPtr& a) {
  std::vector<Polynomial> ims;
  for (size_t i = 0; i < a->ngens(); ++i) ims.push_back(a->gen(i));
  AlgebraMorphism f = make_morphism(a, a, std::move(ims), false, "id");
  f.certified = true;
  return f;
}

AlgebraMorphism compose_morphisms(const AlgebraMorphism& g, const AlgebraMorphism& f) {
  if (f.cod != g.dom) throw BoundaryMismatch("composition boundary mismatch");
  AlgebraMorphism h;
  h.dom = f.dom;
  h.cod = g.cod;
  for (size_t i = 0; i < f.images.size(); ++i) {
    h.images.push_back(g.apply(f.images[i]));
    h.reps.push_back(g.apply_formal(f.reps[i]));
  }
  h.certified = f.certified && g.certified;
  h.certificate.assign(f.dom->relations().size(), Polynomial(g.cod->ring()));
  return h;
}

bool morphism_equal(const AlgebraMorphism& f, const AlgebraMorphism& g) {
  return !first_difference(f, g).has_value();
}

std::optional<size_t> first_difference(const AlgebraMorphism& f, const AlgebraMorphism& g) {
  if (f.dom != g.dom || f.cod != g.cod) throw BoundaryMismatch("comparing morphisms with different boundaries");
  for (size_t i = 0; i < f.images.size(); ++i)
    if (f.images[i] != g.images[i]) return i;
  return std::nullopt;
}

// ---------------- tensor products ----------------

namespace {

// Grading of B1 (x)_A B2 built from graded factors: coordinates of the two gradings are
// identified along the base generators. Empty when the factors do not fit together.
struct TensorGrading {
  AlgebraPtr degree_zero;
  std::vector<std::vector<uint32_t>> grading;
};

std::optional<TensorGrading> tensor_grading(const AlgebraMorphism& f1, const AlgebraMorphism& f2,
                                            const RingPtr& ring, size_t n1,
                                            const std::vector<int>& right_index,
                                            const std::vector<Polynomial>& rels) {
  const AlgebraPtr& B1 = f1.cod;
  const AlgebraPtr& B2 = f2.cod;
  if (B1->provenance().grading.empty() && B2->provenance().grading.empty()) return std::nullopt;
  auto coords = [](const AlgebraPtr& b) {
    return b->provenance().grading.empty() ? size_t{0} : b->provenance().grading.front().size();
  };
  const size_t nl = coords(B1), nr = coords(B2);
  auto deg_vec = [](const AlgebraPtr& b, size_t i, size_t n) {
    return b->provenance().grading.empty() ? std::vector<uint32_t>(n, 0) : b->provenance().grading[i];
  };
  // degree of a homogeneous polynomial in one factor
  auto degree = [&](const AlgebraPtr& b, size_t n, const Polynomial& p) -> std::optional<std::vector<uint32_t>> {
    std::optional<std::vector<uint32_t>> d;
    for (auto& [m, c] : p.terms()) {
      std::vector<uint32_t> e(n, 0);
      for (size_t i = 0; i < m.nvars(); ++i)
        if (m[i]) {
          auto g = deg_vec(b, i, n);
          for (size_t k = 0; k < n; ++k) e[k] += m[i] * g[k];
        }
      if (d && *d != e) return std::nullopt;
      d = e;
    }
    return d ? d : std::vector<uint32_t>(n, 0);
  };
  std::vector<size_t> parent(nl + nr);
  for (size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  std::function<size_t(size_t)> find = [&](size_t i) { return parent[i] == i ? i : parent[i] = find(parent[i]); };
  auto unit_of = [](const std::vector<uint32_t>& d) -> int {
    int at = -1;
    for (size_t k = 0; k < d.size(); ++k) {
      if (d[k] == 0) continue;
      if (d[k] != 1 || at >= 0) return -2;
      at = static_cast<int>(k);
    }
    return at;
  };
  for (size_t g = 0; g < f1.dom->ngens(); ++g) {
    auto dl = degree(B1, nl, f1.images[g]), dr = degree(B2, nr, f2.images[g]);
    if (!dl || !dr) return std::nullopt;
    int ul = unit_of(*dl), ur = unit_of(*dr);
    if (ul == -1 && ur == -1) continue;
    if (ul < 0 || ur < 0) return std::nullopt;
    parent[find(static_cast<size_t>(ul))] = find(nl + static_cast<size_t>(ur));
  }
  std::map<size_t, size_t> cls;
  for (size_t i = 0; i < parent.size(); ++i) cls.emplace(find(i), cls.size());
  auto mapped = [&](const std::vector<uint32_t>& d, size_t off) {
    std::vector<uint32_t> out(cls.size(), 0);
    for (size_t k = 0; k < d.size(); ++k) out[cls[find(off + k)]] += d[k];
    return out;
  };
  TensorGrading tg;
  tg.degree_zero = B1->provenance().grading.empty() ? B1 : B1->provenance().degree_zero;
  const size_t n0 = tg.degree_zero->ngens();
  for (size_t i = 0; i < n1; ++i) tg.grading.push_back(mapped(deg_vec(B1, i, nl), 0));
  for (size_t j = 0; j < B2->ngens(); ++j)
    if (right_index[j] >= 0) tg.grading.push_back(mapped(deg_vec(B2, j, nr), nl));
  for (size_t i = 0; i < tg.grading.size(); ++i) {
    bool zero = std::all_of(tg.grading[i].begin(), tg.grading[i].end(), [](uint32_t v) { return v == 0; });
    if (zero != (i < n0)) return std::nullopt;
  }
  // homogeneous relations; those of degree zero must already hold in degree_zero
  std::vector<Polynomial> to_zero;
  for (size_t i = 0; i < ring->nvars(); ++i)
    to_zero.push_back(i < n0 ? Polynomial::variable(tg.degree_zero->ring(), i) : Polynomial(tg.degree_zero->ring()));
  for (auto& r : rels) {
    std::optional<std::vector<uint32_t>> d;
    for (auto& [m, c] : r.terms()) {
      std::vector<uint32_t> e(cls.size(), 0);
      for (size_t i = 0; i < m.nvars(); ++i)
        if (m[i])
          for (size_t k = 0; k < e.size(); ++k) e[k] += m[i] * tg.grading[i][k];
      if (d && *d != e) return std::nullopt;
      d = e;
    }
    if (d && std::all_of(d->begin(), d->end(), [](uint32_t v) { return v == 0; }) &&
        !tg.degree_zero->is_zero(poly_substitute(r, to_zero, tg.degree_zero->ring())))
      return std::nullopt;
  }
  return tg;
}

}  // namespace

TensorProduct tensor_over_base(const AlgebraMorphism& f1, const AlgebraMorphism& f2) {
  if (f1.dom != f2.dom) throw BoundaryMismatch("tensor factors over different bases");
  const AlgebraPtr& A = f1.dom;
  const AlgebraPtr& B1 = f1.cod;
  const AlgebraPtr& B2 = f2.cod;
  const size_t n1 = B1->ngens(), n2 = B2->ngens();

  // A right generator equal to the image of a base generator is identified
  // with the left copy instead of getting its own variable.
  std::vector<int> eliminated_by(n2, -1);
  for (size_t g = 0; g < A->ngens(); ++g) {
    const Polynomial& im = f2.images[g];
    if (im.size() != 1) continue;
    auto& [m, c] = *im.terms().begin();
    if (!c.is_one() || m.degree() != 1) continue;
    size_t j = 0;
    while (!m[j]) ++j;
    if (eliminated_by[j] < 0) eliminated_by[j] = static_cast<int>(g);
  }

  std::vector<std::string> vars, display;
  std::vector<Role> roles;
  for (size_t i = 0; i < n1; ++i) {
    vars.push_back(B1->names()[i] + "#0");
    display.push_back(B1->display_names()[i]);
    roles.push_back(B1->roles()[i]);
  }
  std::vector<int> right_index(n2, -1);
  for (size_t j = 0; j < n2; ++j) {
    if (eliminated_by[j] >= 0) continue;
    right_index[j] = static_cast<int>(vars.size());
    vars.push_back(B2->names()[j] + "#1");
    display.push_back(B2->display_names()[j]);
    roles.push_back(B2->roles()[j]);
  }
  auto ring = make_ring(A->characteristic(), vars);

  std::vector<Polynomial> left_img;
  for (size_t i = 0; i < n1; ++i) left_img.push_back(Polynomial::variable(ring, i));
  std::vector<Polynomial> right_img(n2);
  for (size_t j = 0; j < n2; ++j) {
    if (right_index[j] >= 0) {
      right_img[j] = Polynomial::variable(ring, static_cast<size_t>(right_index[j]));
    } else {
      right_img[j] = poly_substitute(f1.images[static_cast<size_t>(eliminated_by[j])], left_img, ring);
    }
  }

  std::vector<Polynomial> rels;
  for (auto& r : B1->relations()) rels.push_back(poly_substitute(r, left_img, ring));
  for (auto& r : B2->relations()) rels.push_back(poly_substitute(r, right_img, ring));
  for (size_t g = 0; g < A->ngens(); ++g) {
    Polynomial ident = poly_substitute(f1.images[g], left_img, ring) -
                       poly_substitute(f2.images[g], right_img, ring);
    if (!ident.is_zero()) rels.push_back(ident);
  }

  Provenance prov;
  prov.kind = ProvKind::Tensor;
  prov.base = A;
  prov.left = B1;
  prov.right = B2;
  prov.n_left = n1;
  prov.right_image = right_img;
  if (auto tg = tensor_grading(f1, f2, ring, n1, right_index, rels)) {
    prov.degree_zero = tg->degree_zero;
    prov.grading = std::move(tg->grading);
  }
  TensorProduct t;
  t.alg = PresentedAlgebra::create(ring, rels, display, roles, prov);
  t.i0 = make_morphism(B1, t.alg, left_img, false, "i0");
  t.i1 = make_morphism(B2, t.alg, right_img, false, "i1");
  t.i0.certified = t.i1.certified = true;
  t.f1 = f1;
  t.f2 = f2;
  return t;
}

AlgebraMorphism copair(const TensorProduct& t, const AlgebraMorphism& h1, const AlgebraMorphism& h2,
                       std::string name) {
  if (h1.dom != t.f1.cod || h2.dom != t.f2.cod || h1.cod != h2.cod)
    throw BoundaryMismatch("copair boundary mismatch");
  const AlgebraPtr& A = t.f1.dom;
  // Both legs must agree on the base.
  for (size_t g = 0; g < A->ngens(); ++g) {
    Polynomial a = h1.apply(t.f1.images[g]);
    Polynomial b = h2.apply(t.f2.images[g]);
    if (a != b)
      throw WellDefinednessFailure("copair legs disagree on base generator " + A->display_names()[g],
                                   A->display_names()[g], h1.cod->render(a - b), g);
  }
  const size_t n1 = t.f1.cod->ngens();
  std::vector<Polynomial> ims(t.alg->ngens());
  std::vector<Polynomial> reps(t.alg->ngens());
  for (size_t i = 0; i < n1; ++i) {
    ims[i] = h1.images[i];
    reps[i] = h1.reps[i];
  }
  for (size_t j = 0; j < t.f2.cod->ngens(); ++j) {
    const Polynomial& ri = t.alg->provenance().right_image[j];
    if (ri.size() == 1 && ri.leading_coeff().is_one() && ri.leading_monomial().degree() == 1) {
      size_t k = 0;
      while (!ri.leading_monomial()[k]) ++k;
      if (k >= n1) {
        ims[k] = h2.images[j];
        reps[k] = h2.reps[j];
      }
    }
  }
  AlgebraMorphism f = make_morphism(t.alg, h1.cod, ims, false, std::move(name));
  f.reps = reps;
  f.certified = h1.certified && h2.certified;
  return f;
}

AlgebraMorphism tensor_morphisms(const TensorProduct& t, const TensorProduct& s,
                                 const AlgebraMorphism& g1, const AlgebraMorphism& g2) {
  return copair(t, compose_morphisms(s.i0, g1), compose_morphisms(s.i1, g2));
}

AlgebraPtr localize(const AlgebraPtr& a, const std::string& u) {
  int ui = a->index_of(u);
  if (ui < 0) throw ArithError("cannot localize at unknown generator '" + u + "'");
  const std::string inv = u + "_inv";
  if (a->index_of(inv) >= 0) return a;
  auto vars = a->names();
  vars.push_back(inv);
  auto ring = make_ring(a->characteristic(), vars);
  std::vector<Polynomial> embed;
  for (size_t i = 0; i < a->ngens(); ++i) embed.push_back(Polynomial::variable(ring, i));
  std::vector<Polynomial> rels;
  for (auto& r : a->relations()) rels.push_back(poly_substitute(r, embed, ring));
  rels.push_back(Polynomial::variable(ring, static_cast<size_t>(ui)) *
                     Polynomial::variable(ring, a->ngens()) -
                 Polynomial::constant(ring, 1));
  auto display = a->display_names();
  display.push_back(a->display_names()[static_cast<size_t>(ui)] + "_inv");
  auto roles = a->roles();
  roles.push_back(Role::Inverse);
  Provenance prov;
  prov.kind = ProvKind::Localization;
  prov.base = a;
  return PresentedAlgebra::create(ring, rels, display, roles, prov,
                                  a->name().empty() ? std::string() : a->name() + "[" + u + "]");
}

std::vector<Monomial> standard_monomials(const AlgebraPtr& a, unsigned bound) {
  const size_t n = a->ngens();
  std::vector<Monomial> out;
  std::vector<uint32_t> e(n, 0);
  // enumerate exponent vectors of total degree <= bound
  std::function<void(size_t, unsigned)> rec = [&](size_t i, unsigned left) {
    if (i == n) {
      Monomial m{std::vector<uint32_t>(e)};
      bool standard = true;
      if (!a->relations().empty())
        for (auto& g : a->basis().basis()) standard = standard && !g.leading_monomial().divides(m);
      if (standard) out.push_back(m);
      return;
    }
    for (unsigned k = 0; k <= left; ++k) {
      e[i] = k;
      rec(i + 1, left - k);
    }
    e[i] = 0;
  };
  rec(0, bound);
  std::sort(out.begin(), out.end(), MonoGreater());
  return out;
}


}  // namespace kcx
