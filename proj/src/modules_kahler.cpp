#include "kcx/modules_kahler.hpp"

#include <set>

namespace kcx {

ModulePtr PresentedModule::create(AlgebraPtr base, std::vector<std::string> gens,
                                  std::vector<Vec> relations, ModKind kind, ModulePtr left,
                                  ModulePtr right, std::string name) {
  std::shared_ptr<PresentedModule> m(new PresentedModule());
  std::set<std::string> seen(gens.begin(), gens.end());
  if (seen.size() != gens.size()) throw ArithError("duplicate module generator name");
  m->base_ = std::move(base);
  m->gens_ = std::move(gens);
  for (auto& r : relations) {
    if (r.size() != m->gens_.size()) throw ArithError("relation length differs from module rank");
    bool nz = false;
    for (auto& c : r) nz = nz || !c.is_zero();
    if (nz) m->relations_.push_back(r);
  }
  m->kind_ = kind;
  m->left_ = std::move(left);
  m->right_ = std::move(right);
  m->name_ = std::move(name);
  return m;
}

int PresentedModule::index_of(const std::string& gen) const {
  for (size_t i = 0; i < gens_.size(); ++i)
    if (gens_[i] == gen) return static_cast<int>(i);
  return -1;
}

int PresentedModule::wedge_index(size_t i, size_t j) const {
  for (size_t k = 0; k < wedge_pairs_.size(); ++k)
    if (wedge_pairs_[k] == std::make_pair(i, j)) return static_cast<int>(k);
  return -1;
}

const ModuleBasis& PresentedModule::basis() const {
  std::call_once(once_, [this] {
    std::vector<Vec> rows;
    for (auto& r : relations_) {
      Vec red;
      for (auto& c : r) red.push_back(base_->reduce(c));
      rows.push_back(red);
    }
    if (!base_->relations().empty()) {
      for (size_t i = 0; i < rank(); ++i)
        for (auto& g : base_->basis().basis()) {
          Vec v = zero();
          v[i] = g;
          rows.push_back(v);
        }
    }
    basis_.emplace(module_groebner_basis(rows, rank(), ring()));
  });
  return *basis_;
}

Vec PresentedModule::normal_form(const Vec& v) const {
  if (v.size() != rank()) throw ArithError("vector length differs from module rank");
  if (rank() == 0) return v;
  return module_normal_form(v, basis());
}

bool PresentedModule::is_zero(const Vec& v) const {
  for (auto& c : normal_form(v))
    if (!c.is_zero()) return false;
  return true;
}

Vec PresentedModule::unit(size_t i) const {
  Vec v = zero();
  v[i] = Polynomial::constant(ring(), 1);
  return v;
}

std::string PresentedModule::render(const Vec& v) const {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    const Polynomial& c = v[i];
    if (c.is_zero()) continue;
    bool neg = false;
    std::string body;
    if (c.size() == 1) {
      auto& [m, s] = *c.terms().begin();
      neg = s.is_negative();
      mpq_class mag = neg ? mpq_class(-s.value()) : s.value();
      std::string mono = render_monomial(m, base_->display_names());
      if (mag != 1) body = mag.get_str() + "*";
      if (!mono.empty()) body += mono + "*";
    } else {
      body = "(" + base_->render(c) + ")*";
    }
    out += out.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
    out += body + gens_[i];
  }
  return out.empty() ? "0" : out;
}

ModuleElement make_module_element(const ModulePtr& m, const Vec& v) {
  return ModuleElement{m, m->normal_form(v)};
}

bool element_is_zero(const ModuleElement& e) { return e.owner->is_zero(e.coeffs); }

ModulePtr free_module(const AlgebraPtr& a, size_t n, const std::string& prefix) {
  std::vector<std::string> gens;
  for (size_t i = 0; i < n; ++i) gens.push_back(prefix + std::to_string(i + 1));
  return PresentedModule::create(a, gens, {}, ModKind::Free);
}

ModulePtr make_module(const AlgebraPtr& a, std::vector<std::string> gens, std::vector<Vec> relations,
                      std::string name) {
  return PresentedModule::create(a, std::move(gens), std::move(relations), ModKind::Presented,
                                 nullptr, nullptr, std::move(name));
}

ModulePtr make_module(const AlgebraPtr& a, std::vector<std::string> gens,
                      const std::vector<std::string>& relations, std::string name) {
  auto shell = PresentedModule::create(a, gens, {}, ModKind::Presented);
  std::vector<Vec> rels;
  for (auto& r : relations) rels.push_back(parse_module_sum(r, shell));
  return make_module(a, std::move(gens), std::move(rels), std::move(name));
}

Vec differential(const Polynomial& a) {
  Vec v;
  for (size_t i = 0; i < a.ring()->nvars(); ++i) v.push_back(formal_partial(a, i));
  return v;
}

ModulePtr kahler_module(const AlgebraPtr& a) {
  std::vector<std::string> gens;
  for (auto& n : a->display_names()) gens.push_back("d(" + n + ")");
  std::vector<Vec> rels;
  for (auto& f : a->relations()) rels.push_back(differential(f));
  return PresentedModule::create(a, gens, rels, ModKind::Kahler);
}

ModuleElement universal_derivation(const ModulePtr& omega, const Polynomial& a) {
  return make_module_element(omega, differential(a));
}

ModulePtr tensor_modules(const ModulePtr& m, const ModulePtr& n) {
  if (m->base() != n->base()) throw BoundaryMismatch("tensor of modules over different algebras");
  std::vector<std::string> gens;
  for (auto& g : m->gens())
    for (auto& h : n->gens()) gens.push_back(g + "@" + h);
  const size_t rn = n->rank();
  const Polynomial zero(m->ring());
  std::vector<Vec> rels;
  for (auto& r : m->relations())
    for (size_t j = 0; j < rn; ++j) {
      Vec v(gens.size(), zero);
      for (size_t i = 0; i < m->rank(); ++i) v[i * rn + j] = r[i];
      rels.push_back(v);
    }
  for (auto& s : n->relations())
    for (size_t i = 0; i < m->rank(); ++i) {
      Vec v(gens.size(), zero);
      for (size_t j = 0; j < rn; ++j) v[i * rn + j] = s[j];
      rels.push_back(v);
    }
  return PresentedModule::create(m->base(), gens, rels, ModKind::Tensor, m, n);
}

ModulePtr wedge_square(const ModulePtr& omega) {
  const size_t n = omega->rank();
  std::vector<std::string> gens;
  std::vector<std::pair<size_t, size_t>> pairs;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      gens.push_back(omega->gens()[i] + "^" + omega->gens()[j]);
      pairs.emplace_back(i, j);
    }
  auto index = [&](size_t i, size_t j) {
    for (size_t k = 0; k < pairs.size(); ++k)
      if (pairs[k] == std::make_pair(i, j)) return k;
    return pairs.size();
  };
  const Polynomial zero(omega->ring());
  std::vector<Vec> rels;
  // r ^ g_l for each relation r and generator g_l
  for (auto& r : omega->relations())
    for (size_t l = 0; l < n; ++l) {
      Vec v(gens.size(), zero);
      for (size_t k = 0; k < n; ++k) {
        if (k == l || r[k].is_zero()) continue;
        if (k < l) v[index(k, l)] += r[k];
        else v[index(l, k)] -= r[k];
      }
      rels.push_back(v);
    }
  auto w = PresentedModule::create(omega->base(), gens, rels, ModKind::Wedge, omega, omega);
  std::const_pointer_cast<PresentedModule>(w)->wedge_pairs_ = pairs;
  return w;
}

Vec wedge_map(const ModulePtr& tensor, const ModulePtr& wedge, const Vec& v) {
  const size_t n = tensor->left()->rank();
  Vec out = wedge->zero();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      const Polynomial& c = v[tensor->tensor_index(i, j)];
      if (c.is_zero() || i == j) continue;
      if (i < j) out[static_cast<size_t>(wedge->wedge_index(i, j))] += c;
      else out[static_cast<size_t>(wedge->wedge_index(j, i))] -= c;
    }
  return out;
}

Vec push_vec(const Vec& v, const AlgebraMorphism& f) {
  Vec out;
  for (auto& c : v) out.push_back(f.apply(c));
  return out;
}

ModulePtr base_change(const ModulePtr& m, const AlgebraMorphism& f) {
  if (f.dom != m->base()) throw BoundaryMismatch("base change along a map from another algebra");
  std::vector<Vec> rels;
  for (auto& r : m->relations()) rels.push_back(push_vec(r, f));
  return PresentedModule::create(f.cod, m->gens(), rels, ModKind::Presented);
}

Vec tensor_vec(const ModulePtr& t, const Vec& v, const Vec& w) {
  Vec out = t->zero();
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    for (size_t j = 0; j < w.size(); ++j)
      if (!w[j].is_zero()) out[t->tensor_index(i, j)] += v[i] * w[j];
  }
  return out;
}

Vec scale(const Vec& v, const Polynomial& a) {
  Vec out;
  for (auto& c : v) out.push_back(c * a);
  return out;
}

Vec add(const Vec& a, const Vec& b) {
  Vec out = a;
  for (size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Vec sub(const Vec& a, const Vec& b) {
  Vec out = a;
  for (size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  return out;
}

Vec ModuleMap::apply(const Vec& v) const {
  Vec out = cod->zero();
  for (size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) out = add(out, scale(images[i], v[i]));
  return cod->normal_form(out);
}

ModuleMap make_module_map(const ModulePtr& dom, const ModulePtr& cod, std::vector<Vec> images) {
  if (dom->base() != cod->base()) throw BoundaryMismatch("module map between different algebras");
  if (images.size() != dom->rank()) throw BoundaryMismatch("module map needs one image per generator");
  ModuleMap f{dom, cod, std::move(images)};
  for (size_t k = 0; k < dom->relations().size(); ++k) {
    Vec res = f.apply(dom->relations()[k]);
    if (!cod->is_zero(res)) {
      std::string rs = dom->render(dom->relations()[k]);
      std::string ss = cod->render(res);
      throw WellDefinednessFailure("ill-defined module map: relation " + rs + " maps to " + ss, rs,
                                   ss, k);
    }
  }
  return f;
}

Vec parse_module_sum(const std::string& s, const ModulePtr& m) {
  Lexer lx(s);
  const RingPtr& ring = m->ring();
  Vec out = m->zero();
  bool first = true;
  while (!lx.at_end()) {
    bool neg = false;
    if (lx.accept("-")) neg = true;
    else if (!lx.accept("+") && !first) lx.fail("expected '+' or '-'", lx.peek());
    first = false;
    Polynomial coeff = Polynomial::constant(ring, neg ? -1 : 1);
    int gen = -1;
    while (true) {
      const Token& t = lx.peek();
      std::string gname;
      if (t.kind == Token::Ident && t.text == "d" && lx.peek(1).text == "(" &&
          lx.peek(2).kind == Token::Ident && lx.peek(3).text == ")") {
        gname = "d(" + lx.peek(2).text + ")";
      } else if (t.kind == Token::Ident && m->index_of(t.text) >= 0) {
        gname = t.text;
      }
      if (!gname.empty() && m->index_of(gname) >= 0) {
        if (gen >= 0) lx.fail("two module generators in one term", t);
        gen = m->index_of(gname);
        for (int k = 0, n = gname[0] == 'd' && gname.size() > 1 && gname[1] == '(' ? 4 : 1; k < n; ++k) lx.next();
      } else {
        coeff = coeff * poly_normalize(parse_factor(lx), ring);
      }
      if (!lx.accept("*")) break;
    }
    if (gen < 0) lx.fail("term without a module generator", lx.peek());
    out[static_cast<size_t>(gen)] += coeff;
  }
  return out;
}

}  // namespace kcx
