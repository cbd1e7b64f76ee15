#include "kcx/groebner.hpp"

#include <algorithm>
#include <set>

namespace kcx {

int pot_cmp(uint32_t pa, const Monomial& a, uint32_t pb, const Monomial& b) {
  if (pa != pb) return pa < pb ? 1 : -1;
  return grevlex_cmp(a, b);
}

namespace {

struct Key {
  uint32_t pos;
  Monomial mono;
};

struct KeyGreater {
  bool operator()(const Key& a, const Key& b) const {
    return pot_cmp(a.pos, a.mono, b.pos, b.mono) > 0;
  }
};

using Accum = std::map<Key, Scalar, KeyGreater>;

void accum_add(Accum& f, uint32_t pos, const Monomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = f.try_emplace(Key{pos, m}, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) f.erase(it);
  }
}

Accum to_accum(const SparseVec& v) {
  Accum f;
  for (auto& t : v) f.emplace_hint(f.end(), Key{t.pos, t.mono}, t.coeff);
  return f;
}

// f -= c * m * g
void accum_sub_multiple(Accum& f, const Scalar& c, const Monomial& m, const SparseVec& g) {
  for (auto& t : g) accum_add(f, t.pos, t.mono * m, -(c * t.coeff));
}

const VecTerm& lead(const SparseVec& v) { return v.front(); }

void make_monic(SparseVec& v) {
  if (v.empty() || v.front().coeff.is_one()) return;
  Scalar inv = v.front().coeff.inverse();
  for (auto& t : v) t.coeff *= inv;
}

// Full reduction; `skip` excludes one basis index (used for inter-reduction).
// `spans`/`span` optionally track the certificate degree (see buchberger).
SparseVec reduce_full(Accum f, const std::vector<SparseVec>& G, size_t skip = SIZE_MAX,
                      const std::vector<unsigned>* spans = nullptr, unsigned* span = nullptr) {
  SparseVec r;
  while (!f.empty()) {
    auto it = f.begin();
    const Key k = it->first;
    const Scalar c = it->second;
    const SparseVec* div = nullptr;
    size_t di = 0;
    for (size_t i = 0; i < G.size(); ++i) {
      if (i == skip || G[i].empty()) continue;
      const VecTerm& lt = lead(G[i]);
      if (lt.pos == k.pos && lt.mono.divides(k.mono)) {
        div = &G[i];
        di = i;
        break;
      }
    }
    if (div && spans)
      *span = std::max(*span, k.mono.degree() - lead(*div).mono.degree() + (*spans)[di]);
    if (!div) {
      r.push_back(VecTerm{k.pos, k.mono, c});
      f.erase(it);
      continue;
    }
    // G elements are monic.
    accum_sub_multiple(f, c, lead(*div).mono.quotient_of(k.mono), *div);
  }
  return r;
}

// Reduces only the leading term; the tail is left as is.
SparseVec reduce_top(Accum f, const std::vector<SparseVec>& G, const std::vector<unsigned>& spans,
                     unsigned& span) {
  while (!f.empty()) {
    auto it = f.begin();
    const Key& k = it->first;
    const SparseVec* div = nullptr;
    size_t di = 0;
    for (size_t i = 0; i < G.size(); ++i) {
      if (G[i].empty()) continue;
      const VecTerm& lt = lead(G[i]);
      if (lt.pos == k.pos && lt.mono.divides(k.mono)) {
        div = &G[i];
        di = i;
        break;
      }
    }
    if (!div) break;
    span = std::max(span, k.mono.degree() - lead(*div).mono.degree() + spans[di]);
    const Scalar c = it->second;
    accum_sub_multiple(f, c, lead(*div).mono.quotient_of(k.mono), *div);
  }
  SparseVec r;
  r.reserve(f.size());
  for (auto& [k, c] : f) r.push_back(VecTerm{k.pos, k.mono, c});
  return r;
}

struct Pair {
  size_t i, j;
  uint32_t pos;
  Monomial lcm;
};

bool pair_before(const Pair& a, const Pair& b) {
  if (a.lcm.degree() != b.lcm.degree()) return a.lcm.degree() < b.lcm.degree();
  if (a.lcm.exponents() != b.lcm.exponents()) return a.lcm.exponents() < b.lcm.exponents();
  if (a.pos != b.pos) return a.pos < b.pos;
  if (a.i != b.i) return a.i < b.i;
  return a.j < b.j;
}

unsigned vec_degree(const SparseVec& v) {
  unsigned d = 0;
  for (auto& t : v) d = std::max(d, t.mono.degree());
  return d;
}

// `span_degree` receives a degree bound within which every basis element is an
// explicit combination of the inputs (max over inputs and processed S-pairs).
std::vector<SparseVec> buchberger(std::vector<SparseVec> input, bool rank_one,
                                  unsigned& span_degree, std::vector<unsigned>& out_spans) {
  span_degree = 0;
  std::vector<unsigned> spans;
  std::vector<SparseVec> G;
  std::vector<Pair> pending;
  std::set<std::pair<size_t, size_t>> pending_set;

  auto add_element = [&](SparseVec h, unsigned span) {
    make_monic(h);
    size_t t = G.size();
    G.push_back(std::move(h));
    spans.push_back(span);
    span_degree = std::max(span_degree, span);
    const VecTerm& lt = lead(G[t]);
    for (size_t i = 0; i < t; ++i) {
      if (G[i].empty()) continue;
      const VecTerm& li = lead(G[i]);
      if (li.pos != lt.pos) continue;
      Pair pr{i, t, lt.pos, li.mono.lcm(lt.mono)};
      pending.push_back(pr);
      pending_set.insert({i, t});
    }
  };

  for (auto& v : input) {
    unsigned span = vec_degree(v);
    SparseVec r = reduce_top(to_accum(v), G, spans, span);
    if (!r.empty()) add_element(std::move(r), span);
  }

  while (!pending.empty()) {
    size_t best = 0;
    for (size_t k = 1; k < pending.size(); ++k)
      if (pair_before(pending[k], pending[best])) best = k;
    Pair pr = pending[best];
    pending.erase(pending.begin() + static_cast<long>(best));
    pending_set.erase({pr.i, pr.j});

    const VecTerm& li = lead(G[pr.i]);
    const VecTerm& lj = lead(G[pr.j]);
    // Product criterion: valid for ideals only.
    if (rank_one && li.mono.coprime(lj.mono)) continue;
    // Chain criterion.
    bool chain = false;
    for (size_t k = 0; k < G.size() && !chain; ++k) {
      if (k == pr.i || k == pr.j || G[k].empty()) continue;
      const VecTerm& lk = lead(G[k]);
      if (lk.pos != pr.pos || !lk.mono.divides(pr.lcm)) continue;
      auto key = [](size_t a, size_t b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
      if (!pending_set.count(key(pr.i, k)) && !pending_set.count(key(pr.j, k))) chain = true;
    }
    if (chain) continue;

    unsigned span = std::max(pr.lcm.degree() - li.mono.degree() + spans[pr.i],
                             pr.lcm.degree() - lj.mono.degree() + spans[pr.j]);
    Accum s;
    Monomial mi = li.mono.quotient_of(pr.lcm);
    Monomial mj = lj.mono.quotient_of(pr.lcm);
    for (auto& t : G[pr.i]) accum_add(s, t.pos, t.mono * mi, t.coeff);
    for (auto& t : G[pr.j]) accum_add(s, t.pos, t.mono * mj, -t.coeff);
    SparseVec r = reduce_top(std::move(s), G, spans, span);
    if (!r.empty()) add_element(std::move(r), span);
  }

  // Minimalize.
  std::vector<SparseVec> minimal;
  std::vector<unsigned> mspans;
  for (size_t i = 0; i < G.size(); ++i) {
    const VecTerm& li = lead(G[i]);
    bool redundant = false;
    for (size_t j = 0; j < G.size() && !redundant; ++j) {
      if (i == j) continue;
      const VecTerm& lj = lead(G[j]);
      if (lj.pos != li.pos || !lj.mono.divides(li.mono)) continue;
      // Equal leading terms: keep the earliest.
      if (lj.mono == li.mono && j > i) continue;
      redundant = true;
    }
    if (!redundant) {
      minimal.push_back(G[i]);
      mspans.push_back(spans[i]);
    }
  }
  // Inter-reduce tails.
  for (size_t i = 0; i < minimal.size(); ++i) {
    Accum f = to_accum(minimal[i]);
    unsigned span = mspans[i];
    minimal[i] = reduce_full(std::move(f), minimal, i, &mspans, &span);
    mspans[i] = span;
    span_degree = std::max(span_degree, span);
    make_monic(minimal[i]);
  }
  std::vector<size_t> order(minimal.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return pot_cmp(minimal[a].front().pos, minimal[a].front().mono, minimal[b].front().pos,
                   minimal[b].front().mono) > 0;
  });
  std::vector<SparseVec> sorted;
  out_spans.clear();
  for (size_t i : order) {
    sorted.push_back(std::move(minimal[i]));
    out_spans.push_back(mspans[i]);
  }
  return sorted;
}

}  // namespace

SparseVec to_sparse(const std::vector<Polynomial>& v) {
  SparseVec out;
  for (size_t p = 0; p < v.size(); ++p)
    for (auto& [m, c] : v[p].terms()) out.push_back(VecTerm{static_cast<uint32_t>(p), m, c});
  return out;
}

std::vector<Polynomial> from_sparse(const SparseVec& v, size_t rank, const RingPtr& ring) {
  std::vector<Polynomial> out(rank, Polynomial(ring));
  for (auto& t : v) out[t.pos].add_term(t.mono, t.coeff);
  return out;
}

SparseVec ModuleBasis::reduce(SparseVec v) const { return reduce_full(to_accum(v), basis_); }

SparseVec ModuleBasis::reduce_traced(SparseVec v, unsigned& span) const {
  span = 0;
  for (auto& t : v) span = std::max(span, t.mono.degree());
  return reduce_full(to_accum(v), basis_, SIZE_MAX, &spans_, &span);
}

std::vector<std::vector<Polynomial>> ModuleBasis::basis_vectors() const {
  std::vector<std::vector<Polynomial>> out;
  for (auto& b : basis_) out.push_back(from_sparse(b, rank_, ring_));
  return out;
}

ModuleBasis module_groebner_basis(const std::vector<std::vector<Polynomial>>& gens, size_t rank,
                                  const RingPtr& ring) {
  ModuleBasis mb(ring, rank);
  std::vector<SparseVec> input;
  for (auto& g : gens) {
    if (g.size() != rank) throw ArithError("rank mismatch in module generators");
    mb.gens_.push_back(g);
    input.push_back(to_sparse(g));
  }
  mb.basis_ = buchberger(std::move(input), rank == 1, mb.span_degree_, mb.spans_);
  return mb;
}

std::vector<Polynomial> module_normal_form(const std::vector<Polynomial>& v, const ModuleBasis& b) {
  if (v.size() != b.rank()) throw ArithError("rank mismatch in module normal form");
  return from_sparse(b.reduce(to_sparse(v)), b.rank(), b.ring());
}

IdealBasis groebner_basis(const std::vector<Polynomial>& gens, const RingPtr& ring) {
  IdealBasis ib;
  std::vector<std::vector<Polynomial>> vs;
  for (auto& g : gens) {
    ib.gens_.push_back(g);
    vs.push_back({g});
  }
  ib.mb_ = module_groebner_basis(vs, 1, ring);
  for (auto& v : ib.mb_.basis_vectors()) ib.basis_.push_back(v[0]);
  return ib;
}

bool IdealBasis::is_unit() const {
  return basis_.size() == 1 && basis_[0].is_constant() && !basis_[0].is_zero();
}

Polynomial normal_form(const Polynomial& p, const IdealBasis& b) {
  if (b.basis_.empty()) return p;
  SparseVec v;
  for (auto& [m, c] : p.terms()) v.push_back(VecTerm{0, m, c});
  SparseVec r = b.mb_.reduce(std::move(v));
  Polynomial out(p.ring());
  for (auto& t : r) out.add_term(t.mono, t.coeff);
  return out;
}

// ---------------- linear algebra ----------------

AffineSolutionSpace affine_linear_solve(const std::vector<LinearEquation>& eqs,
                                        std::vector<std::string> unknowns, uint32_t p) {
  const size_t n = unknowns.size();
  AffineSolutionSpace out;
  out.unknowns = std::move(unknowns);
  struct Row {
    std::map<size_t, Scalar> c;
    Scalar rhs;
  };
  std::map<size_t, Row> pivots;  // pivot column -> row with unit coefficient there
  const Scalar zero(0, p);

  auto add_scaled = [&](Row& dst, const Row& src, const Scalar& f) {
    for (auto& [col, v] : src.c) {
      auto [it, ins] = dst.c.try_emplace(col, zero);
      it->second += f * v;
      if (it->second.is_zero()) dst.c.erase(it);
    }
    dst.rhs += f * src.rhs;
  };

  for (auto& e : eqs) {
    Row r;
    r.rhs = Scalar(e.rhs.value(), p);
    for (auto& [col, v] : e.coeffs) {
      if (col >= n) throw ArithError("equation references an undeclared unknown");
      Scalar s(v.value(), p);
      if (!s.is_zero()) r.c[col] = s;
    }
    for (auto& [col, prow] : pivots) {
      auto it = r.c.find(col);
      if (it == r.c.end()) continue;
      Scalar f = -it->second;
      add_scaled(r, prow, f);
    }
    if (r.c.empty()) {
      if (!r.rhs.is_zero()) out.empty = true;
      continue;
    }
    size_t pc = r.c.begin()->first;
    Scalar inv = r.c.begin()->second.inverse();
    for (auto& [col, v] : r.c) v *= inv;
    r.rhs *= inv;
    for (auto& [col, prow] : pivots) {
      auto it = prow.c.find(pc);
      if (it == prow.c.end()) continue;
      Scalar f = -it->second;
      add_scaled(prow, r, f);
    }
    pivots.emplace(pc, std::move(r));
  }
  if (out.empty) return out;
  out.particular.assign(n, zero);
  for (auto& [pc, row] : pivots) out.particular[pc] = row.rhs;
  for (size_t f = 0; f < n; ++f) {
    if (pivots.count(f)) continue;
    std::vector<Scalar> b(n, zero);
    b[f] = Scalar(1, p);
    for (auto& [pc, row] : pivots) {
      auto it = row.c.find(f);
      if (it != row.c.end()) b[pc] = -it->second;
    }
    out.basis.push_back(std::move(b));
    out.free_columns.push_back(f);
  }
  return out;
}

AffineSolutionSpace affine_linear_solve(const std::vector<Polynomial>& eqs, const RingPtr& unknowns) {
  std::vector<LinearEquation> lin;
  for (auto& e : eqs) {
    LinearEquation le;
    le.rhs = Scalar(0, unknowns->p);
    for (auto& [m, c] : e.terms()) {
      if (m.degree() > 1) throw NonlinearError("nonlinear term in unknowns: " + e.to_string());
      if (m.degree() == 0) {
        le.rhs -= c;
        continue;
      }
      for (size_t i = 0; i < m.nvars(); ++i)
        if (m[i]) le.coeffs[i] = c;
    }
    lin.push_back(std::move(le));
  }
  return affine_linear_solve(lin, unknowns->vars, unknowns->p);
}

bool satisfies(const std::vector<LinearEquation>& eqs, const std::vector<Scalar>& x) {
  for (auto& e : eqs) {
    Scalar s = -e.rhs;
    for (auto& [col, v] : e.coeffs) s += v * x.at(col);
    if (!s.is_zero()) return false;
  }
  return true;
}

bool AffineSolutionSpace::contains(const std::vector<Scalar>& v) const {
  if (empty || v.size() != particular.size()) return false;
  std::vector<Scalar> d(v.size());
  for (size_t i = 0; i < v.size(); ++i) d[i] = v[i] - particular[i];
  std::vector<Scalar> acc(v.size(), d.empty() ? Scalar() : d[0] - d[0]);
  for (size_t k = 0; k < basis.size(); ++k) {
    Scalar f = d[free_columns[k]];
    for (size_t i = 0; i < v.size(); ++i) acc[i] += f * basis[k][i];
  }
  for (size_t i = 0; i < v.size(); ++i)
    if (acc[i] != d[i]) return false;
  return true;
}

}  // namespace kcx

namespace kcx {

std::vector<LinearEquation> coefficient_equations(const Polynomial& p, size_t first, size_t count) {
  const size_t n = p.ring()->nvars();
  std::map<Monomial, LinearEquation, MonoGreater> groups;
  const Scalar zero(0, p.ring()->p);
  for (auto& [m, c] : p.terms()) {
    Monomial outer(n);
    int unknown = -1;
    unsigned udeg = 0;
    for (size_t i = 0; i < n; ++i) {
      if (i >= first && i < first + count) {
        udeg += m[i];
        if (m[i]) unknown = static_cast<int>(i - first);
      } else {
        outer.set(i, m[i]);
      }
    }
    if (udeg > 1) throw NonlinearError("nonlinear term in unknowns: " + p.to_string(p.ring()->vars));
    auto it = groups.find(outer);
    if (it == groups.end()) it = groups.emplace(outer, LinearEquation{{}, zero}).first;
    if (unknown < 0) it->second.rhs -= c;
    else it->second.coeffs[static_cast<size_t>(unknown)] += c;
  }
  std::vector<LinearEquation> out;
  for (auto& [m, e] : groups) out.push_back(std::move(e));
  return out;
}

}  // namespace kcx
