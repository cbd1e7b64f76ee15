#pragma once

// Brute-force membership oracle: f lies in the submodule generated by `gens`
// iff it is in the k-span of all products m*g with deg(m*g) <= D, for D large
// enough. Pure linear algebra over explicit monomial columns.

#include <map>
#include <vector>

#include "kcx/arith_poly.hpp"

namespace kcx::oracle {

inline void monomials_up_to(size_t nvars, unsigned D, std::vector<Monomial>& out) {
  std::vector<uint32_t> e(nvars, 0);
  auto rec = [&](auto& self, size_t i, unsigned left) -> void {
    if (i == nvars) {
      out.emplace_back(e);
      return;
    }
    for (unsigned k = 0; k <= left; ++k) {
      e[i] = k;
      self(self, i + 1, left - k);
    }
    e[i] = 0;
  };
  rec(rec, 0, D);
}

class DenseSpan {
 public:
  using Row = std::map<std::pair<uint32_t, std::vector<uint32_t>>, Scalar>;

  // Returns the residue of r after elimination against current pivots.
  Row reduce(Row r) const {
    for (auto& [key, prow] : pivots_) {
      auto it = r.find(key);
      if (it == r.end()) continue;
      Scalar f = it->second;
      for (auto& [k, v] : prow) {
        auto [jt, ins] = r.try_emplace(k, v - v);
        jt->second -= f * v;
        if (jt->second.is_zero()) r.erase(jt);
      }
    }
    return r;
  }

  void insert(Row r) {
    r = reduce(std::move(r));
    if (r.empty()) return;
    auto key = r.begin()->first;
    Scalar inv = r.begin()->second.inverse();
    for (auto& [k, v] : r) v *= inv;
    // Keep pivots fully reduced so a single pass in reduce() suffices.
    for (auto& [pk, prow] : pivots_) {
      auto it = prow.find(key);
      if (it == prow.end()) continue;
      Scalar f = it->second;
      for (auto& [k, v] : r) {
        auto [jt, ins] = prow.try_emplace(k, v - v);
        jt->second -= f * v;
        if (jt->second.is_zero()) prow.erase(jt);
      }
    }
    pivots_.emplace(key, std::move(r));
  }

 private:
  std::map<std::pair<uint32_t, std::vector<uint32_t>>, Row> pivots_;
};

inline DenseSpan::Row to_row(const std::vector<Polynomial>& v, const Monomial* shift) {
  DenseSpan::Row r;
  for (uint32_t p = 0; p < v.size(); ++p)
    for (auto& [m, c] : v[p].terms()) {
      Monomial mm = shift ? m * *shift : m;
      r[{p, mm.exponents()}] = c;
    }
  return r;
}

// Grows the degree window one step at a time up to D; true as soon as f is
// in the span. With D a certificate bound this decides membership.
inline bool dense_member(const std::vector<std::vector<Polynomial>>& gens,
                         const std::vector<Polynomial>& f, unsigned D, size_t nvars) {
  DenseSpan span;
  std::vector<Monomial> monos;
  monomials_up_to(nvars, D, monos);
  const auto target = to_row(f, nullptr);
  int df = 0;
  for (auto& c : f) df = std::max(df, c.degree());
  for (unsigned d = 0; d <= D; ++d) {
    for (auto& g : gens) {
      int dg = -1;
      for (auto& comp : g) dg = std::max(dg, comp.degree());
      if (dg < 0) continue;
      for (auto& m : monos)
        if (m.degree() + static_cast<unsigned>(dg) == d) span.insert(to_row(g, &m));
    }
    if (d >= static_cast<unsigned>(df) && span.reduce(target).empty()) return true;
  }
  return false;
}

}  // namespace kcx::oracle
