#pragma once

// Randomized GB-vs-dense membership comparison: per instance one constructed
// member and one random candidate.

#include <random>

#include "kcx/groebner.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

namespace kcx::oracle {

struct OracleTally {
  int instances = 0;
  int members = 0;
  int agreements = 0;
};

inline OracleTally run_oracle(uint32_t p, size_t rank, unsigned seed, int count) {
  std::mt19937 rng(seed);
  OracleTally t;
  for (int inst = 0; inst < count; ++inst) {
    size_t nv = 1 + rng() % 3;
    std::vector<std::string> vars;
    for (size_t i = 0; i < nv; ++i) vars.push_back("v" + std::to_string(i));
    auto r = make_ring(p, vars);
    size_t ng = 1 + rng() % 3;
    std::vector<std::vector<Polynomial>> gens;
    for (size_t g = 0; g < ng; ++g) {
      std::vector<Polynomial> v;
      for (size_t k = 0; k < rank; ++k) v.push_back(testing::random_poly(rng, r, 3, 2, 3));
      gens.push_back(v);
    }
    auto mb = module_groebner_basis(gens, rank, r);
    std::vector<std::vector<Polynomial>> cands;
    // a constructed member and a random candidate
    std::vector<Polynomial> mem(rank, Polynomial(r));
    for (auto& g : gens) {
      auto h = testing::random_poly(rng, r, 2, 2, 3);
      for (size_t k = 0; k < rank; ++k) mem[k] += h * g[k];
    }
    cands.push_back(mem);
    std::vector<Polynomial> rnd;
    for (size_t k = 0; k < rank; ++k) rnd.push_back(testing::random_poly(rng, r, 3, 3, 3));
    cands.push_back(rnd);
    for (auto& f : cands) {
      int df = 0;
      for (auto& c : f) df = std::max(df, c.degree());
      unsigned span = 0;
      bool gb = mb.reduce_traced(to_sparse(f), span).empty();
      // Members: the traced certificate degree makes the oracle complete.
      // Non-members: the oracle must not find a certificate in a fixed window.
      unsigned D = gb ? span : static_cast<unsigned>(df) + 3;
      bool dense = oracle::dense_member(gens, f, D, nv);
      ++t.instances;
      t.members += gb;
      t.agreements += (gb == dense);
    }
  }
  return t;
}


}  // namespace kcx::oracle
