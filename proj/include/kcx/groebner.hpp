#pragma once

#include <map>
#include <string>
#include <vector>

#include "kcx/arith_poly.hpp"

namespace kcx {

// One term of a vector in k[x]^rank.
struct VecTerm {
  uint32_t pos;
  Monomial mono;
  Scalar coeff;
};
// Sorted by position-over-term, largest first.
using SparseVec = std::vector<VecTerm>;

// Position-over-term: e_0 > e_1 > ..., grevlex within a position.
int pot_cmp(uint32_t pa, const Monomial& a, uint32_t pb, const Monomial& b);

class ModuleBasis {
 public:
  ModuleBasis() = default;
  ModuleBasis(RingPtr ring, size_t rank) : ring_(std::move(ring)), rank_(rank) {}

  const RingPtr& ring() const { return ring_; }
  size_t rank() const { return rank_; }
  const std::vector<std::vector<Polynomial>>& generators() const { return gens_; }
  const std::vector<SparseVec>& elements() const { return basis_; }
  std::vector<std::vector<Polynomial>> basis_vectors() const;

  SparseVec reduce(SparseVec v) const;
  // Also reports a degree within which v - reduce(v) is an explicit
  // combination of the generators.
  SparseVec reduce_traced(SparseVec v, unsigned& span) const;
  // Every basis element is a combination of the generators with all
  // summands of degree <= span_degree().
  unsigned span_degree() const { return span_degree_; }

 private:
  friend ModuleBasis module_groebner_basis(const std::vector<std::vector<Polynomial>>&, size_t,
                                           const RingPtr&);
  RingPtr ring_;
  size_t rank_ = 0;
  std::vector<std::vector<Polynomial>> gens_;
  std::vector<SparseVec> basis_;
  unsigned span_degree_ = 0;
  std::vector<unsigned> spans_;
};

class IdealBasis {
 public:
  IdealBasis() = default;
  const RingPtr& ring() const { return mb_.ring(); }
  const std::vector<Polynomial>& generators() const { return gens_; }
  const std::vector<Polynomial>& basis() const { return basis_; }
  std::string order() const { return "grevlex"; }
  bool is_unit() const;
  unsigned span_degree() const { return mb_.span_degree(); }

 private:
  friend IdealBasis groebner_basis(const std::vector<Polynomial>&, const RingPtr&);
  friend Polynomial normal_form(const Polynomial&, const IdealBasis&);
  ModuleBasis mb_;
  std::vector<Polynomial> gens_;
  std::vector<Polynomial> basis_;
};

IdealBasis groebner_basis(const std::vector<Polynomial>& gens, const RingPtr& ring);
Polynomial normal_form(const Polynomial& p, const IdealBasis& b);

ModuleBasis module_groebner_basis(const std::vector<std::vector<Polynomial>>& gens, size_t rank,
                                  const RingPtr& ring);
std::vector<Polynomial> module_normal_form(const std::vector<Polynomial>& v, const ModuleBasis& b);

SparseVec to_sparse(const std::vector<Polynomial>& v);
std::vector<Polynomial> from_sparse(const SparseVec& v, size_t rank, const RingPtr& ring);

// ---- exact affine linear algebra ----

class NonlinearError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// sum_u coeffs[u] * x_u = rhs
struct LinearEquation {
  std::map<size_t, Scalar> coeffs;
  Scalar rhs;
};

struct AffineSolutionSpace {
  std::vector<std::string> unknowns;
  bool empty = false;
  std::vector<Scalar> particular;
  std::vector<std::vector<Scalar>> basis;
  std::vector<size_t> free_columns;  // basis[k] is 1 at free_columns[k]

  size_t dim() const { return basis.size(); }
  bool unique() const { return !empty && basis.empty(); }
  std::string status() const { return empty ? "empty" : (basis.empty() ? "unique" : "family"); }
  bool contains(const std::vector<Scalar>& v) const;
};

AffineSolutionSpace affine_linear_solve(const std::vector<LinearEquation>& eqs,
                                        std::vector<std::string> unknowns, uint32_t p);
// Each polynomial (in a ring whose variables are the unknowns) is read as "poly = 0".
AffineSolutionSpace affine_linear_solve(const std::vector<Polynomial>& eqs, const RingPtr& unknowns);

bool satisfies(const std::vector<LinearEquation>& eqs, const std::vector<Scalar>& x);

// Variables [first, first + count) of p's ring are unknowns. Groups p's terms by the
// monomial in the other variables and reads each group as "affine form = 0".
// Unknown u is reported as index u - first.
std::vector<LinearEquation> coefficient_equations(const Polynomial& p, size_t first, size_t count);

}  // namespace kcx
