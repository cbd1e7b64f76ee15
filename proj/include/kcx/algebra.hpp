#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "kcx/arith_poly.hpp"
#include "kcx/groebner.hpp"

namespace kcx {

class PresentedAlgebra;
using AlgebraPtr = std::shared_ptr<const PresentedAlgebra>;

// What a generator is, relative to the construction that produced the algebra.
enum class Role { Base, Module, D, DPrime, DPrimeD, Inverse, Epsilon };

enum class ProvKind { Plain, Tangent, Sym, Tensor, Localization, Dual };

struct Provenance {
  ProvKind kind = ProvKind::Plain;
  AlgebraPtr base;          // tangent-of, sym-of, localization-of, dual numbers of
  AlgebraPtr left, right;   // tensor factors
  size_t n_left = 0;        // tensor: left generators come first
  // tensor: image of every right-factor generator in this algebra's ring
  std::vector<Polynomial> right_image;
  // Optional multigrading. Generators [0, degree_zero.ngens()) are degree_zero's and
  // have degree 0; every other generator has a nonzero degree; relations are homogeneous.
  // Normal forms are then computed per graded component as modules over degree_zero.
  AlgebraPtr degree_zero;
  std::vector<std::vector<uint32_t>> grading;
};

class PresentedAlgebra {
 public:
  static AlgebraPtr create(RingPtr ring, std::vector<Polynomial> relations,
                           std::vector<std::string> display, std::vector<Role> roles,
                           Provenance prov = {}, std::string name = {});

  const RingPtr& ring() const { return ring_; }
  uint32_t characteristic() const { return ring_->p; }
  size_t ngens() const { return ring_->nvars(); }
  const std::vector<std::string>& names() const { return ring_->vars; }
  const std::vector<std::string>& display_names() const { return display_; }
  const std::vector<Role>& roles() const { return roles_; }
  const std::vector<Polynomial>& relations() const { return relations_; }
  const Provenance& provenance() const { return prov_; }
  const std::string& name() const { return name_; }

  // Reduced Groebner basis of the relation ideal, built on first use.
  const IdealBasis& basis() const;
  Polynomial reduce(const Polynomial& p) const;
  bool is_zero(const Polynomial& p) const { return reduce(p).is_zero(); }

  Polynomial gen(size_t i) const { return Polynomial::variable(ring_, i); }
  Polynomial gen(const std::string& internal_name) const;
  Polynomial constant(long c) const { return Polynomial::constant(ring_, c); }
  Polynomial zero() const { return Polynomial(ring_); }
  Polynomial parse(const std::string& expr) const;
  int index_of(const std::string& internal_name) const { return ring_->index_of(internal_name); }
  int index_of_display(const std::string& display) const;

  std::string render(const Polynomial& p) const;

 private:
  PresentedAlgebra() = default;
  RingPtr ring_;
  std::vector<Polynomial> relations_;
  std::vector<std::string> display_;
  std::vector<Role> roles_;
  Provenance prov_;
  std::string name_;
  mutable std::once_flag gb_once_;
  mutable std::optional<IdealBasis> gb_;

  struct Component;
  std::vector<uint32_t> degree_of(const Monomial& m) const;
  const Component& component(const std::vector<uint32_t>& deg) const;
  Polynomial graded_reduce(const Polynomial& p) const;
  mutable std::mutex comp_mu_;
  mutable std::map<std::vector<uint32_t>, std::shared_ptr<Component>> components_;
};

AlgebraPtr make_algebra(uint32_t p, const std::vector<std::string>& vars,
                        const std::vector<std::string>& relations, const std::string& name = {});

struct AlgebraElement {
  AlgebraPtr owner;
  Polynomial value;  // normal form
  std::string to_string() const { return owner->render(value); }
};

AlgebraElement make_element(const AlgebraPtr& a, const Polynomial& p);
bool element_equal(const AlgebraElement& a, const AlgebraElement& b);

class WellDefinednessFailure : public std::runtime_error {
 public:
  WellDefinednessFailure(const std::string& what, std::string relation, std::string residue,
                         size_t index)
      : std::runtime_error(what), relation(std::move(relation)), residue(std::move(residue)),
        index(index) {}
  std::string relation;
  std::string residue;
  size_t index;
};

class BoundaryMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AlgebraMorphism {
  AlgebraPtr dom, cod;
  std::vector<Polynomial> images;  // normal forms in cod
  std::vector<Polynomial> reps;    // representatives as supplied
  std::vector<Polynomial> certificate;
  bool certified = false;
  std::string name;

  Polynomial apply(const Polynomial& p) const;
  // Substitutes representatives without reducing in the codomain.
  Polynomial apply_formal(const Polynomial& p) const;
  AlgebraElement apply(const AlgebraElement& e) const;
};

// Images are polynomials over cod's ring, one per domain generator.
// certify=false is for structure maps whose well-definedness is tested separately.
AlgebraMorphism make_morphism(const AlgebraPtr& dom, const AlgebraPtr& cod,
                              std::vector<Polynomial> images, bool certify = true,
                              std::string name = {});
AlgebraMorphism make_morphism(const AlgebraPtr& dom, const AlgebraPtr& cod,
                              const std::map<std::string, std::string>& images,
                              std::string name = {});
// Recomputes the certificate; throws WellDefinednessFailure on a nonzero residue.
void certify(AlgebraMorphism& f);
AlgebraMorphism identity_morphism(const AlgebraPtr& a);
// g after f.
AlgebraMorphism compose_morphisms(const AlgebraMorphism& g, const AlgebraMorphism& f);
bool morphism_equal(const AlgebraMorphism& f, const AlgebraMorphism& g);
// First generator (display name) on which f and g differ, or empty.
std::optional<size_t> first_difference(const AlgebraMorphism& f, const AlgebraMorphism& g);

struct TensorProduct {
  AlgebraPtr alg;
  AlgebraMorphism i0, i1;
  AlgebraMorphism f1, f2;  // structural maps from the base
};

// B1 (x)_A B2 for structural maps f1: A -> B1, f2: A -> B2.
TensorProduct tensor_over_base(const AlgebraMorphism& f1, const AlgebraMorphism& f2);
// Universal map out of the tensor: h1 on the left factor, h2 on the right.
AlgebraMorphism copair(const TensorProduct& t, const AlgebraMorphism& h1,
                       const AlgebraMorphism& h2, std::string name = {});
// g1 (x) g2 : t -> s, given gi : Bi -> Ci and s = C1 (x) C2.
AlgebraMorphism tensor_morphisms(const TensorProduct& t, const TensorProduct& s,
                                 const AlgebraMorphism& g1, const AlgebraMorphism& g2);

AlgebraPtr localize(const AlgebraPtr& a, const std::string& u);

// Monomials of total degree <= bound that are standard for A's relations, descending.
std::vector<Monomial> standard_monomials(const AlgebraPtr& a, unsigned bound);

}  // namespace kcx
