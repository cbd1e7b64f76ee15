#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>

#include "kcx/modules_kahler.hpp"

namespace kcx {

// ---------------- tangent algebras ----------------
//
// T(B) lists B's generators first, then d(g) for every generator g of B in the
// same order. Applied to a tangent algebra the new layer is named d' / d'd, so
// T^2(A) has generator blocks [a, d(a), d'(a), d'd(a)].

AlgebraPtr tangent_algebra(const AlgebraPtr& b);  // memoized per algebra
// d(p) in T(B) for p over B's ring.
Polynomial tangent_differential(const Polynomial& p, const AlgebraPtr& tb);

// Structure maps, written in the algebra direction (opposite of the scheme side).
AlgebraMorphism tangent_projection(const AlgebraPtr& b);  // p: B -> T(B)
AlgebraMorphism tangent_zero(const AlgebraPtr& b);        // 0: T(B) -> B
AlgebraMorphism tangent_negation(const AlgebraPtr& b);    // -: T(B) -> T(B)
AlgebraMorphism tangent_lift(const AlgebraPtr& b);        // l: T^2(B) -> T(B)
AlgebraMorphism tangent_flip(const AlgebraPtr& b);        // c: T^2(B) -> T^2(B)

struct TangentMaps {
  AlgebraPtr base, t, t2;
  TensorProduct t_pair;  // T(B) (x)_B T(B)
  AlgebraMorphism p, zero, sum, neg, lift, flip, tau;
};
TangentMaps tangent_structure_maps(const AlgebraPtr& b);

// T(f): T(dom) -> T(cod), d(g) -> d(f(g)). Representatives are differentiated formally.
AlgebraMorphism tangent_apply_functor(const AlgebraMorphism& f);

// ---------------- S_A(M) bundles ----------------

class BracketingConditionFailure : public std::runtime_error {
 public:
  BracketingConditionFailure(const std::string& what, std::string generator, std::string value)
      : std::runtime_error(what), generator(std::move(generator)), value(std::move(value)) {}
  std::string generator, value;
};

class BaseMismatch : public std::runtime_error {
 public:
  BaseMismatch(const std::string& what, std::string generator, std::string difference)
      : std::runtime_error(what), generator(std::move(generator)),
        difference(std::move(difference)) {}
  std::string generator, difference;
};

// Symmetric algebra S_A(M): A's generators, then one generator per module generator.
struct SymBundle {
  AlgebraPtr base;
  ModulePtr module;
  AlgebraPtr alg;
  TensorProduct pair;  // S (x)_A S
  AlgebraMorphism q, z, sigma, neg;
  AlgebraMorphism lambda;  // T(S) -> S
  size_t module_gen(size_t j) const { return base->ngens() + j; }
};
SymBundle sym_algebra_bundle(const AlgebraPtr& a, const ModulePtr& m);
// sum_j v_j m_j as a degree-one polynomial of S.
Polynomial sym_embed(const SymBundle& s, const Vec& v);

// Everything the connection machinery needs around one bundle, built on demand.
class BundleContext {
 public:
  explicit BundleContext(const ModulePtr& m);
  const AlgebraPtr& base() const { return a_; }
  const ModulePtr& module() const { return m_; }
  const SymBundle& sym() const { return sym_; }
  const AlgebraPtr& s() const { return sym_.alg; }
  const AlgebraPtr& ta() const;
  const AlgebraPtr& t2a() const;
  const AlgebraPtr& ts() const;
  const AlgebraPtr& t2s() const;
  const TensorProduct& ta_s() const;          // T(A) (x)_A S
  const AlgebraMorphism& tq() const;          // T(q): T(A) -> T(S)
  const AlgebraMorphism& ps() const;          // p_S: S -> T(S)
  const AlgebraMorphism& u() const;           // U = <T(q), p_S>
  // T(T(A) (x)_A S) ~ T^2(A) (x)_{T(A)} T(S)
  const TensorProduct& t2a_ts() const;
  const AlgebraMorphism& iso() const;
  const AlgebraPtr& t_ta_s() const;

 private:
  AlgebraPtr a_;
  ModulePtr m_;
  SymBundle sym_;
  struct Lazy;
  std::shared_ptr<Lazy> lazy_;
};

// U: T(A) (x)_A S -> T(S).
AlgebraMorphism u_map(const BundleContext& ctx);
// {h}(a) = h(a), {h}(m) = h(d(m)); requires h(d(x_i)) = 0.
AlgebraMorphism bracketing(const BundleContext& ctx, const AlgebraMorphism& h);

enum class Sign { Plus, Minus };
// Generic bundle addition: base generators must agree, fiber generators add.
AlgebraMorphism combine_on_fiber(const AlgebraMorphism& f, const AlgebraMorphism& g,
                                 const std::vector<bool>& fiber, Sign sign);
// f +/-_q g for maps out of S_A(M).
AlgebraMorphism bundle_combine(const SymBundle& s, const AlgebraMorphism& f,
                               const AlgebraMorphism& g, Sign sign);

// ---------------- dual numbers ----------------

struct DualNumbers {
  AlgebraPtr base;
  AlgebraPtr t;     // A[eps]
  AlgebraPtr pair;  // A[eps1, eps2]
  AlgebraPtr tt;    // A[eps][eps']
  AlgebraMorphism p, zero, sum, neg, lift, flip;
};
DualNumbers dual_numbers_structure(const AlgebraPtr& a);

struct DualBundle {
  AlgebraPtr base;
  ModulePtr module;
  AlgebraPtr alg;     // M[eps]: generators m_j eps
  AlgebraPtr lifted;  // M[eps][eps']
  AlgebraMorphism q;       // M[eps] -> A
  AlgebraMorphism lambda;  // M[eps] -> M[eps][eps']
};
DualBundle dual_module_bundle(const ModulePtr& m);

// Vertical connections K: M[eps][eps'] -> M[eps] with coefficients of degree <= bound.
AffineSolutionSpace dual_connection_solve(const ModulePtr& m, unsigned degree_bound);

}  // namespace kcx
