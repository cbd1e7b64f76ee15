#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "kcx/algebra.hpp"

namespace kcx {

class PresentedModule;
using ModulePtr = std::shared_ptr<const PresentedModule>;
using Vec = std::vector<Polynomial>;  // coefficient vector over the base algebra's ring

enum class ModKind { Free, Kahler, Presented, Tensor, Wedge };

class PresentedModule {
 public:
  static ModulePtr create(AlgebraPtr base, std::vector<std::string> gens, std::vector<Vec> relations,
                          ModKind kind = ModKind::Presented, ModulePtr left = nullptr,
                          ModulePtr right = nullptr, std::string name = {});

  const AlgebraPtr& base() const { return base_; }
  const RingPtr& ring() const { return base_->ring(); }
  size_t rank() const { return gens_.size(); }
  const std::vector<std::string>& gens() const { return gens_; }
  const std::vector<Vec>& relations() const { return relations_; }
  ModKind kind() const { return kind_; }
  const ModulePtr& left() const { return left_; }
  const ModulePtr& right() const { return right_; }
  const std::string& name() const { return name_; }
  int index_of(const std::string& gen) const;

  // Lifted basis of N' + I*e_1 + ... + I*e_m, built on first use.
  const ModuleBasis& basis() const;
  Vec normal_form(const Vec& v) const;
  bool is_zero(const Vec& v) const;
  Vec zero() const { return Vec(rank(), Polynomial(ring())); }
  Vec unit(size_t i) const;
  std::string render(const Vec& v) const;

  // Tensor modules: generator (i, j) sits at index i * right.rank() + j.
  size_t tensor_index(size_t i, size_t j) const { return i * right_->rank() + j; }
  // Wedge modules: generator k is left.gen(pair.first) ^ left.gen(pair.second).
  const std::vector<std::pair<size_t, size_t>>& wedge_pairs() const { return wedge_pairs_; }
  int wedge_index(size_t i, size_t j) const;

 private:
  PresentedModule() = default;
  AlgebraPtr base_;
  std::vector<std::string> gens_;
  std::vector<Vec> relations_;
  ModKind kind_ = ModKind::Presented;
  ModulePtr left_, right_;
  std::string name_;
  std::vector<std::pair<size_t, size_t>> wedge_pairs_;
  friend ModulePtr wedge_square(const ModulePtr&);
  mutable std::once_flag once_;
  mutable std::optional<ModuleBasis> basis_;
};

struct ModuleElement {
  ModulePtr owner;
  Vec coeffs;  // module normal form
  std::string to_string() const { return owner->render(coeffs); }
  bool operator==(const ModuleElement& o) const { return owner == o.owner && coeffs == o.coeffs; }
};

ModuleElement make_module_element(const ModulePtr& m, const Vec& v);
bool element_is_zero(const ModuleElement& e);

ModulePtr free_module(const AlgebraPtr& a, size_t n, const std::string& prefix = "e");
ModulePtr make_module(const AlgebraPtr& a, std::vector<std::string> gens, std::vector<Vec> relations,
                      std::string name = {});
// Relations given as strings like "x*e1 - y*e2".
ModulePtr make_module(const AlgebraPtr& a, std::vector<std::string> gens,
                      const std::vector<std::string>& relations, std::string name = {});
ModulePtr kahler_module(const AlgebraPtr& a);
// d(a) as a coefficient vector in kahler_module(A) (unreduced).
Vec differential(const Polynomial& a);
ModuleElement universal_derivation(const ModulePtr& omega, const Polynomial& a);
ModulePtr tensor_modules(const ModulePtr& m, const ModulePtr& n);
ModulePtr wedge_square(const ModulePtr& omega);
// omega: (Omega (x) Omega) -> Omega^2; `tensor` must be tensor_modules(omega, omega).
Vec wedge_map(const ModulePtr& tensor, const ModulePtr& wedge, const Vec& v);
// B (x)_A M along f: A -> B: same generators, relations pushed forward.
ModulePtr base_change(const ModulePtr& m, const AlgebraMorphism& f);
Vec push_vec(const Vec& v, const AlgebraMorphism& f);

// v (x) w for v in M, w in N, as an element of tensor_modules(M, N).
Vec tensor_vec(const ModulePtr& t, const Vec& v, const Vec& w);
Vec scale(const Vec& v, const Polynomial& a);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);

// A-linear map given by generator images.
struct ModuleMap {
  ModulePtr dom, cod;
  std::vector<Vec> images;
  Vec apply(const Vec& v) const;
};
// Checks that relations of dom map to zero.
ModuleMap make_module_map(const ModulePtr& dom, const ModulePtr& cod, std::vector<Vec> images);

// Parses "2*x*e1 - y*e2" style sums into a coefficient vector of m.
Vec parse_module_sum(const std::string& s, const ModulePtr& m);

}  // namespace kcx
