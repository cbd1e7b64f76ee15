#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kcx/tangent.hpp"

namespace kcx {

// A connection on M over A, stored by its Christoffel data: Gamma(g_j) in Omega(A) (x) M.
// Omega (x) M generator (i, k) = d(x_i) @ g_k sits at index i * rank(M) + k.
struct Connection {
  ModulePtr module;
  ModulePtr omega;     // kahler_module(A)
  ModulePtr omega_m;   // tensor_modules(omega, module)
  std::vector<Vec> gamma;  // normal forms
  std::vector<Vec> raw;    // as supplied, coefficients reduced in A
  std::vector<Vec> certificate;  // per relation of M, all zero
  std::string name;
};

class MembershipFailure : public std::runtime_error {
 public:
  MembershipFailure(const std::string& what, std::string generator, std::string term)
      : std::runtime_error(what), generator(std::move(generator)), term(std::move(term)) {}
  std::string generator, term;
};

class SectionRetractionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws WellDefinednessFailure whose residue is the unreduced Leibniz residue.
Connection make_connection(const ModulePtr& m, std::vector<Vec> images, std::string name = {},
                           ModulePtr omega = nullptr);
// Images written as "x*d(y)@e1 - d(x)@e2" sums, one per module generator.
Connection make_connection(const ModulePtr& m, const std::vector<std::string>& images,
                           std::string name = {}, ModulePtr omega = nullptr);
Vec apply_connection(const Connection& c, const Vec& e);
// Same, without reducing in Omega (x) M.
Vec apply_connection_formal(const Connection& c, const Vec& e);
bool connection_equal(const Connection& a, const Connection& b);
std::string render_gamma(const Connection& c, size_t j);

// ---- horizontal and vertical forms ----

// Omega (x) M element as a bidegree (1, 1) polynomial of T(A) (x)_A S, and back.
Polynomial omega_m_to_poly(const BundleContext& ctx, const Connection& c, const Vec& v);
Vec poly_to_omega_m(const BundleContext& ctx, const ModulePtr& omega_m, const Polynomial& p,
                    const std::string& generator);

AlgebraMorphism to_horizontal(const BundleContext& ctx, const Connection& c);
AlgebraMorphism to_vertical(const BundleContext& ctx, const Connection& c);

struct AxiomEntry {
  std::string id;
  bool pass = true;
  std::string witness, lhs, rhs;
  std::string residue;  // lhs - rhs at the witness
};
struct AxiomReport {
  std::vector<AxiomEntry> entries;
  bool all_pass() const;
  const AxiomEntry* find(const std::string& id) const;
};

// H.1-H.4, H.U (H after U is the identity).
AxiomReport verify_horizontal_axioms(const BundleContext& ctx, const AlgebraMorphism& h);
// K.1-K.4.
AxiomReport verify_vertical_axioms(const BundleContext& ctx, const AlgebraMorphism& k);
// All of the above plus C.1, C.2.
AxiomReport verify_connection_axioms(const BundleContext& ctx, const AlgebraMorphism& k,
                                     const AlgebraMorphism& h);

// Throws AxiomFailure if H fails an axiom, MembershipFailure if H(d(m)) leaves Omega (x) M.
class AxiomFailure : public std::runtime_error {
 public:
  AxiomFailure(const std::string& what, AxiomReport report)
      : std::runtime_error(what), report(std::move(report)) {}
  AxiomReport report;
};
Connection from_horizontal(const BundleContext& ctx, const AlgebraMorphism& h, ModulePtr omega = nullptr);
// K = { 1 -_{p_S} U H }.
AlgebraMorphism vertical_from_horizontal(const BundleContext& ctx, const AlgebraMorphism& h);

// ---- solvers and constructions ----

// Unknowns: coefficient of monomial mu in slot (i, k) of Gamma(g_j).
struct ConnectionSpace {
  ModulePtr module, omega, omega_m;
  std::vector<Monomial> monomials;
  AffineSolutionSpace space;
  // Gamma for an assignment of the unknowns.
  std::vector<Vec> gamma_of(const std::vector<Scalar>& x) const;
  // Coordinates of a connection's supplied data, if expressible.
  std::optional<std::vector<Scalar>> coordinates(const Connection& c) const;
  bool contains(const Connection& c) const;
};
ConnectionSpace solve_connection_space(const ModulePtr& m, unsigned degree_bound);

Connection free_canonical_connection(const AlgebraPtr& a, size_t n);
Connection pullback_connection(const Connection& c, const AlgebraMorphism& f);
// s: M' -> M, r: M -> M' with r s = 1.
Connection retract_connection(const Connection& c, const ModuleMap& s, const ModuleMap& r);

// Gluing of connections on Omega over two charts along an isomorphism of localizations.
struct GlueData {
  AlgebraPtr chart1, chart2;  // unlocalized charts
  std::string var1, var2;     // inverted generators
  AlgebraMorphism transition; // chart1[var1^-1] -> chart2[var2^-1]
  AlgebraMorphism inverse;
  std::optional<Connection> conn1, conn2;  // unknown when absent
};
struct GlueResult {
  bool solved = false;       // unknowns present: `space` is meaningful
  AxiomReport report;        // concrete connections: one entry per Omega generator
  AffineSolutionSpace space;
};
// Unknown charts use Christoffel polynomials of degree <= window in the chart variables.
GlueResult glued_connection_check(const GlueData& g, unsigned window = 6);

}  // namespace kcx
