#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kcx/connections.hpp"

namespace kcx {

class ModuleNotKahler : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Omega^2 (x) M generator (w, k) sits at index w * rank(M) + k, w indexing wedge_pairs().
struct CurvatureSpaces {
  ModulePtr wedge;    // Omega^2(A)
  ModulePtr wedge_m;  // Omega^2(A) (x) M
};
CurvatureSpaces curvature_spaces(const Connection& c);

// (omega (x) 1)(1 (x) nabla) nabla on an arbitrary element of M, unreduced.
Vec curvature_of(const Connection& c, const CurvatureSpaces& sp, const Vec& e);
// omega(nabla(e)) for a connection on Omega, unreduced.
Vec torsion_of(const Connection& c, const ModulePtr& wedge, const Vec& e);

// psi: Omega^2 (x) M -> T^2(S_A(M)) and phi back. phi reads a representative term by term:
// m d(x_i) d'(x_l) goes to (d(x_i) ^ d(x_l)) (x) m, every other monomial to 0.
Polynomial embed_wedge(const BundleContext& ctx, const ModulePtr& wedge_m, const Vec& v);
Vec project_wedge(const BundleContext& ctx, const ModulePtr& wedge_m, const Polynomial& p);
// Same on Omega^2 -> T^2(A): a d(b)^d(c) -> a d(b)d'(c) - a d'(b)d(c).
Polynomial embed_wedge_hat(const AlgebraPtr& a, const ModulePtr& wedge, const Vec& v);
Vec project_wedge_hat(const AlgebraPtr& a, const ModulePtr& wedge, const Polynomial& p);

// Per module generator; empty strings mean zero residue.
struct CorrespondenceEntry {
  std::string generator;
  std::string psi;   // tangent side minus psi(module side), in T^2
  std::string phi;   // phi(tangent side) minus 2 * module side
  std::string half;  // module side minus phi(tangent side) / 2; skipped in char 2
  bool pass() const { return psi.empty() && phi.empty() && half.empty(); }
};

struct CurvatureResult {
  CurvatureSpaces spaces;
  std::vector<Vec> curvature;  // normal forms, one per generator of M
  bool flat = true;
  std::optional<AlgebraMorphism> tangent;  // C_K : S -> T^2(S)
  bool tangent_flat = true;
  std::vector<CorrespondenceEntry> residuals;
  bool correspondence_holds() const;
  std::string render(size_t j) const { return spaces.wedge_m->render(curvature[j]); }
};

CurvatureResult module_curvature(const Connection& c);
// c_S T(K) K -_q T(K) K.
AlgebraMorphism tangent_curvature(const BundleContext& ctx, const AlgebraMorphism& k);
// Module side, tangent side, and both identities per generator.
CurvatureResult check_curvature_correspondence(const Connection& c);

struct TorsionResult {
  ModulePtr wedge;
  std::vector<Vec> torsion;  // omega(Gamma(d(x_i))), normal forms
  bool torsion_free = true;
  std::optional<AlgebraMorphism> tangent;  // V_K : S_A(Omega) -> T(S_A(Omega))
  std::optional<AlgebraMorphism> tangent_hat;  // V_K followed by T(S_A(Omega)) ~ T^2(A)
  bool routes_agree = true;
  std::string route_witness;
  // H after the swap equals the swap after H (expected whenever torsion_free).
  bool horizontal_symmetric = true;
  std::vector<CorrespondenceEntry> residuals;
  bool correspondence_holds() const;
  std::string render(size_t i) const { return wedge->render(torsion[i]); }
};

TorsionResult module_torsion(const Connection& c);

struct TangentTorsion {
  AlgebraMorphism k_route, h_route;
  bool agree = true;
  std::string witness;
};
// For a connection on Omega(A): c' K -_p K and the bracketing of U H c' -_{p_S} c' U H,
// where c' on T(S_A(Omega)) exchanges m_i and d(x_i).
TangentTorsion tangent_torsion(const BundleContext& ctx, const AlgebraMorphism& k,
                               const AlgebraMorphism& h);
// T(S_A(Omega)) -> T^2(A): x -> x, m_i -> d'(x_i), d(x_i) -> d(x_i), d(m_i) -> d'd(x_i).
AlgebraMorphism torsion_identification(const BundleContext& ctx);
TorsionResult check_torsion_correspondence(const Connection& c);

}  // namespace kcx
