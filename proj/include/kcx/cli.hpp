#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kcx/curvature_torsion.hpp"

namespace kcx::cli {

// ---------------- workspace ----------------

struct AlgebraDecl {
  std::string name;
  std::vector<std::string> vars, rels;
  AlgebraPtr alg;
};

enum class ModuleForm { Kahler, Free, Gens };
struct ModuleDecl {
  std::string name, algebra;
  ModuleForm form = ModuleForm::Kahler;
  size_t free_rank = 0;
  ModulePtr module;
};

struct ConnectionDecl {
  std::string name, module;
  std::vector<std::pair<std::string, std::string>> images;  // as written
  std::optional<Connection> conn;  // absent when rejected
  std::string relation, residue;   // rejection witness
};

struct MorphismDecl {
  std::string name, dom, cod;
  std::vector<std::pair<std::string, std::string>> images;
  AlgebraMorphism map;
};

struct GlueDecl {
  std::string chart1, var1, chart2, var2, transition, inverse, connection1, connection2;
};

struct Workspace {
  uint32_t characteristic_override = 0;
  bool override_char = false;
  std::vector<AlgebraDecl> algebras;
  std::vector<ModuleDecl> modules;
  std::vector<ConnectionDecl> connections;
  std::vector<MorphismDecl> morphisms;
  std::optional<GlueDecl> glue;
  std::map<std::string, AlgebraPtr> localized;  // "NAME[VAR]"

  // NAME or NAME[VAR].
  AlgebraPtr algebra(const std::string& ref);
  // A declared module, Omega(ALG), or bare Omega for the first algebra.
  ModulePtr module(const std::string& ref);
  const ConnectionDecl* connection(const std::string& name) const;
  const MorphismDecl* morphism(const std::string& name) const;
};

Workspace parse_workspace(const std::string& text, std::optional<uint32_t> char_override = {});
Workspace parse_input_file(const std::string& path, std::optional<uint32_t> char_override = {});
// Canonical text: parsing it again yields the same rendering.
std::string render_workspace(const Workspace& ws);

// ---------------- reports ----------------

struct CheckEntry {
  std::string id;
  std::string status;  // pass, fail, info
  std::string witness, residue;
};

struct SolverSummary {
  std::string status;  // empty, unique, family
  size_t dim = 0;
  std::vector<std::string> detail;  // text output only
};

struct Report {
  std::string command;
  std::vector<CheckEntry> checks;
  std::optional<SolverSummary> solver;
  void add(std::string id, bool pass, std::string witness = {}, std::string residue = {});
  void info(std::string id, std::string witness = {}, std::string residue = {});
  int exit_code() const;
};

std::string emit_report(const Report& r, bool json);

// ---------------- commands ----------------

struct Options {
  std::string file;
  std::optional<unsigned> degree;
  std::optional<uint32_t> characteristic;
  std::optional<std::string> connection, module;
};

Report check_command(Workspace& ws, const Options& o);
Report solve_command(Workspace& ws, const Options& o);
Report curvature_command(Workspace& ws, const Options& o);
Report torsion_command(Workspace& ws, const Options& o);
Report convert_command(Workspace& ws, const Options& o);
Report glue_command(Workspace& ws, const Options& o);

std::vector<std::string> gallery_ids();
Report run_gallery();

// Full entry point; returns the process exit code.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kcx::cli
