#include "kcx/cli.hpp"

#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

namespace kcx::cli {

// ---------------- reports ----------------

void Report::add(std::string id, bool pass, std::string witness, std::string residue) {
  checks.push_back({std::move(id), pass ? "pass" : "fail", std::move(witness), std::move(residue)});
}

void Report::info(std::string id, std::string witness, std::string residue) {
  checks.push_back({std::move(id), "info", std::move(witness), std::move(residue)});
}

int Report::exit_code() const {
  for (auto& c : checks)
    if (c.status == "fail") return 1;
  return 0;
}

std::string emit_report(const Report& r, bool json) {
  if (json) {
    nlohmann::ordered_json j;
    j["command"] = r.command;
    j["checks"] = nlohmann::ordered_json::array();
    for (auto& c : r.checks)
      j["checks"].push_back({{"id", c.id}, {"status", c.status}, {"witness", c.witness}, {"residue", c.residue}});
    if (r.solver) j["solver"] = {{"status", r.solver->status}, {"dim", r.solver->dim}};
    else j["solver"] = nullptr;
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "kcx " << r.command << "\n";
  size_t npass = 0, nfail = 0, ninfo = 0;
  for (auto& c : r.checks) {
    std::string tag = c.status == "pass" ? "PASS" : c.status == "fail" ? "FAIL" : "INFO";
    (c.status == "pass" ? npass : c.status == "fail" ? nfail : ninfo)++;
    out << tag << "  " << c.id;
    if (!c.witness.empty()) out << "  [" << c.witness << "]";
    if (!c.residue.empty()) out << "  " << c.residue;
    out << "\n";
  }
  if (r.solver) {
    out << "solver: " << r.solver->status << " (dim " << r.solver->dim << ")\n";
    for (auto& d : r.solver->detail) out << "  " << d << "\n";
  }
  out << npass << " pass, " << nfail << " fail, " << ninfo << " info\n";
  return out.str();
}

// ---------------- commands ----------------

namespace {

std::vector<const ConnectionDecl*> selected(const Workspace& ws, const Options& o) {
  std::vector<const ConnectionDecl*> out;
  if (o.connection) {
    const ConnectionDecl* d = ws.connection(*o.connection);
    if (!d) throw std::invalid_argument("unknown connection '" + *o.connection + "'");
    out.push_back(d);
  } else {
    for (auto& d : ws.connections) out.push_back(&d);
  }
  return out;
}

// False (with a failing entry) when the connection was rejected at load.
bool accepted(Report& r, const ConnectionDecl& d) {
  if (d.conn) return true;
  r.add(d.name + ":well-defined", false, d.relation, d.residue);
  return false;
}

void add_correspondence(Report& r, const std::string& prefix, const std::vector<CorrespondenceEntry>& es,
                        bool halve) {
  for (auto& e : es) {
    r.add(prefix + ":psi:" + e.generator, e.psi.empty(), {}, e.psi);
    r.add(prefix + ":phi:" + e.generator, e.phi.empty(), {}, e.phi);
    if (halve) r.add(prefix + ":half:" + e.generator, e.half.empty(), {}, e.half);
  }
}

SolverSummary summarize(const AffineSolutionSpace& s) {
  SolverSummary out{s.status(), s.empty ? 0 : s.dim(), {}};
  out.detail.push_back(std::to_string(s.unknowns.size()) + " unknowns");
  if (!s.empty) {
    std::string nz;
    for (size_t u = 0; u < s.particular.size(); ++u)
      if (!s.particular[u].is_zero()) nz += " " + s.unknowns[u] + "=" + s.particular[u].to_string();
    out.detail.push_back("particular:" + (nz.empty() ? std::string(" all zero") : nz));
  }
  return out;
}

}  // namespace

Report check_command(Workspace& ws, const Options& o) {
  Report r;
  for (const ConnectionDecl* d : selected(ws, o)) {
    if (!accepted(r, *d)) continue;
    r.add(d->name + ":well-defined", true);
    const Connection& c = *d->conn;
    try {
      BundleContext ctx(c.module);
      AlgebraMorphism k = to_vertical(ctx, c), h = to_horizontal(ctx, c);
      for (auto& e : verify_connection_axioms(ctx, k, h).entries)
        r.add(d->name + ":" + e.id, e.pass, e.witness, e.residue);
      bool back = connection_equal(from_horizontal(ctx, h), c) &&
                  morphism_equal(vertical_from_horizontal(ctx, h), k);
      r.add(d->name + ":roundtrip", back);
    } catch (const std::runtime_error& e) {
      r.add(d->name + ":axioms", false, {}, e.what());
    }
  }
  return r;
}

Report solve_command(Workspace& ws, const Options& o) {
  Report r;
  ModulePtr m;
  if (o.module) m = ws.module(*o.module);
  else if (!ws.modules.empty()) m = ws.modules.front().module;
  else m = ws.module("Omega");
  const unsigned deg = o.degree.value_or(2);
  ConnectionSpace sp = solve_connection_space(m, deg);
  r.solver = summarize(sp.space);
  return r;
}

Report curvature_command(Workspace& ws, const Options& o) {
  Report r;
  for (const ConnectionDecl* d : selected(ws, o)) {
    if (!accepted(r, *d)) continue;
    CurvatureResult res = check_curvature_correspondence(*d->conn);
    const bool halve = d->conn->module->base()->characteristic() != 2;
    r.info(d->name + ":flat", res.flat ? "flat" : "curved");
    for (size_t j = 0; j < res.curvature.size(); ++j)
      r.info(d->name + ":curvature:" + d->conn->module->gens()[j], {}, res.render(j));
    add_correspondence(r, d->name, res.residuals, halve);
    if (halve) r.add(d->name + ":tangent-flat", res.flat == res.tangent_flat);
  }
  return r;
}

Report torsion_command(Workspace& ws, const Options& o) {
  Report r;
  for (const ConnectionDecl* d : selected(ws, o)) {
    if (d->conn && d->conn->module->kind() != ModKind::Kahler) {
      if (o.connection) r.add(d->name + ":kahler", false, {}, "module is not Omega(A)");
      continue;
    }
    if (!accepted(r, *d)) continue;
    TorsionResult res = check_torsion_correspondence(*d->conn);
    const bool halve = d->conn->module->base()->characteristic() != 2;
    r.info(d->name + ":torsion-free", res.torsion_free ? "torsion-free" : "torsion");
    for (size_t i = 0; i < res.torsion.size(); ++i)
      r.info(d->name + ":torsion:" + d->conn->module->gens()[i], {}, res.render(i));
    r.add(d->name + ":routes", res.routes_agree, res.route_witness);
    add_correspondence(r, d->name, res.residuals, halve);
    if (res.torsion_free) r.add(d->name + ":horizontal-symmetric", res.horizontal_symmetric);
  }
  return r;
}

Report convert_command(Workspace& ws, const Options& o) {
  Report r;
  for (const ConnectionDecl* d : selected(ws, o)) {
    if (!accepted(r, *d)) continue;
    const Connection& c = *d->conn;
    BundleContext ctx(c.module);
    AlgebraMorphism h = to_horizontal(ctx, c), k = to_vertical(ctx, c);
    for (size_t i = 0; i < h.dom->ngens(); ++i)
      r.info(d->name + ":H:" + h.dom->display_names()[i], {}, h.cod->render(h.images[i]));
    for (size_t i = 0; i < k.dom->ngens(); ++i)
      r.info(d->name + ":K:" + k.dom->display_names()[i], {}, k.cod->render(k.images[i]));
    Connection back = from_horizontal(ctx, h);
    r.add(d->name + ":recover-connection", connection_equal(back, c));
    r.add(d->name + ":recover-vertical", morphism_equal(vertical_from_horizontal(ctx, h), k));
  }
  return r;
}

Report glue_command(Workspace& ws, const Options& o) {
  Report r;
  if (!ws.glue) throw std::invalid_argument("no glue block in the input");
  const GlueDecl& gd = *ws.glue;
  GlueData g;
  g.chart1 = ws.algebra(gd.chart1);
  g.chart2 = ws.algebra(gd.chart2);
  g.var1 = gd.var1;
  g.var2 = gd.var2;
  g.transition = ws.morphism(gd.transition)->map;
  g.inverse = ws.morphism(gd.inverse)->map;
  for (auto [name, slot] : {std::pair{gd.connection1, &g.conn1}, std::pair{gd.connection2, &g.conn2}}) {
    if (name.empty()) continue;
    const ConnectionDecl* d = ws.connection(name);
    if (!accepted(r, *d)) return r;
    *slot = d->conn;
  }
  try {
    GlueResult res = glued_connection_check(g, o.degree.value_or(6));
    if (res.solved) r.solver = summarize(res.space);
    for (auto& e : res.report.entries) r.add("glue:" + e.witness, e.pass, e.witness, e.residue);
  } catch (const BoundaryMismatch& e) {
    r.add("glue:boundary", false, {}, e.what());
  }
  return r;
}

// ---------------- entry point ----------------

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"kcx: module connections over affine schemes"};
  app.name("kcx");
  std::string cmd;
  Options o;
  bool json = false;
  app.add_option("command", cmd, "check | solve | curvature | torsion | convert | glue | gallery")
      ->required()
      ->check(CLI::IsMember({"check", "solve", "curvature", "torsion", "convert", "glue", "gallery"}));
  app.add_option("file", o.file, "definition file");
  app.add_option("--degree", o.degree, "degree bound or window");
  app.add_option("--char", o.characteristic, "override every characteristic");
  app.add_flag("--json", json, "json report");
  app.add_option("--connection", o.connection, "restrict to one connection");
  app.add_option("--module", o.module, "module for solve");
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "kcx: " << e.what() << "\n";
    return 2;
  }

  std::string echo;
  for (auto& a : args) echo += (echo.empty() ? "" : " ") + a;
  Report rep;
  try {
    if (cmd == "gallery") {
      rep = run_gallery();
    } else {
      if (o.file.empty()) {
        err << "kcx: " << cmd << " needs a definition file\n";
        return 2;
      }
      Workspace ws = parse_input_file(o.file, o.characteristic);
      if (cmd == "check") rep = check_command(ws, o);
      else if (cmd == "solve") rep = solve_command(ws, o);
      else if (cmd == "curvature") rep = curvature_command(ws, o);
      else if (cmd == "torsion") rep = torsion_command(ws, o);
      else if (cmd == "convert") rep = convert_command(ws, o);
      else rep = glue_command(ws, o);
    }
  } catch (const ParseError& e) {
    err << "kcx: " << o.file << ": " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "kcx: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    err << "kcx: " << e.what() << "\n";
    return 2;
  }
  rep.command = echo;
  out << emit_report(rep, json);
  return rep.exit_code();
}

}  // namespace kcx::cli
