#include <fstream>
#include <set>
#include <sstream>

#include "kcx/cli.hpp"

namespace kcx::cli {

namespace {

struct Item {
  std::string text;
  int line = 0, col = 0;
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = trim(part);
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

class Scanner {
 public:
  explicit Scanner(const std::string& text) : src_(text) {
    // comments become blanks so columns stay put
    bool in_comment = false;
    for (char& c : src_) {
      if (c == '\n') in_comment = false;
      else if (c == '#') in_comment = true;
      if (in_comment) c = ' ';
    }
  }

  bool at_end() {
    skip_ws();
    return pos_ >= src_.size();
  }
  int line() const { return line_; }
  int col() const { return col_; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

  // Header text up to '{', then the body split into items.
  Item header() {
    skip_ws();
    Item it{{}, line_, col_};
    while (pos_ < src_.size() && src_[pos_] != '{') it.text += advance();
    if (pos_ >= src_.size()) fail("expected '{'");
    advance();
    it.text = trim(it.text);
    return it;
  }

  std::vector<Item> body() {
    std::vector<Item> items;
    Item cur;
    int depth = 0;
    auto flush = [&] {
      std::string t = trim(cur.text);
      if (!t.empty()) {
        // position of the first non-blank character
        size_t lead = cur.text.find_first_not_of(" \t\r\n");
        int l = cur.line, c = cur.col;
        for (size_t i = 0; i < lead; ++i) {
          if (cur.text[i] == '\n') { ++l; c = 1; } else ++c;
        }
        items.push_back({t, l, c});
      }
      cur = Item{{}, line_, col_};
    };
    cur = Item{{}, line_, col_};
    while (true) {
      if (pos_ >= src_.size()) fail("unterminated block, expected '}'");
      char ch = src_[pos_];
      if (ch == '}' && depth == 0) {
        flush();
        advance();
        return items;
      }
      if (ch == '(') ++depth;
      if (ch == ')') --depth;
      if ((ch == ';' || ch == '\n') && depth == 0) {
        advance();
        flush();
        continue;
      }
      cur.text += advance();
    }
  }

 private:
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') { ++line_; col_ = 1; } else ++col_;
    return c;
  }
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }
  std::string src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

[[noreturn]] void fail_at(const Item& it, const std::string& msg) { throw ParseError(msg, it.line, it.col); }

// "key: value" -> (key, value); no colon gives (text, "").
std::pair<std::string, std::string> key_value(const Item& it) {
  size_t c = it.text.find(':');
  if (c == std::string::npos) return {trim(it.text), {}};
  return {trim(it.text.substr(0, c)), trim(it.text.substr(c + 1))};
}

// "lhs -> rhs" split at the first top-level arrow.
std::pair<std::string, std::string> arrow(const Item& it) {
  int depth = 0;
  for (size_t i = 0; i + 1 < it.text.size(); ++i) {
    char ch = it.text[i];
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (depth == 0 && ch == '-' && it.text[i + 1] == '>')
      return {trim(it.text.substr(0, i)), trim(it.text.substr(i + 2))};
  }
  fail_at(it, "expected 'GEN -> VALUE'");
}

// Runs f, turning library errors into parse errors at the item.
template <class F>
auto guarded(const Item& it, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw ParseError(e.detail, it.line, it.col + e.col - 1);
  } catch (const WellDefinednessFailure& e) {
    fail_at(it, std::string(e.what()) + " (residue " + e.residue + ")");
  } catch (const std::runtime_error& e) {
    fail_at(it, e.what());
  }
}

bool valid_name(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

}  // namespace

// ---------------- lookups ----------------

AlgebraPtr Workspace::algebra(const std::string& ref) {
  std::string r = trim(ref);
  size_t br = r.find('[');
  std::string base = trim(r.substr(0, br));
  AlgebraPtr a;
  for (auto& d : algebras)
    if (d.name == base) a = d.alg;
  if (!a) throw std::runtime_error("unknown algebra '" + base + "'");
  if (br == std::string::npos) return a;
  if (r.back() != ']') throw std::runtime_error("malformed localization '" + r + "'");
  std::string var = trim(r.substr(br + 1, r.size() - br - 2));
  std::string key = base + "[" + var + "]";
  auto it = localized.find(key);
  if (it != localized.end()) return it->second;
  AlgebraPtr l = localize(a, var);
  localized.emplace(key, l);
  return l;
}

ModulePtr Workspace::module(const std::string& ref) {
  std::string r = trim(ref);
  for (auto& d : modules)
    if (d.name == r) return d.module;
  if (r == "Omega") {
    if (algebras.empty()) throw std::runtime_error("Omega needs an algebra");
    return kahler_module(algebras.front().alg);
  }
  if (r.rfind("Omega(", 0) == 0 && r.back() == ')')
    return kahler_module(algebra(r.substr(6, r.size() - 7)));
  throw std::runtime_error("unknown module '" + r + "'");
}

const ConnectionDecl* Workspace::connection(const std::string& name) const {
  for (auto& d : connections)
    if (d.name == name) return &d;
  return nullptr;
}

const MorphismDecl* Workspace::morphism(const std::string& name) const {
  for (auto& d : morphisms)
    if (d.name == name) return &d;
  return nullptr;
}

// ---------------- parsing ----------------

Workspace parse_workspace(const std::string& text, std::optional<uint32_t> char_override) {
  Workspace ws;
  if (char_override) {
    ws.override_char = true;
    ws.characteristic_override = *char_override;
  }
  Scanner sc(text);
  std::set<std::string> names;
  auto claim = [&](const Item& it, const std::string& name) {
    if (!valid_name(name)) fail_at(it, "invalid name '" + name + "'");
    if (!names.insert(name).second) fail_at(it, "redefinition of '" + name + "'");
  };

  while (!sc.at_end()) {
    Item head = sc.header();
    std::string kw = head.text.substr(0, head.text.find_first_of(" \t"));
    std::string rest = trim(head.text.substr(kw.size()));
    std::vector<Item> items = sc.body();

    if (kw == "algebra") {
      claim(head, rest);
      AlgebraDecl d;
      d.name = rest;
      uint32_t p = 0;
      for (auto& it : items) {
        auto [k, v] = key_value(it);
        if (k == "char") {
          try {
            p = static_cast<uint32_t>(std::stoul(v));
          } catch (const std::exception&) {
            fail_at(it, "characteristic must be a number");
          }
        } else if (k == "vars") {
          d.vars = split_list(v);
        } else if (k == "rel") {
          d.rels.push_back(v);
        } else {
          fail_at(it, "unknown algebra entry '" + k + "'");
        }
      }
      if (ws.override_char) p = ws.characteristic_override;
      for (auto& v : d.vars)
        if (!valid_name(v)) fail_at(head, "invalid variable name '" + v + "'");
      // relations are parsed one by one for positions
      guarded(head, [&] { return make_algebra(p, d.vars, {}, d.name); });
      for (size_t i = 0, r = 0; i < items.size(); ++i)
        if (key_value(items[i]).first == "rel") {
          const Item& it = items[i];
          auto ring = make_ring(p, d.vars);
          guarded(it, [&] { return parse_poly(d.rels[r], ring); });
          ++r;
        }
      d.alg = guarded(head, [&] { return make_algebra(p, d.vars, d.rels, d.name); });
      ws.algebras.push_back(std::move(d));
    } else if (kw == "module") {
      size_t over = rest.find(" over ");
      if (over == std::string::npos) fail_at(head, "expected 'module NAME over ALG'");
      ModuleDecl d;
      d.name = trim(rest.substr(0, over));
      d.algebra = trim(rest.substr(over + 6));
      claim(head, d.name);
      AlgebraPtr a = guarded(head, [&] { return ws.algebra(d.algebra); });
      std::vector<std::string> gens, rels;
      bool kind_set = false;
      for (auto& it : items) {
        auto [k, v] = key_value(it);
        if (k == "kahler") {
          d.form = ModuleForm::Kahler;
          kind_set = true;
        } else if (k == "free") {
          d.form = ModuleForm::Free;
          try {
            d.free_rank = std::stoul(v);
          } catch (const std::exception&) {
            fail_at(it, "free rank must be a number");
          }
          kind_set = true;
        } else if (k == "gens") {
          d.form = ModuleForm::Gens;
          gens = split_list(v);
          kind_set = true;
        } else if (k == "rel") {
          rels.push_back(v);
        } else {
          fail_at(it, "unknown module entry '" + k + "'");
        }
      }
      if (!kind_set) fail_at(head, "module needs one of kahler, free, gens");
      if (d.form != ModuleForm::Gens && !rels.empty()) fail_at(head, "relations need explicit gens");
      if (d.form == ModuleForm::Kahler) d.module = kahler_module(a);
      else if (d.form == ModuleForm::Free) d.module = free_module(a, d.free_rank);
      else {
        auto shell = make_module(a, gens, std::vector<Vec>{}, d.name);
        std::vector<Vec> rv;
        size_t r = 0;
        for (auto& it : items)
          if (key_value(it).first == "rel")
            rv.push_back(guarded(it, [&] { return parse_module_sum(rels[r++], shell); }));
        d.module = make_module(a, gens, rv, d.name);
      }
      ws.modules.push_back(std::move(d));
    } else if (kw == "connection") {
      size_t on = rest.find(" on ");
      if (on == std::string::npos) fail_at(head, "expected 'connection NAME on MODULE'");
      ConnectionDecl d;
      d.name = trim(rest.substr(0, on));
      d.module = trim(rest.substr(on + 4));
      claim(head, d.name);
      ModulePtr m = guarded(head, [&] { return ws.module(d.module); });
      std::vector<std::string> ims(m->rank(), "0");
      std::vector<bool> seen(m->rank(), false);
      for (auto& it : items) {
        auto [g, v] = arrow(it);
        int k = m->index_of(g);
        if (k < 0) fail_at(it, "unknown generator '" + g + "' of " + d.module);
        if (seen[static_cast<size_t>(k)]) fail_at(it, "generator '" + g + "' given twice");
        seen[static_cast<size_t>(k)] = true;
        ims[static_cast<size_t>(k)] = v;
        d.images.emplace_back(g, v);
        // syntax is checked eagerly
        std::vector<std::string> probe(m->rank(), "0");
        probe[static_cast<size_t>(k)] = v;
        try {
          make_connection(m, probe, d.name);
        } catch (const WellDefinednessFailure&) {
        } catch (const ParseError& e) {
          throw ParseError(e.detail, it.line, it.col);
        } catch (const std::runtime_error& e) {
          fail_at(it, e.what());
        }
      }
      try {
        d.conn = make_connection(m, ims, d.name);
      } catch (const WellDefinednessFailure& e) {
        d.relation = e.relation;
        d.residue = e.residue;
      }
      ws.connections.push_back(std::move(d));
    } else if (kw == "morphism") {
      size_t colon = rest.find(':'), arr = rest.find("->");
      if (colon == std::string::npos || arr == std::string::npos || arr < colon)
        fail_at(head, "expected 'morphism NAME : ALG -> ALG'");
      MorphismDecl d;
      d.name = trim(rest.substr(0, colon));
      d.dom = trim(rest.substr(colon + 1, arr - colon - 1));
      d.cod = trim(rest.substr(arr + 2));
      claim(head, d.name);
      AlgebraPtr dom = guarded(head, [&] { return ws.algebra(d.dom); });
      AlgebraPtr cod = guarded(head, [&] { return ws.algebra(d.cod); });
      std::map<std::string, std::string> ims;
      for (auto& it : items) {
        auto [g, v] = arrow(it);
        if (dom->index_of(g) < 0) fail_at(it, "unknown generator '" + g + "' of " + d.dom);
        if (!ims.emplace(g, v).second) fail_at(it, "generator '" + g + "' given twice");
        guarded(it, [&] { return parse_poly(v, cod->ring()); });
        d.images.emplace_back(g, v);
      }
      for (auto& g : dom->names())
        if (!ims.count(g)) fail_at(head, "missing image for '" + g + "'");
      d.map = guarded(head, [&] { return make_morphism(dom, cod, ims, d.name); });
      ws.morphisms.push_back(std::move(d));
    } else if (kw == "glue") {
      if (!rest.empty()) fail_at(head, "glue takes no name");
      if (ws.glue) fail_at(head, "only one glue block is allowed");
      GlueDecl g;
      for (auto& it : items) {
        auto [k, v] = key_value(it);
        auto chart = [&](std::string& alg, std::string& var) {
          size_t at = v.find(" at ");
          if (at == std::string::npos) fail_at(it, "expected 'ALG at VAR'");
          alg = trim(v.substr(0, at));
          var = trim(v.substr(at + 4));
          AlgebraPtr a = guarded(it, [&] { return ws.algebra(alg); });
          if (a->index_of(var) < 0) fail_at(it, "unknown variable '" + var + "'");
        };
        auto morph = [&](std::string& dst) {
          if (!ws.morphism(v)) fail_at(it, "unknown morphism '" + v + "'");
          dst = v;
        };
        auto conn = [&](std::string& dst) {
          if (!ws.connection(v)) fail_at(it, "unknown connection '" + v + "'");
          dst = v;
        };
        if (k == "chart1") chart(g.chart1, g.var1);
        else if (k == "chart2") chart(g.chart2, g.var2);
        else if (k == "transition") morph(g.transition);
        else if (k == "inverse") morph(g.inverse);
        else if (k == "connection1") conn(g.connection1);
        else if (k == "connection2") conn(g.connection2);
        else fail_at(it, "unknown glue entry '" + k + "'");
      }
      if (g.chart1.empty() || g.chart2.empty() || g.transition.empty() || g.inverse.empty())
        fail_at(head, "glue needs chart1, chart2, transition and inverse");
      ws.glue = g;
    } else {
      fail_at(head, "unknown declaration '" + kw + "'");
    }
  }
  return ws;
}

Workspace parse_input_file(const std::string& path, std::optional<uint32_t> char_override) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_workspace(ss.str(), char_override);
}

// ---------------- rendering ----------------

std::string render_workspace(const Workspace& ws) {
  std::ostringstream out;
  for (auto& d : ws.algebras) {
    out << "algebra " << d.name << " {\n  char: " << d.alg->characteristic() << ";\n  vars: ";
    for (size_t i = 0; i < d.vars.size(); ++i) out << (i ? ", " : "") << d.vars[i];
    out << ";\n";
    for (auto& r : d.alg->relations()) out << "  rel: " << d.alg->render(r) << ";\n";
    out << "}\n";
  }
  for (auto& d : ws.modules) {
    out << "module " << d.name << " over " << d.algebra << " {";
    if (d.form == ModuleForm::Kahler) out << " kahler; }\n";
    else if (d.form == ModuleForm::Free) out << " free: " << d.free_rank << "; }\n";
    else {
      out << "\n  gens: ";
      for (size_t i = 0; i < d.module->rank(); ++i) out << (i ? ", " : "") << d.module->gens()[i];
      out << ";\n";
      for (auto& r : d.module->relations()) out << "  rel: " << d.module->render(r) << ";\n";
      out << "}\n";
    }
  }
  for (auto& d : ws.connections) {
    out << "connection " << d.name << " on " << d.module << " {\n";
    if (d.conn) {
      for (size_t j = 0; j < d.conn->module->rank(); ++j)
        out << "  " << d.conn->module->gens()[j] << " -> " << render_gamma(*d.conn, j) << ";\n";
    } else {
      for (auto& [g, v] : d.images) out << "  " << g << " -> " << v << ";\n";
    }
    out << "}\n";
  }
  for (auto& d : ws.morphisms) {
    out << "morphism " << d.name << " : " << d.dom << " -> " << d.cod << " {\n";
    for (size_t i = 0; i < d.map.dom->ngens(); ++i)
      out << "  " << d.map.dom->names()[i] << " -> " << d.map.cod->render(d.map.images[i]) << ";\n";
    out << "}\n";
  }
  if (ws.glue) {
    const GlueDecl& g = *ws.glue;
    out << "glue {\n  chart1: " << g.chart1 << " at " << g.var1 << ";\n  chart2: " << g.chart2
        << " at " << g.var2 << ";\n  transition: " << g.transition << ";\n  inverse: " << g.inverse
        << ";\n";
    if (!g.connection1.empty()) out << "  connection1: " << g.connection1 << ";\n";
    if (!g.connection2.empty()) out << "  connection2: " << g.connection2 << ";\n";
    out << "}\n";
  }
  return out.str();
}

}  // namespace kcx::cli
