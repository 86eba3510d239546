#include "heq/program.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>

namespace heq {

std::string Stmt::str() const {
  switch (kind) {
    case Kind::Skip:
      return "skip";
    case Kind::Assign:
      return var + " = " + rhs.str();
    case Kind::Havoc:
      return var + " = ?";
    case Kind::Call:
      return "call " + callee;
  }
  return "?";
}

const Procedure* Program::find(const std::string& name) const {
  for (const auto& p : procedures)
    if (p.name == name) return &p;
  return nullptr;
}

const Procedure& Program::main_procedure() const {
  if (auto* p = find(main)) return *p;
  throw std::logic_error("program has no main procedure");
}

const Procedure* Program::owner(const std::string& point) const {
  for (const auto& p : procedures)
    if (std::find(p.nodes.begin(), p.nodes.end(), point) != p.nodes.end()) return &p;
  return nullptr;
}

bool Program::same_shape(const Program& other) const {
  return vars == other.vars && procedures == other.procedures && main == other.main &&
         signature.symbols() == other.signature.symbols();
}

std::string Diagnostic::str() const {
  std::string sev = severity == Severity::Error ? "error" : "warning";
  if (line == 0) return sev + ": " + message;
  return std::to_string(line) + ":" + std::to_string(column) + ": " + sev + ": " + message;
}

namespace {

struct Pos {
  std::size_t line = 1;
  std::size_t column = 1;
};

// one ';'-terminated statement with the source position of every character
struct Chunk {
  std::string text;
  std::vector<Pos> pos;
  Pos start;

  Pos at(std::size_t i) const { return i < pos.size() ? pos[i] : (pos.empty() ? start : pos.back()); }
};

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ParseResult run() {
    auto chunks = split();
    for (const auto& c : chunks) statement(c);
    finish();
    ParseResult out;
    out.diagnostics = std::move(diags_);
    bool failed = std::any_of(out.diagnostics.begin(), out.diagnostics.end(),
                              [](const Diagnostic& d) { return d.severity == Diagnostic::Severity::Error; });
    if (!failed) out.program = std::move(prog_);
    return out;
  }

 private:
  std::string_view text_;
  Program prog_;
  std::vector<Diagnostic> diags_;
  std::map<std::string, std::string> node_owner_;
  std::set<std::string> var_set_;
  Procedure* current_ = nullptr;
  struct PendingCall {
    std::string callee;
    Pos pos;
  };
  std::vector<PendingCall> calls_;

  void error(Pos p, std::string msg) {
    diags_.push_back({Diagnostic::Severity::Error, p.line, p.column, std::move(msg)});
  }
  void warning(Pos p, std::string msg) {
    diags_.push_back({Diagnostic::Severity::Warning, p.line, p.column, std::move(msg)});
  }

  std::vector<Chunk> split() {
    std::vector<Chunk> out;
    Chunk cur;
    Pos p;
    bool comment = false;
    for (char c : text_) {
      if (comment) {
        if (c == '\n') comment = false;
      } else if (c == '#') {
        comment = true;
      } else if (c == ';') {
        cur.start = cur.pos.empty() ? p : cur.pos.front();
        out.push_back(std::move(cur));
        cur = Chunk{};
      } else if (!cur.text.empty() || !std::isspace(static_cast<unsigned char>(c))) {
        cur.text.push_back(c);
        cur.pos.push_back(p);
      }
      if (c == '\n') {
        ++p.line;
        p.column = 1;
      } else {
        ++p.column;
      }
    }
    auto trailing = std::find_if(cur.text.begin(), cur.text.end(),
                                 [](char c) { return !std::isspace(static_cast<unsigned char>(c)); });
    if (trailing != cur.text.end()) error(cur.pos.front(), "missing ';' after statement");
    return out;
  }

  // cursor over a chunk
  struct Cursor {
    const Chunk& c;
    std::size_t i = 0;
    void skip_ws() {
      while (i < c.text.size() && std::isspace(static_cast<unsigned char>(c.text[i]))) ++i;
    }
    bool done() {
      skip_ws();
      return i >= c.text.size();
    }
    Pos pos() {
      skip_ws();
      return c.at(i);
    }
    std::string ident() {
      skip_ws();
      std::size_t b = i;
      while (i < c.text.size() && ident_char(c.text[i])) ++i;
      return c.text.substr(b, i - b);
    }
    bool eat(char ch) {
      skip_ws();
      if (i < c.text.size() && c.text[i] == ch) {
        ++i;
        return true;
      }
      return false;
    }
    std::string rest() {
      skip_ws();
      std::string r = c.text.substr(i);
      while (!r.empty() && std::isspace(static_cast<unsigned char>(r.back()))) r.pop_back();
      return r;
    }
  };

  void statement(const Chunk& c) {
    Cursor cur{c};
    Pos kw_pos = cur.pos();
    std::string kw = cur.ident();
    if (kw == "vars") {
      while (!cur.done()) {
        Pos p = cur.pos();
        std::string v = cur.ident();
        if (v.empty()) return error(p, "expected a variable name");
        if (!var_set_.insert(v).second) return error(p, "variable '" + v + "' declared twice");
        prog_.vars.push_back(v);
      }
    } else if (kw == "proc") {
      procedure(cur);
    } else if (kw == "edge") {
      edge(cur);
    } else if (kw.empty()) {
      error(kw_pos, "expected 'vars', 'proc' or 'edge'");
    } else {
      error(kw_pos, "unknown statement '" + kw + "'");
    }
  }

  bool claim(const std::string& node, Pos p) {
    auto [it, fresh] = node_owner_.emplace(node, current_->name);
    if (!fresh && it->second != current_->name) {
      error(p, "point '" + node + "' shared between procedures '" + it->second + "' and '" + current_->name + "'");
      return false;
    }
    if (fresh) current_->nodes.push_back(node);
    return true;
  }

  void procedure(Cursor& cur) {
    Pos p = cur.pos();
    std::string name = cur.ident();
    if (name.empty()) return error(p, "expected a procedure name");
    if (prog_.find(name)) return error(p, "procedure '" + name + "' defined twice");
    Pos kp = cur.pos();
    if (cur.ident() != "entry") return error(kp, "expected 'entry'");
    Pos ep = cur.pos();
    std::string entry = cur.ident();
    if (entry.empty()) return error(ep, "expected an entry point");
    kp = cur.pos();
    if (cur.ident() != "exit") return error(kp, "expected 'exit'");
    Pos xp = cur.pos();
    std::string exit = cur.ident();
    if (exit.empty()) return error(xp, "expected an exit point");
    if (!cur.done()) return error(cur.pos(), "unexpected text after procedure header");
    prog_.procedures.push_back(Procedure{name, entry, exit, {}, {}});
    current_ = &prog_.procedures.back();
    claim(entry, ep);
    claim(exit, xp);
  }

  void edge(Cursor& cur) {
    Pos p = cur.pos();
    if (!current_) return error(p, "edge outside of a procedure");
    Pos up = cur.pos();
    std::string u = cur.ident();
    Pos vp = cur.pos();
    std::string v = cur.ident();
    if (u.empty() || v.empty()) return error(u.empty() ? up : vp, "expected two point names");
    if (!cur.eat(':')) return error(cur.pos(), "expected ':'");
    Pos sp = cur.pos();
    auto stmt = statement_body(cur, sp);
    if (!stmt) return;
    if (!claim(u, up) || !claim(v, vp)) return;
    current_->edges.push_back(Edge{u, v, std::move(*stmt)});
  }

  std::optional<Stmt> statement_body(Cursor& cur, Pos sp) {
    std::size_t save = cur.i;
    std::string word = cur.ident();
    if (word == "skip" && cur.done()) return Stmt::skip();
    if (word == "call") {
      Pos cp = cur.pos();
      std::string callee = cur.ident();
      if (callee.empty() || !cur.done()) {
        error(cp, "expected 'call <procedure>'");
        return std::nullopt;
      }
      calls_.push_back({callee, cp});
      return Stmt::call(callee);
    }
    cur.i = save;
    std::string x = cur.ident();
    if (x.empty() || !cur.eat('=')) {
      error(sp, "expected 'skip', 'call <procedure>' or '<var> = <term>'");
      return std::nullopt;
    }
    if (!var_set_.count(x)) {
      error(sp, "assignment to undeclared variable '" + x + "'");
      return std::nullopt;
    }
    cur.skip_ws();
    std::size_t rhs_at = cur.i;
    Pos rp = cur.pos();
    std::string rhs = cur.rest();
    if (rhs == "?") return Stmt::havoc(x);
    Term t;
    try {
      t = parse_term(rhs, var_set_);
    } catch (const ParseError& e) {
      error(cur.c.at(rhs_at + e.column - 1), e.what());
      return std::nullopt;
    }
    if (auto bad = prog_.signature.absorb(t)) {
      error(rp, "symbol '" + *bad + "' used with inconsistent arity");
      return std::nullopt;
    }
    if (t.has_many_vars()) {
      warning(rp, "right-hand side mentions several variables; treated as '" + x + " = ?'");
      return Stmt::havoc(x);
    }
    return Stmt::assign(x, t);
  }

  void finish() {
    for (const auto& c : calls_)
      if (!prog_.find(c.callee)) error(c.pos, "call to undefined procedure '" + c.callee + "'");
    if (!prog_.find(prog_.main)) {
      diags_.push_back({Diagnostic::Severity::Error, 0, 0, "no main procedure"});
      return;
    }
    bool failed = std::any_of(diags_.begin(), diags_.end(),
                              [](const Diagnostic& d) { return d.severity == Diagnostic::Severity::Error; });
    if (!failed)
      for (auto& d : validate(prog_)) diags_.push_back(std::move(d));
  }
};

std::set<std::string> reachable(const Procedure& p, const std::set<std::string>* terminating) {
  std::set<std::string> seen{p.entry};
  std::vector<std::string> work{p.entry};
  while (!work.empty()) {
    auto u = work.back();
    work.pop_back();
    for (const auto& e : p.edges) {
      if (e.from != u) continue;
      if (terminating && e.stmt.kind == Stmt::Kind::Call && !terminating->count(e.stmt.callee)) continue;
      if (seen.insert(e.to).second) work.push_back(e.to);
    }
  }
  return seen;
}

}  // namespace

ParseResult parse_program(std::string_view text) { return Parser(text).run(); }

std::vector<Diagnostic> validate(const Program& prog) {
  std::vector<Diagnostic> out;
  for (const auto& p : prog.procedures) {
    auto seen = reachable(p, nullptr);
    for (const auto& n : p.nodes)
      if (!seen.count(n))
        out.push_back({Diagnostic::Severity::Error, 0, 0, "unreachable point '" + n + "' in procedure '" + p.name + "'"});
  }
  std::set<std::string> terminating;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : prog.procedures)
      if (!terminating.count(p.name) && reachable(p, &terminating).count(p.exit)) {
        terminating.insert(p.name);
        changed = true;
      }
  }
  for (const auto& p : prog.procedures)
    if (!terminating.count(p.name))
      out.push_back({Diagnostic::Severity::Error, 0, 0, "procedure '" + p.name + "' has no terminating path"});
  return out;
}

DerivedSets derive_sets(const Program& prog) {
  DerivedSets d;
  TermSet seeds;
  for (const auto& p : prog.procedures)
    for (const auto& e : p.edges) {
      if (e.stmt.kind != Stmt::Kind::Assign) continue;
      if (e.stmt.rhs.is_ground())
        d.R.insert(e.stmt.rhs);
      else
        seeds.merge(maximal_ground_subterms(e.stmt.rhs));
    }
  d.G = subterm_closure(seeds);
  d.S = d.G;
  d.S.insert(d.R.begin(), d.R.end());
  bool disjoint = std::none_of(d.R.begin(), d.R.end(), [&](const Term& r) { return d.G.count(r) > 0; });
  bool incomparable = true;
  for (const auto& r : d.R)
    for (const auto& q : d.R)
      if (r != q && subterms(q).count(r)) incomparable = false;
  d.is_ir = disjoint && incomparable;
  return d;
}

std::string pretty(const Program& prog) {
  std::string out;
  if (!prog.vars.empty()) {
    out += "vars";
    for (const auto& v : prog.vars) out += " " + v;
    out += " ;\n";
  }
  for (const auto& p : prog.procedures) {
    out += "proc " + p.name + " entry " + p.entry + " exit " + p.exit + " ;\n";
    for (const auto& e : p.edges) out += "edge " + e.from + " " + e.to + " : " + e.stmt.str() + " ;\n";
  }
  return out;
}

}  // namespace heq
