#pragma once

#include <optional>
#include <string>
#include <vector>

#include "heq/term.hpp"

namespace heq {

struct Stmt {
  enum class Kind { Skip, Assign, Havoc, Call };
  Kind kind = Kind::Skip;
  std::string var;     // Assign, Havoc
  Term rhs;            // Assign
  std::string callee;  // Call

  static Stmt skip() { return {}; }
  static Stmt assign(std::string x, Term t) { return {Kind::Assign, std::move(x), std::move(t), {}}; }
  static Stmt havoc(std::string x) { return {Kind::Havoc, std::move(x), {}, {}}; }
  static Stmt call(std::string p) { return {Kind::Call, {}, {}, std::move(p)}; }

  std::string str() const;
  friend bool operator==(const Stmt&, const Stmt&) = default;
};

struct Edge {
  std::string from;
  std::string to;
  Stmt stmt;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Procedure {
  std::string name;
  std::string entry;
  std::string exit;
  std::vector<std::string> nodes;  // first-mention order, entry first
  std::vector<Edge> edges;         // declaration order
  friend bool operator==(const Procedure&, const Procedure&) = default;
};

struct Program {
  Signature signature;
  std::vector<std::string> vars;
  std::vector<Procedure> procedures;  // declaration order
  std::string main = "main";

  const Procedure* find(const std::string& name) const;
  const Procedure& main_procedure() const;
  // the procedure owning a point, if any
  const Procedure* owner(const std::string& point) const;
  bool same_shape(const Program& other) const;
};

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::size_t line = 0;  // 1-based, 0 when not tied to a location
  std::size_t column = 0;
  std::string message;
  std::string str() const;
};

struct ParseResult {
  std::optional<Program> program;  // absent when any error was reported
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return program.has_value(); }
};

// parses and validates a .heq program
ParseResult parse_program(std::string_view text);
// errors for unreachable points and procedures that cannot terminate
std::vector<Diagnostic> validate(const Program& p);

struct DerivedSets {
  TermSet R;  // ground right-hand sides
  TermSet G;  // subterm closure of the ground subterms of non-ground right-hand sides
  TermSet S;  // G ∪ R
  bool is_ir = false;
};

DerivedSets derive_sets(const Program& p);
// canonical .heq text; parse_program(pretty(p)) reproduces p
std::string pretty(const Program& p);

}  // namespace heq
