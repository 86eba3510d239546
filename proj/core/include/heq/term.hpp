#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace heq {

enum class NodeKind : std::uint8_t { Hole, Var, Apply };

namespace detail {
struct Node;
}

// Immutable first-order term. Nodes are hash-consed, so equality is a
// pointer comparison; ordering is structural (size, kind, name, children).
class Term {
 public:
  Term();  // the hole
  static Term apply(std::string_view symbol, std::vector<Term> children = {});
  static Term var(std::string_view name);
  static Term hole();

  NodeKind kind() const;
  bool is_hole() const { return kind() == NodeKind::Hole; }
  bool is_var() const { return kind() == NodeKind::Var; }
  bool is_apply() const { return kind() == NodeKind::Apply; }

  // symbol name for Apply nodes, variable name for Var nodes, "_" for holes
  const std::string& name() const;
  std::uint32_t name_id() const;
  const std::vector<Term>& children() const;
  std::size_t arity() const { return children().size(); }

  // node count (holes and variables included); saturates at UINT64_MAX
  std::uint64_t size() const;
  std::uint64_t hole_count() const;
  std::size_t hash() const;

  bool has_hole() const;
  bool has_var() const;
  bool is_ground() const { return !has_hole() && !has_var(); }
  bool is_template() const { return has_hole() && !has_var(); }
  // true when more than one distinct variable occurs
  bool has_many_vars() const;
  // the unique variable when exactly one distinct variable occurs
  std::optional<std::string> single_var() const;
  std::set<std::string> vars() const;

  std::string str() const;
  const detail::Node* node() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b) { return a.node_ == b.node_; }
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  explicit Term(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::Node> node_;
  friend struct detail::Node;
  friend Term make_node(NodeKind, std::uint32_t, std::vector<Term>);
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

using TermSet = std::set<Term>;
using Path = std::vector<std::uint32_t>;

// u with every hole replaced by t
Term subst_hole(const Term& u, const Term& t);
// t with every Var(x) replaced by s
Term subst_var(const Term& t, std::string_view x, const Term& s);
// t with every Var node replaced by the hole
Term var_to_hole(const Term& t);
// the unique r with subst_hole(u, r) == t
std::optional<Term> divide(const Term& t, const Term& u);
// all templates r with subst_hole(r, t) == s (s, t ground)
std::vector<Term> replacements(const Term& s, const Term& t);

enum class MarkerOutcome { AllValues, Exactly, NoSolution };
struct MarkerSolution {
  MarkerOutcome outcome = MarkerOutcome::NoSolution;
  std::optional<Term> value;  // set for Exactly
};
// match two patterns over one shared marker (a variable or the hole)
MarkerSolution solve_for_marker(const Term& u, const Term& v);

// positions of subterms equal to t, outermost first, left to right
std::vector<Path> occurrences(const Term& s, const Term& t);
const Term& subterm_at(const Term& t, const Path& p);
Term replace_at(const Term& t, const Path& p, const Term& r);
// t with every subterm equal to from replaced by to
Term replace_all(const Term& t, const Term& from, const Term& to);
// every distinct subterm, including t itself
TermSet subterms(const Term& t);
TermSet subterm_closure(const TermSet& ts);
// maximal ground subterms (t itself when ground)
TermSet maximal_ground_subterms(const Term& t);

class Signature {
 public:
  // records symbol/rank; returns false on a rank conflict
  bool declare(const std::string& symbol, std::size_t rank);
  std::optional<std::size_t> rank(const std::string& symbol) const;
  bool has_constant() const;
  const std::map<std::string, std::size_t>& symbols() const { return ranks_; }
  // declares every symbol of t; returns the first conflicting symbol if any
  std::optional<std::string> absorb(const Term& t);

 private:
  std::map<std::string, std::size_t> ranks_;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t column)
      : std::runtime_error(msg), column(column) {}
  std::size_t column;
};

// `ident`, `ident(t1,...,tk)`, `_` for the hole; identifiers listed in vars
// parse as variables
Term parse_term(std::string_view text, const std::set<std::string>& vars = {});

}  // namespace heq
