#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "heq/term.hpp"

namespace heq {

// Template variables. A and B range over templates, C over ground terms.
enum class TVar : std::uint8_t { A, B, C };

// One side of an equality: a template variable applied to a body. The body
// of a C side is unused and kept as the hole.
struct Side {
  TVar head = TVar::A;
  Term body;
  friend bool operator==(const Side&, const Side&) = default;
  friend std::strong_ordering operator<=>(const Side& a, const Side& b) {
    if (auto c = a.head <=> b.head; c != 0) return c;
    return a.body <=> b.body;
  }
};

// lhs is A-headed; rhs is B-headed (pair type) or C (constant type).
struct Equality {
  Side lhs;
  Side rhs;

  static Equality pair(Term s, Term t) { return {{TVar::A, std::move(s)}, {TVar::B, std::move(t)}}; }
  static Equality constant(Term s) { return {{TVar::A, std::move(s)}, {TVar::C, Term::hole()}}; }
  // orients any A/B/C combination with distinct heads
  static Equality make(Side a, Side b);

  bool is_pair() const { return rhs.head == TVar::B; }
  bool is_const() const { return rhs.head == TVar::C; }
  const Term& s() const { return lhs.body; }
  const Term& t() const { return rhs.body; }
  std::set<std::string> vars() const;

  // `A[s] == B[t]` / `A[s] == C`
  std::string str() const;
  // bodies rendered as irreducible factors followed by the marker
  std::string factored() const;

  friend bool operator==(const Equality&, const Equality&) = default;
  friend std::strong_ordering operator<=>(const Equality&, const Equality&) = default;
};

// Top is the empty conjunction. Members keep insertion order, no duplicates.
class Conjunction {
 public:
  Conjunction() = default;
  static Conjunction top() { return {}; }
  static Conjunction bottom();
  static Conjunction of(std::vector<Equality> eqs);

  bool is_bottom() const { return bottom_; }
  bool is_top() const { return !bottom_ && eqs_.empty(); }
  const std::vector<Equality>& equalities() const { return eqs_; }
  std::size_t size() const { return eqs_.size(); }
  bool contains(const Equality& e) const;

  // returns false when e was already present or this is Bottom
  bool add(const Equality& e);
  void add_all(const Conjunction& c);
  void make_bottom();
  std::set<std::string> vars() const;

  std::string str() const;
  friend bool operator==(const Conjunction&, const Conjunction&) = default;

 private:
  bool bottom_ = false;
  std::vector<Equality> eqs_;
};

Conjunction conjoin(const Conjunction& a, const Conjunction& b);

struct SolutionPair {
  Term rA;
  Term rB;
  friend bool operator==(const SolutionPair&, const SolutionPair&) = default;
  friend std::strong_ordering operator<=>(const SolutionPair&, const SolutionPair&) = default;
};
// sorted; empty means unsatisfiable
using SolutionSet = std::vector<SolutionPair>;

Conjunction wp_subst(const Conjunction& phi, const std::string& x, const Term& t);
Conjunction forall(const Conjunction& phi, const std::string& x);
Conjunction universal_closure(const Conjunction& phi, const std::set<std::string>& vars);

// minimal solutions of A s = B t for ground s, t
SolutionSet solve_single(const Term& s, const Term& t);
// minimal solutions of the system A s_i = B t_i; bodies may be templates
SolutionSet solve_system(const std::vector<std::pair<Term, Term>>& eqs);
// A s_i == C members only; returns Top, Bottom or a single ground equality
Conjunction solve_const_system(const Conjunction& phi);

// the fresh constant standing in for the hole when template bodies are solved
extern const char* const kDiamond;

std::string to_string(const SolutionPair& p);

}  // namespace heq
