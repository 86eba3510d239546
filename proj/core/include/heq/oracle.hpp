#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "heq/equalities.hpp"
#include "heq/program.hpp"
#include "heq/words.hpp"
#include "heq/wp.hpp"

namespace heq {

// Values of the program variables, in declaration order.
struct State {
  std::vector<Term> values;
  friend bool operator==(const State&, const State&) = default;
  friend auto operator<=>(const State&, const State&) = default;
  std::string str(const std::vector<std::string>& vars) const;
};

struct RunConfig {
  std::size_t max_call_depth = 4;
  std::size_t max_steps = 200;  // transitions along one path
  std::vector<Term> havoc_pool;  // also the initial values of every variable
  std::size_t max_configs = 2'000'000;
};

// S plus one atom that occurs nowhere in the program
std::vector<Term> default_pool(const Program& p);

struct StateSets {
  std::map<std::string, std::set<State>> at;
  bool partial = false;  // the configuration cap was hit
};

// throws std::invalid_argument when the pool is empty and the program has variables
StateSets enumerate_states(const Program& p, const RunConfig& cfg);

std::optional<State> check_invariant(const PairInvariant& inv, const std::set<State>& states,
                                     const std::vector<std::string>& vars);
std::optional<State> check_invariant(const ConstantInvariant& inv, const std::set<State>& states,
                                     const std::vector<std::string>& vars);

struct Counterexample {
  std::string point;
  std::string invariant;
  State state;
  std::string str(const std::vector<std::string>& vars) const;
};

struct SoundnessResult {
  bool pass = true;
  bool partial = false;
  std::size_t checked = 0;  // invariants checked
  std::vector<Counterexample> failures;
};

SoundnessResult soundness_report(const Program& p, const Report& r, const RunConfig& cfg);
SoundnessResult soundness_report(const Program& p, const Report& r, const StateSets& states);

// candidates from occurrence replacements in the first equation, filtered by all
SolutionSet brute_solve(const std::vector<std::pair<Term, Term>>& eqs, std::size_t size_bound = 64);

// Representatives (p, q) of B^-1 A = q^-1 p: monoid words with no common first
// letter, each of length at most len_bound. Every monoid pair (A, B) is
// X p, X q for one of them, and both equations only depend on B^-1 A.
std::vector<std::pair<Word, Word>> monoid_pairs(const std::vector<Letter>& alphabet, std::size_t len_bound);
// the representatives satisfying both conjugation equations
std::vector<std::pair<Word, Word>> brute_words(const WordPair& p, const WordPair& q,
                                               const std::vector<Letter>& alphabet, std::size_t len_bound);
// the representatives satisfying a relation
std::vector<std::pair<Word, Word>> relation_solutions(const Relation& r, const std::vector<Letter>& alphabet,
                                                      std::size_t len_bound);

}  // namespace heq
