#pragma once

// Hand-rolled random generators shared by the property tests, the
// acceptance binary and the benchmarks.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "heq/term.hpp"
#include "heq/words.hpp"

namespace heq::gen {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(eng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(eng_); }
  template <class T>
  const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }

 private:
  std::mt19937_64 eng_;
};

// a, b, c, g/1, h/1, f/2
struct Sym {
  std::string name;
  std::size_t rank;
};
const std::vector<Sym>& symbols();

// ground term with at most `size` nodes
Term ground(Rng& rng, std::size_t size);
// term with at most `size` nodes whose leaves may be the given variable
Term with_var(Rng& rng, std::size_t size, const std::string& var);
// template with at least one hole and at most `size` nodes
Term context(Rng& rng, std::size_t size);

// a system of A s_i == B t_i with ground sides; about half are planted
// around a known solution so that satisfiable systems are common
std::vector<std::pair<Term, Term>> ground_system(Rng& rng, std::size_t max_eqs, std::size_t max_size);

// irreducible one-hole letters g(_), h(_), f(_,_) ... up to n of them
std::vector<Letter> alphabet(std::size_t n);
Word monoid_word(Rng& rng, const std::vector<Letter>& alpha, std::size_t max_len);
// monoid words (A, B) with A = B w or A w = B, total length about max_len
std::pair<Word, Word> planted_solution(Rng& rng, const std::vector<Letter>& alpha, std::size_t max_len);
// a non-negative pair with equal balances, both of length <= max_len, that
// (A, B) satisfies unless both are empty
bool conjugation_pair(Rng& rng, const std::vector<Letter>& alpha, std::size_t max_len, const Word& A, const Word& B,
                      WordPair& out);

struct ProgramShape {
  std::size_t max_vars = 3;
  std::size_t max_procs = 2;
  std::size_t max_edges = 10;
  std::size_t max_term = 4;
};
// .heq text of a valid program (every point reachable, every procedure able to return)
std::string program_text(Rng& rng, const ProgramShape& shape = {});

}  // namespace heq::gen
