#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heq/term.hpp"

namespace heq {

// A signed occurrence of an interned irreducible template.
struct Letter {
  std::uint32_t id = 0;
  bool inverse = false;
  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

using Word = std::vector<Letter>;

// Append-only table of irreducible templates used as letters.
std::uint32_t intern_letter(const Term& irreducible);
Term letter_template(std::uint32_t id);

// the positive word of the irreducible factors of a template (hole -> empty)
Word word_of(const Term& tmpl);
Letter positive(const Term& irreducible);

Word reduce(const Word& w);
Word concat(const Word& u, const Word& v);
Word invert(const Word& u);
long balance(const Word& u);
bool non_negative(const Word& u);
bool is_positive(const Word& u);
// u^k for k >= 0
Word power(const Word& u, long k);
std::string to_string(const Word& w);

// The pair (u, u') standing for A u A^-1 = B u' B^-1.
struct WordPair {
  Word u;
  Word v;
  friend bool operator==(const WordPair&, const WordPair&) = default;
};

enum class RelKind { Trivial, Contradiction, Solved, Conjugation };
// A = B w  or  A w = B
enum class Orientation { AIsBw, AwIsB };

struct Relation {
  RelKind kind = RelKind::Trivial;
  Orientation orientation = Orientation::AIsBw;
  Word w;        // Solved
  WordPair pair;  // Conjugation, canonical

  static Relation trivial() { return {}; }
  static Relation contradiction() { return {RelKind::Contradiction, {}, {}, {}}; }
  static Relation solved(Orientation o, Word w) { return {RelKind::Solved, o, std::move(w), {}}; }
  static Relation conjugation(const WordPair& p);

  friend bool operator==(const Relation&, const Relation&) = default;
  std::string str() const;
};

// both balances zero, both words non-negative
Relation lemma_base(const Word& u, const Word& u2);
// Euclid-style reduction of the conjunction of two conjugation equations.
Relation solve_conjugation_pair(const WordPair& p, const WordPair& q);
// the relation expressed by a single pair
Relation relation_of(const WordPair& p);
// r conjoined with one more pair
Relation conjoin(const Relation& r, const WordPair& p);
bool relation_implies(const Relation& r, const WordPair& p);

// evaluation on concrete monoid words A, B
bool pair_holds(const WordPair& p, const Word& A, const Word& B);
bool relation_holds(const Relation& r, const Word& A, const Word& B);

}  // namespace heq
