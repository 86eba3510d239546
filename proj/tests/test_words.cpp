#include <doctest.h>

#include <sstream>

#include "gen.hpp"
#include "heq/oracle.hpp"
#include "heq/words.hpp"

using namespace heq;

namespace {

// "f g^-1 h" over unary letters; "" is the empty word
Word W(const std::string& s) {
  Word w;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    bool inv = tok.ends_with("^-1");
    if (inv) tok.resize(tok.size() - 3);
    Letter l = positive(Term::apply(tok, {Term::hole()}));
    l.inverse = inv;
    w.push_back(l);
  }
  return w;
}

std::vector<Letter> fgh() { return {W("f")[0], W("g")[0], W("h")[0]}; }

}  // namespace

TEST_SUITE("words") {
  TEST_CASE("reduction and inversion") {
    CHECK(reduce(concat(W("f g"), W("g^-1 h"))) == W("f h"));
    CHECK(concat(W("f g"), W("")) == W("f g"));
    CHECK(concat(W("f"), W("f^-1")).empty());
    CHECK(invert(W("f g")) == W("g^-1 f^-1"));
    CHECK(invert(W("")).empty());
    CHECK(invert(invert(W("f g^-1 h"))) == W("f g^-1 h"));
  }

  TEST_CASE("balance and non-negativity") {
    CHECK(balance(W("f g f^-1 g^-1 h")) == 1);
    CHECK(balance(W("f^-1 g")) == 0);
    CHECK(balance(W("")) == 0);
    CHECK(non_negative(W("f g f^-1 g^-1 h")));
    CHECK_FALSE(non_negative(W("f^-1 g")));
    CHECK(non_negative(W("")));
  }

  TEST_CASE("letters come from irreducible templates") {
    CHECK(word_of(parse_term("f(h(f(_,h(1))),h(f(_,h(1))))")).size() == 3);
    CHECK(word_of(Term::hole()).empty());
    CHECK(to_string(W("f g^-1")) == "f(_) g(_)^-1");
  }

  TEST_CASE("reduction laws on random words") {
    gen::Rng rng(21);
    auto alpha = fgh();
    for (int i = 0; i < 500; ++i) {
      Word u = gen::monoid_word(rng, alpha, 5), v = gen::monoid_word(rng, alpha, 5);
      Word x = reduce(concat(u, invert(v)));
      CHECK(reduce(x) == x);
      CHECK(balance(concat(x, u)) == balance(x) + balance(u));
      CHECK(balance(invert(x)) == -balance(x));
      CHECK(reduce(concat(x, invert(x))).empty());
      CHECK(is_positive(u));
    }
  }

  TEST_CASE("base case") {
    auto r = lemma_base(W("f f g^-1 f^-1"), W("f g^-1"));
    CHECK(r == Relation::solved(Orientation::AwIsB, W("f")));
    CHECK(r.str() == "A f(_) = B");
    CHECK(lemma_base(W(""), W("")).kind == RelKind::Trivial);
    CHECK(lemma_base(W(""), W("f g^-1")).kind == RelKind::Contradiction);
    CHECK_THROWS_AS(lemma_base(W("f"), W("f")), std::invalid_argument);
  }

  TEST_CASE("pairs of conjugation equations") {
    auto p = WordPair{W("f g"), W("g f")};
    CHECK(solve_conjugation_pair(p, p) == relation_of(p));
    CHECK(relation_of(p).kind == RelKind::Conjugation);

    auto r = solve_conjugation_pair({W("f f"), W("g g")}, {W("f"), W("g")});
    CHECK(r == relation_of({W("f"), W("g")}));

    CHECK(solve_conjugation_pair({W("f"), W("g")}, {W("f"), W("h")}).kind == RelKind::Contradiction);
    CHECK_THROWS_AS(solve_conjugation_pair({W("f"), W("")}, {W("f"), W("g")}), std::invalid_argument);
  }

  TEST_CASE("implication") {
    auto solved = Relation::solved(Orientation::AwIsB, W("f"));
    CHECK(relation_implies(solved, {W("f f g^-1 f^-1"), W("f g^-1")}));
    CHECK(relation_implies(Relation::trivial(), {W(""), W("")}));
    CHECK(relation_implies(relation_of({W("f"), W("g")}), {W("f f"), W("g g")}));
    // roots are unique in a free group, so squares determine the pair
    CHECK(relation_implies(relation_of({W("f f"), W("g g")}), {W("f"), W("g")}));
    CHECK_FALSE(relation_implies(relation_of({W("f"), W("g")}), {W("g"), W("f")}));
  }

  TEST_CASE("relations agree with brute force on small instances") {
    gen::Rng rng(22);
    auto alpha = fgh();
    alpha.pop_back();
    int done = 0;
    for (int i = 0; i < 150; ++i) {
      Word A, B;
      if (rng.chance(0.7)) std::tie(A, B) = gen::planted_solution(rng, alpha, 3);
      WordPair p, q;
      if (!gen::conjugation_pair(rng, alpha, 4, A, B, p) || !gen::conjugation_pair(rng, alpha, 4, A, B, q)) continue;
      auto r = solve_conjugation_pair(p, q);
      CHECK(relation_solutions(r, alpha, 4) == brute_words(p, q, alpha, 4));
      if (!A.empty() || !B.empty()) CHECK(relation_holds(r, A, B));
      ++done;
    }
    CHECK(done > 80);
  }

  TEST_CASE("the empty pair has every solution") {
    auto alpha = fgh();
    auto all = monoid_pairs(alpha, 3);
    CHECK(brute_words({}, {}, alpha, 3) == all);
    CHECK(relation_solutions(Relation::trivial(), alpha, 3) == all);
  }
}
