#include <doctest.h>

#include <fstream>
#include <sstream>

#include "gen.hpp"
#include "heq/oracle.hpp"

using namespace heq;

namespace {

Program load(const std::string& name) {
  std::ifstream in(std::string(HEQ_TEST_DATA) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  auto r = parse_program(ss.str());
  REQUIRE(r.ok());
  return *r.program;
}

Term T(const char* s) { return parse_term(s); }
State S2(const char* x, const char* y) { return State{{T(x), T(y)}}; }

RunConfig config(const Program& p, std::size_t depth) {
  RunConfig c;
  c.max_call_depth = depth;
  c.havoc_pool = default_pool(p);
  return c;
}

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

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("default pool") {
    auto p = load("lockstep.heq");
    auto pool = default_pool(p);
    CHECK(pool.size() == 2);
    CHECK(std::find(pool.begin(), pool.end(), T("a")) != pool.end());
  }

  TEST_CASE("states of the lock-step program") {
    auto p = load("lockstep.heq");
    auto s = enumerate_states(p, config(p, 2));
    CHECK_FALSE(s.partial);
    const auto& n3 = s.at.at("n3");
    CHECK(n3.count(S2("a", "a")));
    CHECK(n3.count(S2("f(a,a)", "f(a,a)")));
    for (const auto& st : s.at.at("n2")) CHECK(st == S2("a", "a"));
  }

  TEST_CASE("states of the three-argument variant") {
    auto p = load("lockstep3.heq");
    auto s = enumerate_states(p, config(p, 2));
    CHECK(s.at.at("exit").count(S2("f(a,a,a)", "f(a,a,a)")));
  }

  TEST_CASE("a program without edges only reaches its entry") {
    auto r = parse_program("vars x ;\nproc main entry s exit s ;\n");
    REQUIRE(r.ok());
    auto s = enumerate_states(*r.program, config(*r.program, 2));
    CHECK(s.at.size() == 1);
    CHECK(s.at.count("s"));
  }

  TEST_CASE("an empty pool is rejected when values are needed") {
    auto p = load("lockstep.heq");
    RunConfig c;
    CHECK_THROWS_AS(enumerate_states(p, c), std::invalid_argument);
  }

  TEST_CASE("invariant checks") {
    auto p = load("lockstep.heq");
    auto s = enumerate_states(p, config(p, 2));
    PairInvariant eq{Term::hole(), "x", Term::hole(), "y"};
    CHECK_FALSE(check_invariant(eq, s.at.at("n3"), p.vars).has_value());
    auto bad = check_invariant(eq, {S2("a", "b")}, p.vars);
    REQUIRE(bad.has_value());
    CHECK(*bad == S2("a", "b"));
    CHECK_FALSE(check_invariant(ConstantInvariant{"x", T("a")}, s.at.at("n2"), p.vars).has_value());
  }

  TEST_CASE("soundness reports") {
    for (const char* f : {"lockstep.heq", "lockstep3.heq"}) {
      auto p = load(f);
      auto r = analyze(p);
      auto res = soundness_report(p, r, config(p, 4));
      CHECK(res.pass);
      CHECK(res.checked > 0);
    }
    auto p = load("lockstep.heq");
    auto r = analyze(p);
    for (auto& pt : r.points)
      if (pt.point == "n3") pt.pairs.push_back({Term::hole(), "x", T("f(_,_)"), "y"});
    auto res = soundness_report(p, r, config(p, 1));
    CHECK_FALSE(res.pass);
    REQUIRE(res.failures.size() == 1);
    CHECK(res.failures[0].point == "n3");
    CHECK(res.failures[0].state == S2("a", "a"));
  }

  TEST_CASE("an unreached verdict contradicted by a run is a failure") {
    auto p = load("lockstep.heq");
    auto r = analyze(p);
    for (auto& pt : r.points)
      if (pt.point == "n1") pt.reached = false;
    CHECK_FALSE(soundness_report(p, r, config(p, 1)).pass);
  }

  TEST_CASE("deeper bounds only add states") {
    gen::Rng rng(71);
    for (int i = 0; i < 30; ++i) {
      auto r = parse_program(gen::program_text(rng));
      REQUIRE(r.ok());
      auto c = config(*r.program, 1);
      c.max_steps = 12;
      auto a = enumerate_states(*r.program, c);
      c.max_call_depth = 2;
      c.max_steps = 16;
      auto b = enumerate_states(*r.program, c);
      for (const auto& [pt, states] : a.at)
        for (const auto& st : states) CHECK(b.at[pt].count(st));
    }
  }

  TEST_CASE("brute-force ground solver") {
    auto sol = brute_solve({{T("f(a,g(b),g(b))"), T("g(b)")}, {T("f(a,g(c),g(b))"), T("g(c)")}});
    CHECK(sol == SolutionSet{{Term::hole(), T("f(a,_,g(b))")}});
    CHECK(brute_solve({{T("a"), T("a")}}) == SolutionSet{{Term::hole(), Term::hole()}});
  }

  TEST_CASE("brute-force word solver") {
    std::vector<Letter> alpha{W("f")[0], W("g")[0]};
    WordPair p{W("f f g^-1 f^-1"), W("f g^-1")};
    auto got = brute_words(p, p, alpha, 4);
    CHECK(got == relation_solutions(Relation::solved(Orientation::AwIsB, W("f")), alpha, 4));
    CHECK_FALSE(got.empty());
    for (const auto& [A, B] : got) CHECK(reduce(concat(A, W("f"))) == B);
    CHECK(brute_words({}, {}, alpha, 3) == monoid_pairs(alpha, 3));
  }
}
