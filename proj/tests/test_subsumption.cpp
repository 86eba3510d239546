#include <doctest.h>

#include "gen.hpp"
#include "heq/subsumption.hpp"

using namespace heq;

namespace {

Term T(const char* s) { return parse_term(s, {"x", "y"}); }
Equality P(const char* s, const char* t) { return Equality::pair(T(s), T(t)); }

// lockstep.heq: G empty, R = {a}
ApproxCtx lockstep_ctx() { return ApproxCtx::make({}, {T("a")}, {"x", "y"}, true); }
// the f(x,a,x) variant: G = R = {a}, not IR
ApproxCtx three_arg_ctx() { return ApproxCtx::make({T("a")}, {T("a")}, {"x", "y"}, false); }

const std::vector<Equality> kTable1Point4{P("x", "y"), P("f(x,x)", "f(y,y)"), P("f(f(x,x),f(x,x))", "f(f(y,y),f(y,y))")};
const std::vector<Equality> kTable2Point4{P("x", "y"), P("f(x,a,x)", "f(y,a,y)"),
                                          P("f(f(x,a,x),a,f(x,a,x))", "f(f(y,a,y),a,f(y,a,y))")};

Bucket bucket_of(const std::vector<Equality>& eqs, const ApproxCtx& ctx) {
  Bucket b = make_bucket(classify_format(eqs.front(), ctx));
  for (const auto& e : eqs) b = bucket_add(b, e, ctx);
  return b;
}

struct Assignment {
  Term A, B, C, x, y;
};

Term eval_side(const Side& s, const Assignment& a) {
  Term body = subst_var(subst_var(s.body, "x", a.x), "y", a.y);
  switch (s.head) {
    case TVar::A:
      return subst_hole(a.A, body);
    case TVar::B:
      return subst_hole(a.B, body);
    case TVar::C:
      return a.C;
  }
  return body;
}

bool holds(const Equality& e, const Assignment& a) { return eval_side(e.lhs, a) == eval_side(e.rhs, a); }

Equality random_equality(gen::Rng& rng, const ApproxCtx& ctx) {
  auto side = [&](const std::string& v) {
    switch (rng.below(3)) {
      case 0:
        return rng.pick(std::vector<Term>(ctx.K.begin(), ctx.K.end()));
      case 1:
        return gen::ground(rng, 1 + rng.below(4));
      default:
        return subst_hole(rng.chance(0.3) ? Term::hole() : gen::context(rng, 1 + rng.below(4)), Term::var(v));
    }
  };
  if (rng.chance(0.2)) return Equality::constant(side("x"));
  return Equality::pair(side("x"), side(rng.chance(0.3) ? "x" : "y"));
}

}  // namespace

TEST_SUITE("subsumption") {
  TEST_CASE("small-value sets") {
    auto c = lockstep_ctx();
    CHECK(c.S == TermSet{T("a")});
    CHECK(c.K.empty());
    CHECK(three_arg_ctx().K == TermSet{T("a")});
  }

  TEST_CASE("formats") {
    auto k = classify_format(P("x", "f(y,y)"), lockstep_ctx());
    CHECK(k.kind == FormatKind::TwoVar);
    CHECK(k.x == "x");
    CHECK(k.y == "y");
    CHECK(classify_format(P("a", "a"), lockstep_ctx()).kind == FormatKind::GroundAB);
    auto s = classify_format(P("a", "f(y,a,y)"), three_arg_ctx());
    CHECK(s.kind == FormatKind::SmallLeft);
    CHECK(s.c == T("a"));
    CHECK(s.x == "y");
    CHECK(classify_format(P("f(x,a,x)", "a"), three_arg_ctx()).kind == FormatKind::SmallRight);
    CHECK(classify_format(P("f(a,a,a)", "f(y,a,y)"), three_arg_ctx()).kind == FormatKind::LargeLeft);
    CHECK(classify_format(P("g(x)", "f(x,x)"), three_arg_ctx()).kind == FormatKind::SameVar);
    CHECK(classify_format(Equality::constant(T("g(x)")), three_arg_ctx()).kind == FormatKind::AC);
    CHECK(classify_format(Equality::constant(T("a")), three_arg_ctx()).kind == FormatKind::ACGround);
  }

  TEST_CASE("buckets") {
    auto ctx = lockstep_ctx();
    Bucket two = bucket_of({kTable1Point4[0], kTable1Point4[1]}, ctx);
    CHECK_FALSE(two.bottom);
    CHECK(bucket_subsumes(two, kTable1Point4[2], ctx));
    Bucket three = bucket_add(two, kTable1Point4[2], ctx);
    CHECK(three.rel == two.rel);
    CHECK(three.base == two.base);
    CHECK(bucket_subsumes(two, *two.base, ctx));
    CHECK_FALSE(bucket_subsumes(make_bucket(classify_format(kTable1Point4[0], ctx)), kTable1Point4[0], ctx));

    auto c8 = three_arg_ctx();
    Bucket small = bucket_of({P("a", "f(y,a,y)"), P("a", "g(y)")}, c8);
    CHECK(small.bottom);
  }

  TEST_CASE("approximate subsumption") {
    auto ctx = lockstep_ctx();
    auto e12 = Conjunction::of({kTable1Point4[0], kTable1Point4[1]});
    CHECK(approx_subsumes(e12, Conjunction::of({kTable1Point4[2]}), ctx));
    CHECK(approx_subsumes(e12, e12, ctx));
    CHECK_FALSE(approx_subsumes(Conjunction::of({P("x", "y")}), Conjunction::of({P("g(x)", "g(y)")}), ctx));
    CHECK(approx_subsumes(Conjunction::bottom(), e12, ctx));
    CHECK(approx_subsumes(e12, Conjunction::top(), ctx));

    // with x = a and y large the first equality is kept apart, so rows 1 and 2
    // alone do not cover row 3; the fourth iteration's row is covered by 1..3
    auto c8 = three_arg_ctx();
    auto t12 = Conjunction::of({kTable2Point4[0], kTable2Point4[1]});
    CHECK_FALSE(approx_subsumes(t12, Conjunction::of({kTable2Point4[2]}), c8));
    auto t123 = Conjunction::of(kTable2Point4);
    CHECK(approx_subsumes(
        t123, Conjunction::of({P("f(f(f(x,a,x),a,f(x,a,x)),a,f(f(x,a,x),a,f(x,a,x)))",
                                 "f(f(f(y,a,y),a,f(y,a,y)),a,f(f(y,a,y),a,f(y,a,y)))")}),
        c8));
  }

  TEST_CASE("compaction") {
    auto c1 = compact(Conjunction::of(kTable1Point4), lockstep_ctx());
    CHECK(c1 == Conjunction::of({kTable1Point4[0], kTable1Point4[1]}));
    CHECK(compact(Conjunction::of({P("x", "y")}), lockstep_ctx()) == Conjunction::of({P("x", "y")}));
    CHECK(compact(Conjunction::of(kTable2Point4), three_arg_ctx()).size() == 3);
    CHECK(compact(Conjunction::of({Equality::constant(T("a")), Equality::constant(T("g(a)"))}), three_arg_ctx()).is_bottom());
  }

  TEST_CASE("compaction bound") {
    CHECK(compaction_bound(2, 1) == 2 * 25 + 2 * 13 + 3);
    CHECK(compaction_bound(1, 0) == 9 + 2);
  }

  TEST_CASE("compaction is equivalent, irredundant and idempotent on random conjunctions") {
    gen::Rng rng(41);
    auto ctx = three_arg_ctx();
    for (int i = 0; i < 150; ++i) {
      Conjunction E;
      for (std::size_t k = 1 + rng.below(4); k > 0; --k) E.add(random_equality(rng, ctx));
      auto c = compact(E, ctx);
      CHECK(approx_equivalent(E, c, ctx));
      CHECK(compact(c, ctx) == c);
      if (c.is_bottom()) continue;
      for (const auto& e : c.equalities()) CHECK(E.contains(e));
      CHECK(c.size() <= compaction_bound(2, ctx.K.size()));
    }
  }

  TEST_CASE("approximate subsumption is sound on sampled assignments") {
    gen::Rng rng(42);
    auto ctx = three_arg_ctx();
    // values from M_G R: templates with ground parts in {a} applied to a
    std::vector<Term> values{T("a"), T("g(a)"), T("f(a,a,a)"), T("f(a,g(a))"), T("g(g(a))"), T("f(g(a),a)"),
                             T("f(f(a,a,a),a,f(a,a,a))"), T("f(g(a),a,g(a))")};
    std::vector<Term> templates{Term::hole(), T("g(_)"),     T("f(_,a)"),   T("f(a,_)"),   T("f(_,_)"),
                                T("f(_,a,_)"), T("g(g(_))"), T("f(_,a,a)"), T("f(b,_)"), T("f(g(_),_)")};
    std::vector<Term> constants{T("a"), T("g(a)"), T("f(a,a,a)"), T("f(a,a)")};
    int implications = 0;
    for (int i = 0; i < 250; ++i) {
      Conjunction E;
      for (std::size_t k = 1 + rng.below(3); k > 0; --k) E.add(random_equality(rng, ctx));
      Equality e = random_equality(rng, ctx);
      if (rng.chance(0.3) && E.size() > 0) {
        // bias towards implied equalities: the premise itself, composed on the left
        e = E.equalities()[rng.below(E.size())];
      }
      if (!approx_subsumes(E, Conjunction::of({e}), ctx)) continue;
      ++implications;
      for (const auto& x : values)
        for (const auto& y : values)
          for (const auto& A : templates)
            for (const auto& B : templates)
              for (const auto& C : constants) {
                Assignment a{A, B, C, x, y};
                bool all = std::all_of(E.equalities().begin(), E.equalities().end(),
                                       [&](const Equality& p) { return holds(p, a); });
                if (all && !holds(e, a)) {
                  FAIL_CHECK(E.str() << " claimed to imply " << e.str() << " but A=" << A.str()
                                     << " B=" << B.str() << " x=" << x.str() << " y=" << y.str());
                }
              }
    }
    CHECK(implications > 50);
  }
}
