#include "heq/subsumption.hpp"

#include <algorithm>
#include <stdexcept>

#include "heq/factorization.hpp"

namespace heq {

namespace {

const Term& diamond() {
  static const Term d = Term::apply(kDiamond);
  return d;
}

Term close_holes(const Term& t) { return t.has_hole() ? subst_hole(t, diamond()) : t; }

// a large variable treated as an opaque constant
Term freeze(const Term& t, const std::string& x) { return subst_var(t, x, Term::apply("<" + x + ">")); }

std::optional<std::string> lone_var(const Term& t) {
  if (t.has_many_vars()) throw std::logic_error("body with two variables: " + t.str());
  return t.single_var();
}

bool is_one_var_format(FormatKind k) {
  return k == FormatKind::AC || k == FormatKind::SmallLeft || k == FormatKind::SmallRight;
}

bool is_word_format(FormatKind k) {
  return k == FormatKind::LargeLeft || k == FormatKind::LargeRight || k == FormatKind::TwoVar;
}

// the variable side of a one-variable format
const Term& var_side(const Equality& e, FormatKind k) { return k == FormatKind::SmallLeft ? e.t() : e.s(); }

struct WordView {
  Word s, t;  // ground side (A side for TwoVar) first
  std::optional<Term> anchor;
};

WordView words_for(const Equality& e, FormatKind k, const ApproxCtx& ctx) {
  WordView w;
  if (k == FormatKind::TwoVar) {
    w.s = word_of(var_to_hole(e.s()));
    w.t = word_of(var_to_hole(e.t()));
    return w;
  }
  const bool left = k == FormatKind::LargeLeft;
  const Term& ground = left ? e.s() : e.t();
  const Term& open = left ? e.t() : e.s();
  auto f = factorize(ground, TermUniverse{ctx.K, ctx.K});
  w.s = word_of(f.m);
  w.t = word_of(var_to_hole(open));
  w.anchor = f.x;
  return w;
}

WordPair relative_pair(const Word& s, const Word& t, const Word& bs, const Word& bt) {
  if (balance(s) >= balance(bs)) return {concat(s, invert(bs)), concat(t, invert(bt))};
  return {concat(bs, invert(s)), concat(bt, invert(t))};
}

void settle(Bucket& b, const ApproxCtx& ctx) {
  b.bottom = false;
  b.base.reset();
  b.rel.reset();
  b.anchor.reset();
  b.base_s.clear();
  b.base_t.clear();
  b.solution.reset();
  b.pinned.reset();
  const auto& ms = b.members;
  const FormatKind k = b.format.kind;
  if (ms.empty()) return;

  if (k == FormatKind::ACGround) {
    b.bottom = ms.size() > 1;
    return;
  }

  if (k == FormatKind::GroundAB || k == FormatKind::SameVar) {
    if (ms.size() < 2) return;
    std::vector<std::pair<Term, Term>> eqs;
    for (const auto& e : ms) {
      if (k == FormatKind::SameVar)
        eqs.emplace_back(freeze(e.s(), b.format.x), freeze(e.t(), b.format.x));
      else
        eqs.emplace_back(e.s(), e.t());
    }
    auto sols = solve_system(eqs);
    if (sols.empty())
      b.bottom = true;
    else
      b.solution = sols.front();
    return;
  }

  if (is_one_var_format(k)) {
    const Term& first = var_side(ms[0], k);
    for (std::size_t i = 1; i < ms.size(); ++i) {
      auto m = solve_for_marker(first, var_side(ms[i], k));
      if (m.outcome == MarkerOutcome::AllValues) continue;
      if (m.outcome == MarkerOutcome::NoSolution || ctx.K.count(*m.value) || (b.pinned && *b.pinned != *m.value)) {
        b.bottom = true;
        return;
      }
      b.pinned = m.value;
    }
    return;
  }

  // LargeLeft, LargeRight, TwoVar
  std::vector<WordView> views;
  views.reserve(ms.size());
  for (const auto& e : ms) views.push_back(words_for(e, k, ctx));
  std::size_t base = 0;
  for (std::size_t i = 1; i < views.size(); ++i)
    if (balance(views[i].s) < balance(views[base].s)) base = i;
  const auto& bv = views[base];
  b.base = ms[base];
  b.anchor = bv.anchor;
  b.base_s = bv.s;
  b.base_t = bv.t;
  Relation rel = Relation::trivial();
  for (std::size_t i = 0; i < views.size(); ++i) {
    if (i == base) continue;
    const auto& v = views[i];
    if (v.anchor != bv.anchor || balance(v.s) - balance(bv.s) != balance(v.t) - balance(bv.t)) {
      b.bottom = true;
      return;
    }
    rel = conjoin(rel, relative_pair(v.s, v.t, bv.s, bv.t));
    if (rel.kind == RelKind::Contradiction) {
      b.bottom = true;
      return;
    }
  }
  b.rel = rel;
}

Bucket build(const FormatKey& key, std::vector<Equality> members, const ApproxCtx& ctx) {
  Bucket b = make_bucket(key);
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  b.members = std::move(members);
  settle(b, ctx);
  return b;
}

std::string kind_name(FormatKind k) {
  switch (k) {
    case FormatKind::AC:
      return "AC";
    case FormatKind::ACGround:
      return "ACGround";
    case FormatKind::GroundAB:
      return "GroundAB";
    case FormatKind::SameVar:
      return "SameVar";
    case FormatKind::TwoVar:
      return "TwoVar";
    case FormatKind::LargeLeft:
      return "LargeLeft";
    case FormatKind::LargeRight:
      return "LargeRight";
    case FormatKind::SmallLeft:
      return "SmallLeft";
    case FormatKind::SmallRight:
      return "SmallRight";
  }
  return "?";
}

bool some_bottom(const std::map<FormatKey, Bucket>& bs) {
  return std::any_of(bs.begin(), bs.end(), [](const auto& kv) { return kv.second.bottom; });
}

}  // namespace

ApproxCtx ApproxCtx::make(const TermSet& G, const TermSet& R, std::vector<std::string> vars, bool ir) {
  ApproxCtx ctx;
  ctx.G = G;
  ctx.S = G;
  ctx.S.insert(R.begin(), R.end());
  ctx.K = ir ? G : subterm_closure(ctx.S);
  ctx.vars = std::move(vars);
  ctx.ir = ir;
  return ctx;
}

std::string FormatKey::str() const {
  std::string out = kind_name(kind);
  switch (kind) {
    case FormatKind::AC:
    case FormatKind::SameVar:
    case FormatKind::LargeLeft:
    case FormatKind::LargeRight:
      return out + "(" + x + ")";
    case FormatKind::TwoVar:
      return out + "(" + x + "," + y + ")";
    case FormatKind::SmallLeft:
    case FormatKind::SmallRight:
      return out + "(" + c.str() + "," + x + ")";
    default:
      return out;
  }
}

FormatKey classify_format(const Equality& e, const ApproxCtx& ctx) {
  FormatKey key;
  auto vs = lone_var(e.s());
  if (e.is_const()) {
    if (vs) {
      key.kind = FormatKind::AC;
      key.x = *vs;
    } else {
      key.kind = FormatKind::ACGround;
    }
    return key;
  }
  auto vt = lone_var(e.t());
  if (!vs && !vt) {
    key.kind = FormatKind::GroundAB;
  } else if (vs && vt) {
    key.kind = *vs == *vt ? FormatKind::SameVar : FormatKind::TwoVar;
    key.x = *vs;
    if (*vs != *vt) key.y = *vt;
  } else {
    const Term& ground = vs ? e.t() : e.s();
    if (!ground.is_ground()) throw std::logic_error("template body opposite a variable: " + e.str());
    key.x = vs ? *vs : *vt;
    if (ctx.K.count(ground)) {
      key.kind = vs ? FormatKind::SmallRight : FormatKind::SmallLeft;
      key.c = ground;
    } else {
      key.kind = vs ? FormatKind::LargeRight : FormatKind::LargeLeft;
    }
  }
  return key;
}

std::string Bucket::str() const {
  std::string out = format.str() + ":";
  for (const auto& e : members) out += " [" + e.factored() + "]";
  if (bottom) return out + " => false";
  if (rel) out += " rel " + rel->str();
  if (anchor) out += " anchor " + anchor->str();
  if (solution) out += " solution " + to_string(*solution);
  if (pinned) out += " pinned " + pinned->str();
  return out;
}

Bucket make_bucket(const FormatKey& format) {
  Bucket b;
  b.format = format;
  return b;
}

Bucket bucket_add(const Bucket& b, const Equality& e, const ApproxCtx& ctx) {
  if (classify_format(e, ctx) != b.format) throw std::invalid_argument("bucket_add: format mismatch");
  auto ms = b.members;
  ms.push_back(e);
  return build(b.format, std::move(ms), ctx);
}

bool bucket_subsumes(const Bucket& b, const Equality& e, const ApproxCtx& ctx) {
  if (b.bottom) return true;
  if (std::binary_search(b.members.begin(), b.members.end(), e)) return true;
  if (b.members.empty()) return false;
  const FormatKind k = b.format.kind;
  if (k == FormatKind::ACGround) return false;

  if (k == FormatKind::GroundAB || k == FormatKind::SameVar) {
    if (!b.solution) return false;
    Term s = e.s(), t = e.t();
    if (k == FormatKind::SameVar) {
      s = freeze(s, b.format.x);
      t = freeze(t, b.format.x);
    }
    return subst_hole(b.solution->rA, close_holes(s)) == subst_hole(b.solution->rB, close_holes(t));
  }

  if (is_one_var_format(k)) {
    if (!b.pinned) return false;
    const auto& x = b.format.x;
    return subst_var(var_side(e, k), x, *b.pinned) == subst_var(var_side(b.members[0], k), x, *b.pinned);
  }

  if (!is_word_format(k) || !b.rel) return false;
  auto v = words_for(e, k, ctx);
  if (v.anchor != b.anchor) return false;
  if (balance(v.s) - balance(b.base_s) != balance(v.t) - balance(b.base_t)) return false;
  return relation_implies(*b.rel, relative_pair(v.s, v.t, b.base_s, b.base_t));
}

Equality apply_subst(const Equality& e, const SmallSubst& sigma) {
  Equality out = e;
  for (const auto& [x, v] : sigma) {
    out.lhs.body = subst_var(out.lhs.body, x, v);
    if (out.is_pair()) out.rhs.body = subst_var(out.rhs.body, x, v);
  }
  return out;
}

std::vector<SmallSubst> small_substitutions(const std::set<std::string>& vars, const ApproxCtx& ctx) {
  std::vector<SmallSubst> out{SmallSubst{}};
  for (const auto& x : vars) {
    std::vector<SmallSubst> next;
    next.reserve(out.size() * (ctx.K.size() + 1));
    for (const auto& sigma : out) {
      next.push_back(sigma);
      for (const auto& k : ctx.K) {
        auto s = sigma;
        s.emplace(x, k);
        next.push_back(std::move(s));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::map<FormatKey, Bucket> buckets_of(const Conjunction& E, const SmallSubst& sigma, const ApproxCtx& ctx) {
  std::map<FormatKey, std::vector<Equality>> groups;
  for (const auto& e : E.equalities()) {
    auto se = apply_subst(e, sigma);
    groups[classify_format(se, ctx)].push_back(std::move(se));
  }
  std::map<FormatKey, Bucket> out;
  for (auto& [key, ms] : groups) out.emplace(key, build(key, std::move(ms), ctx));
  return out;
}

bool approx_subsumes(const Conjunction& E, const Conjunction& E2, const ApproxCtx& ctx) {
  if (E.is_bottom()) return true;
  if (E2.is_bottom()) {
    for (const auto& sigma : small_substitutions(E.vars(), ctx))
      if (!some_bottom(buckets_of(E, sigma, ctx))) return false;
    return true;
  }
  for (const auto& e2 : E2.equalities()) {
    if (E.contains(e2)) continue;
    const auto vs = e2.vars();
    // premises mentioning other variables land in other formats under some sigma
    Conjunction premises;
    for (const auto& e : E.equalities()) {
      auto ev = e.vars();
      if (std::includes(vs.begin(), vs.end(), ev.begin(), ev.end())) premises.add(e);
    }
    for (const auto& sigma : small_substitutions(vs, ctx)) {
      auto bs = buckets_of(premises, sigma, ctx);
      if (some_bottom(bs)) continue;
      auto se = apply_subst(e2, sigma);
      auto it = bs.find(classify_format(se, ctx));
      if (it == bs.end() || !bucket_subsumes(it->second, se, ctx)) return false;
    }
  }
  return true;
}

bool approx_equivalent(const Conjunction& E, const Conjunction& E2, const ApproxCtx& ctx) {
  return approx_subsumes(E, E2, ctx) && approx_subsumes(E2, E, ctx);
}

Conjunction compact(const Conjunction& E, const ApproxCtx& ctx) {
  if (E.is_bottom() || E.size() <= 1) return E;
  if (approx_subsumes(E, Conjunction::bottom(), ctx)) return Conjunction::bottom();
  auto cur = E.equalities();
  for (std::size_t i = cur.size(); i-- > 0;) {
    std::vector<Equality> rest;
    rest.reserve(cur.size() - 1);
    for (std::size_t j = 0; j < cur.size(); ++j)
      if (j != i) rest.push_back(cur[j]);
    if (approx_subsumes(Conjunction::of(rest), Conjunction::of({cur[i]}), ctx)) cur = std::move(rest);
  }
  return Conjunction::of(std::move(cur));
}

std::uint64_t compaction_bound(std::uint64_t n, std::uint64_t m) {
  const std::uint64_t pairs = n > 0 ? n * (n - 1) : 0;
  return n * (2 * m + 3) * (2 * m + 3) + pairs * (4 * m * m + 6 * m + 3) + (n + 1);
}

}  // namespace heq
