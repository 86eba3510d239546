#include "heq/equalities.hpp"

#include <algorithm>
#include <stdexcept>

#include "heq/factorization.hpp"

namespace heq {

const char* const kDiamond = "<>";

namespace {

const char* head_name(TVar v) {
  switch (v) {
    case TVar::A:
      return "A";
    case TVar::B:
      return "B";
    case TVar::C:
      return "C";
  }
  return "?";
}

std::string factored_body(const Term& body) {
  if (body.is_ground() || body.is_template()) return body.str();
  std::string out;
  for (const auto& f : decompose(var_to_hole(body))) out += f.str() + " ";
  return out + *body.single_var();
}

const Term& diamond() {
  static const Term d = Term::apply(kDiamond);
  return d;
}

Term close_holes(const Term& t) { return t.has_hole() ? subst_hole(t, diamond()) : t; }

bool mentions_diamond(const Term& t) { return !occurrences(t, diamond()).empty(); }

void mismatches(const Term& a, const Term& b, Path& at, std::vector<Path>& out) {
  if (a == b) return;
  if (a.kind() != b.kind() || a.name_id() != b.name_id() || a.arity() != b.arity()) {
    out.push_back(at);
    return;
  }
  for (std::uint32_t i = 0; i < a.arity(); ++i) {
    at.push_back(i);
    mismatches(a.children()[i], b.children()[i], at, out);
    at.pop_back();
  }
}

// the r with s1 = r t1 and s2 = r t2, if any (s1 != s2, t1 != t2)
std::optional<Term> common_left_factor(const Term& s1, const Term& s2, const Term& t1, const Term& t2) {
  std::vector<Path> diffs;
  Path at;
  mismatches(s1, s2, at, diffs);
  std::vector<Path> holes;
  for (const auto& d : diffs) {
    bool found = false;
    for (std::size_t len = d.size() + 1; len-- > 0;) {
      Path p(d.begin(), d.begin() + static_cast<long>(len));
      if (subterm_at(s1, p) == t1 && subterm_at(s2, p) == t2) {
        if (std::find(holes.begin(), holes.end(), p) == holes.end()) holes.push_back(p);
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
  }
  if (holes.empty()) return std::nullopt;
  Term r = s1;
  for (const auto& p : holes) r = replace_at(r, p, Term::hole());
  if (subst_hole(r, t1) != s1 || subst_hole(r, t2) != s2) return std::nullopt;
  return r;
}

}  // namespace

Equality Equality::make(Side a, Side b) {
  if (a.head == b.head) throw std::logic_error("equality with identical heads");
  if (b.head == TVar::A) std::swap(a, b);
  if (a.head != TVar::A) throw std::logic_error("equality without an A side");
  return {std::move(a), std::move(b)};
}

std::set<std::string> Equality::vars() const {
  auto v = lhs.body.vars();
  if (is_pair()) v.merge(rhs.body.vars());
  return v;
}

std::string Equality::str() const {
  std::string out = "A[" + lhs.body.str() + "] == ";
  if (is_const()) return out + "C";
  return out + head_name(rhs.head) + "[" + rhs.body.str() + "]";
}

std::string Equality::factored() const {
  std::string out = "A " + factored_body(lhs.body) + " == ";
  if (is_const()) return out + "C";
  return out + "B " + factored_body(rhs.body);
}

Conjunction Conjunction::bottom() {
  Conjunction c;
  c.bottom_ = true;
  return c;
}

Conjunction Conjunction::of(std::vector<Equality> eqs) {
  Conjunction c;
  for (auto& e : eqs) c.add(e);
  return c;
}

bool Conjunction::contains(const Equality& e) const {
  return std::find(eqs_.begin(), eqs_.end(), e) != eqs_.end();
}

bool Conjunction::add(const Equality& e) {
  if (bottom_ || contains(e)) return false;
  eqs_.push_back(e);
  return true;
}

void Conjunction::add_all(const Conjunction& c) {
  if (c.bottom_) {
    make_bottom();
    return;
  }
  for (const auto& e : c.eqs_) add(e);
}

void Conjunction::make_bottom() {
  bottom_ = true;
  eqs_.clear();
}

std::set<std::string> Conjunction::vars() const {
  std::set<std::string> v;
  for (const auto& e : eqs_) v.merge(e.vars());
  return v;
}

std::string Conjunction::str() const {
  if (bottom_) return "false";
  if (eqs_.empty()) return "true";
  std::string out;
  for (const auto& e : eqs_) {
    if (!out.empty()) out += " && ";
    out += e.str();
  }
  return out;
}

Conjunction conjoin(const Conjunction& a, const Conjunction& b) {
  Conjunction c = a;
  c.add_all(b);
  return c;
}

Conjunction wp_subst(const Conjunction& phi, const std::string& x, const Term& t) {
  if (phi.is_bottom()) return phi;
  Conjunction out;
  for (const auto& e : phi.equalities()) {
    Equality n = e;
    n.lhs.body = subst_var(e.lhs.body, x, t);
    if (e.is_pair()) n.rhs.body = subst_var(e.rhs.body, x, t);
    out.add(n);
  }
  return out;
}

Conjunction forall(const Conjunction& phi, const std::string& x) {
  if (phi.is_bottom()) return phi;
  Conjunction out;
  for (const auto& e : phi.equalities()) {
    bool l = e.lhs.body.vars().count(x) > 0;
    bool r = e.is_pair() && e.rhs.body.vars().count(x) > 0;
    if (!l && !r) {
      out.add(e);
    } else if (l != r) {
      return Conjunction::bottom();
    } else {
      out.add(Equality::pair(subst_var(e.lhs.body, x, Term::hole()), subst_var(e.rhs.body, x, Term::hole())));
    }
  }
  return out;
}

Conjunction universal_closure(const Conjunction& phi, const std::set<std::string>& vars) {
  Conjunction out = phi;
  for (const auto& x : vars) out = forall(out, x);
  return out;
}

SolutionSet solve_single(const Term& s, const Term& t) {
  SolutionSet out;
  if (s.size() >= t.size()) {
    for (auto& r : replacements(s, t)) out.push_back({Term::hole(), r});
  } else {
    for (auto& r : replacements(t, s)) out.push_back({r, Term::hole()});
  }
  std::sort(out.begin(), out.end());
  return out;
}

SolutionSet solve_system(const std::vector<std::pair<Term, Term>>& input) {
  std::vector<std::pair<Term, Term>> eqs;
  bool templated = false;
  for (const auto& [s, t] : input) {
    if (s.has_var() || t.has_var()) throw std::invalid_argument("solve_system: variable in body");
    templated = templated || s.has_hole() || t.has_hole();
    std::pair<Term, Term> g{close_holes(s), close_holes(t)};
    if (std::find(eqs.begin(), eqs.end(), g) == eqs.end()) eqs.push_back(std::move(g));
  }
  if (eqs.empty()) throw std::invalid_argument("solve_system: empty system");
  for (std::size_t i = 0; i < eqs.size(); ++i)
    for (std::size_t j = i + 1; j < eqs.size(); ++j)
      if (eqs[i].first == eqs[j].first || eqs[i].second == eqs[j].second) return {};

  SolutionSet out;
  if (eqs.size() == 1) {
    out = solve_single(eqs[0].first, eqs[0].second);
  } else {
    const auto& [s1, t1] = eqs[0];
    const auto& [s2, t2] = eqs[1];
    if (auto rB = common_left_factor(s1, s2, t1, t2)) out.push_back({Term::hole(), *rB});
    if (auto rA = common_left_factor(t1, t2, s1, s2)) out.push_back({*rA, Term::hole()});
    std::erase_if(out, [&](const SolutionPair& p) {
      for (const auto& [s, t] : eqs)
        if (subst_hole(p.rA, s) != subst_hole(p.rB, t)) return true;
      return false;
    });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  if (templated)
    std::erase_if(out, [](const SolutionPair& p) { return mentions_diamond(p.rA) || mentions_diamond(p.rB); });
  return out;
}

Conjunction solve_const_system(const Conjunction& phi) {
  if (phi.is_bottom() || phi.is_top()) return phi;
  std::optional<Term> value;
  for (const auto& e : phi.equalities()) {
    if (!e.is_const()) throw std::invalid_argument("solve_const_system: pair-type member");
    if (!e.s().is_ground()) throw std::invalid_argument("solve_const_system: non-ground body");
    if (value && *value != e.s()) return Conjunction::bottom();
    value = e.s();
  }
  return Conjunction::of({Equality::constant(*value)});
}

std::string to_string(const SolutionPair& p) { return "(" + p.rA.str() + ", " + p.rB.str() + ")"; }

}  // namespace heq
