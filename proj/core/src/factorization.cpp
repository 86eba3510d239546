#include "heq/factorization.hpp"

#include <algorithm>

namespace heq {

bool in_MG(const Term& u, const TermSet& G) {
  for (const auto& g : maximal_ground_subterms(u))
    if (!G.count(g)) return false;
  return true;
}

TermClass classify(const Term& t, const TermSet& S) {
  return S.count(t) ? TermClass::Small : TermClass::Large;
}

Factorization factorize(const Term& t, const TermUniverse& universe) {
  if (!t.is_ground()) throw std::invalid_argument("factorize: term is not ground: " + t.str());
  if (universe.S.count(t)) throw std::invalid_argument("factorize: term is small: " + t.str());
  // Candidates in ascending (size, structure) order. The first x not in S for
  // which t with x cut out lies in M_G covers every minimal non-G subterm.
  for (const auto& x : subterms(t)) {
    if (universe.S.count(x)) continue;
    Term m = replace_all(t, x, Term::hole());
    if (in_MG(m, universe.G)) return {m, x};
  }
  throw std::logic_error("factorize: no factorization for " + t.str());
}

std::vector<Term> decompose(const Term& m) {
  std::vector<Term> out;
  Term cur = m;
  while (!cur.is_hole()) {
    if (!cur.has_hole()) throw std::invalid_argument("decompose: not a template: " + m.str());
    std::vector<Term> candidates;
    for (const auto& v : subterms(cur))
      if (v.has_hole() && !v.is_hole() && !(v == cur)) candidates.push_back(v);
    std::sort(candidates.begin(), candidates.end(), [](const Term& a, const Term& b) { return b < a; });
    bool split = false;
    for (const auto& v : candidates) {
      Term u = replace_all(cur, v, Term::hole());
      if (subst_hole(u, v) == cur) {
        out.push_back(u);
        cur = v;
        split = true;
        break;
      }
    }
    if (!split) {
      out.push_back(cur);
      break;
    }
  }
  return out;
}

bool is_irreducible(const Term& u) {
  if (u.is_hole()) throw std::invalid_argument("is_irreducible: the hole is neutral");
  return decompose(u).size() == 1;
}

Term compose(const std::vector<Term>& factors) {
  Term out = Term::hole();
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) out = subst_hole(*it, out);
  return out;
}

}  // namespace heq
