#pragma once

#include <vector>

#include "heq/term.hpp"

namespace heq {

// G must be closed under subterms and contained in S.
struct TermUniverse {
  TermSet G;
  TermSet S;
};

enum class TermClass { Small, Large };

struct Factorization {
  Term m;  // template in M_G
  Term x;  // minimal large tail, not in S
};

// every maximal ground subterm of u lies in G
bool in_MG(const Term& u, const TermSet& G);
TermClass classify(const Term& t, const TermSet& S);
// unique factorization t = m x; throws std::invalid_argument when t is in S
Factorization factorize(const Term& t, const TermUniverse& universe);
// irreducible factors u1..uk with u1 ... uk = m; empty for the hole
std::vector<Term> decompose(const Term& m);
// throws std::invalid_argument on the hole
bool is_irreducible(const Term& u);
// u1 u2 ... uk by hole substitution; the hole for an empty sequence
Term compose(const std::vector<Term>& factors);

}  // namespace heq
