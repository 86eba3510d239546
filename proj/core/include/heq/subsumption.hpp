#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heq/equalities.hpp"
#include "heq/words.hpp"

namespace heq {

// Small terms and the set K that small substitutions range over. Values of
// program variables outside K are large and factor uniquely over K.
struct ApproxCtx {
  TermSet G;
  TermSet S;
  TermSet K;
  std::vector<std::string> vars;
  bool ir = false;

  // S = G ∪ R; K = G for IR programs, else the subterm closure of S
  static ApproxCtx make(const TermSet& G, const TermSet& R, std::vector<std::string> vars, bool ir);
};

enum class FormatKind : std::uint8_t {
  AC,          // A s x == C
  ACGround,    // A g == C
  GroundAB,    // A s == B t, no variables (holes allowed)
  SameVar,     // A s x == B t x
  TwoVar,      // A s x == B t y
  LargeLeft,   // A g == B t x, g large
  LargeRight,  // A s x == B g, g large
  SmallLeft,   // A c == B t x, c in K
  SmallRight,  // A s x == B c, c in K
};

struct FormatKey {
  FormatKind kind = FormatKind::GroundAB;
  std::string x;
  std::string y;
  Term c;  // SmallLeft / SmallRight
  friend bool operator==(const FormatKey&, const FormatKey&) = default;
  friend std::strong_ordering operator<=>(const FormatKey&, const FormatKey&) = default;
  std::string str() const;
};

// Every variable left in e is taken to be large.
FormatKey classify_format(const Equality& e, const ApproxCtx& ctx);

// All equalities of one format under one small substitution, plus what
// they jointly entail. Derived state depends only on the member set.
struct Bucket {
  FormatKey format;
  std::vector<Equality> members;  // sorted, distinct
  bool bottom = false;

  std::optional<Equality> base;          // LargeLeft/LargeRight/TwoVar
  std::optional<Relation> rel;           // LargeLeft/LargeRight/TwoVar
  std::optional<Term> anchor;            // LargeLeft/LargeRight
  Word base_s, base_t;                   // words of the base, ground side first
  std::optional<SolutionPair> solution;  // GroundAB/SameVar with >= 2 members
  std::optional<Term> pinned;            // value forced on the variable

  std::string str() const;
};

Bucket make_bucket(const FormatKey& format);
Bucket bucket_add(const Bucket& b, const Equality& e, const ApproxCtx& ctx);
bool bucket_subsumes(const Bucket& b, const Equality& e, const ApproxCtx& ctx);

// small substitution: variables mapped into K, the rest stay large
using SmallSubst = std::map<std::string, Term>;
Equality apply_subst(const Equality& e, const SmallSubst& sigma);
// all (|K|+1)^|vars| small substitutions
std::vector<SmallSubst> small_substitutions(const std::set<std::string>& vars, const ApproxCtx& ctx);
std::map<FormatKey, Bucket> buckets_of(const Conjunction& E, const SmallSubst& sigma, const ApproxCtx& ctx);

// E ⟹# E'
bool approx_subsumes(const Conjunction& E, const Conjunction& E2, const ApproxCtx& ctx);
bool approx_equivalent(const Conjunction& E, const Conjunction& E2, const ApproxCtx& ctx);
// an irredundant subset of E (or Bottom) with E ⟺# compact(E)
Conjunction compact(const Conjunction& E, const ApproxCtx& ctx);

// n (2m+3)^2 + n(n-1)(4m^2+6m+3) + (n+1)
std::uint64_t compaction_bound(std::uint64_t n, std::uint64_t m);

}  // namespace heq
