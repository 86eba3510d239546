#include "heq/words.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "heq/factorization.hpp"

namespace heq {

namespace {

struct LetterTable {
  std::mutex mu;
  std::map<Term, std::uint32_t> ids;
  std::vector<Term> templates;
};

LetterTable& table() {
  static LetterTable t;
  return t;
}

// u = root^k with the smallest root, as literal repetition
std::pair<Word, long> primitive_root(const Word& u) {
  const std::size_t n = u.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d) continue;
    bool periodic = true;
    for (std::size_t i = d; i < n && periodic; ++i) periodic = u[i] == u[i - d];
    if (periodic) return {Word(u.begin(), u.begin() + static_cast<long>(d)), static_cast<long>(n / d)};
  }
  return {u, 1};
}

}  // namespace

std::uint32_t intern_letter(const Term& irreducible) {
  auto& t = table();
  std::lock_guard lock(t.mu);
  auto it = t.ids.find(irreducible);
  if (it != t.ids.end()) return it->second;
  auto id = static_cast<std::uint32_t>(t.templates.size());
  t.templates.push_back(irreducible);
  t.ids.emplace(irreducible, id);
  return id;
}

Term letter_template(std::uint32_t id) {
  auto& t = table();
  std::lock_guard lock(t.mu);
  return t.templates.at(id);
}

Letter positive(const Term& irreducible) { return {intern_letter(irreducible), false}; }

Word word_of(const Term& tmpl) {
  Word out;
  for (const auto& f : decompose(tmpl)) out.push_back(positive(f));
  return out;
}

Word reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (const auto& l : w) {
    if (!out.empty() && out.back().id == l.id && out.back().inverse != l.inverse)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

Word concat(const Word& u, const Word& v) {
  Word out = reduce(u);
  for (const auto& l : v) {
    if (!out.empty() && out.back().id == l.id && out.back().inverse != l.inverse)
      out.pop_back();
    else
      out.push_back(l);
  }
  return reduce(out);
}

Word invert(const Word& u) {
  Word out(u.rbegin(), u.rend());
  for (auto& l : out) l.inverse = !l.inverse;
  return out;
}

long balance(const Word& u) {
  long b = 0;
  for (const auto& l : u) b += l.inverse ? -1 : 1;
  return b;
}

bool non_negative(const Word& u) {
  long b = 0;
  for (const auto& l : u) {
    b += l.inverse ? -1 : 1;
    if (b < 0) return false;
  }
  return true;
}

bool is_positive(const Word& u) {
  for (const auto& l : u)
    if (l.inverse) return false;
  return true;
}

Word power(const Word& u, long k) {
  if (k < 0) return power(invert(u), -k);
  Word out;
  for (long i = 0; i < k; ++i) out = concat(out, u);
  return out;
}

std::string to_string(const Word& w) {
  if (w.empty()) return "ε";
  std::string out;
  for (const auto& l : w) {
    if (!out.empty()) out += ' ';
    out += letter_template(l.id).str();
    if (l.inverse) out += "^-1";
  }
  return out;
}

Relation Relation::conjugation(const WordPair& p) {
  // unique roots in free groups: (A w A^-1)^g = (B w' B^-1)^g iff A w A^-1 = B w' B^-1
  auto [ru, ku] = primitive_root(p.u);
  auto [rv, kv] = primitive_root(p.v);
  long g = std::gcd(ku, kv);
  Relation r;
  r.kind = RelKind::Conjugation;
  r.pair = {power(ru, ku / g), power(rv, kv / g)};
  return r;
}

std::string Relation::str() const {
  switch (kind) {
    case RelKind::Trivial:
      return "true";
    case RelKind::Contradiction:
      return "false";
    case RelKind::Solved:
      if (orientation == Orientation::AIsBw) return "A = B " + to_string(w);
      return "A " + to_string(w) + " = B";
    case RelKind::Conjugation:
      return "A " + to_string(pair.u) + " A^-1 = B " + to_string(pair.v) + " B^-1";
  }
  return "?";
}

Relation lemma_base(const Word& u0, const Word& v0) {
  Word u = reduce(u0), v = reduce(v0);
  if (balance(u) != 0 || balance(v) != 0 || !non_negative(u) || !non_negative(v))
    throw std::invalid_argument("lemma_base: words must be non-negative with balance 0");
  if (u.empty() && v.empty()) return Relation::trivial();
  if (u.empty() || v.empty()) return Relation::contradiction();
  struct Split {
    Word x, y, z;
  };
  auto split = [](const Word& w) {
    std::size_t i = 0;
    while (i < w.size() && !w[i].inverse) ++i;
    std::size_t j = w.size();
    while (j > i && w[j - 1].inverse) --j;
    Split s;
    s.x.assign(w.begin(), w.begin() + static_cast<long>(i));
    s.y.assign(w.begin() + static_cast<long>(i), w.begin() + static_cast<long>(j));
    s.z = invert(Word(w.begin() + static_cast<long>(j), w.end()));
    return s;
  };
  Split a = split(u), b = split(v);
  if (a.y != b.y) return Relation::contradiction();
  // A x = B x' and A z = B z' both pin B^-1 A
  Word d1 = concat(b.x, invert(a.x));
  Word d2 = concat(b.z, invert(a.z));
  if (d1 != d2) return Relation::contradiction();
  if (is_positive(d1)) return Relation::solved(Orientation::AIsBw, d1);
  Word inv = invert(d1);
  if (is_positive(inv)) return Relation::solved(Orientation::AwIsB, inv);
  return Relation::contradiction();
}

Relation relation_of(const WordPair& p0) {
  WordPair p{reduce(p0.u), reduce(p0.v)};
  if (balance(p.u) != balance(p.v)) return Relation::contradiction();
  if (balance(p.u) == 0) return lemma_base(p.u, p.v);
  return Relation::conjugation(p);
}

Relation solve_conjugation_pair(const WordPair& p0, const WordPair& q0) {
  WordPair p{reduce(p0.u), reduce(p0.v)};
  WordPair q{reduce(q0.u), reduce(q0.v)};
  for (const auto* w : {&p.u, &p.v, &q.u, &q.v})
    if (!non_negative(*w)) throw std::invalid_argument("solve_conjugation_pair: negative word");
  if (balance(p.u) != balance(p.v) || balance(q.u) != balance(q.v))
    throw std::invalid_argument("solve_conjugation_pair: unbalanced pair");
  for (;;) {
    if (balance(p.u) < balance(q.u)) std::swap(p, q);
    const long bu = balance(p.u), bv = balance(q.u);
    if (bv == 0) return conjoin(lemma_base(q.u, q.v), p);
    const long r = bu / bv;
    Word w = concat(p.u, power(invert(q.u), r));
    Word w2 = concat(p.v, power(invert(q.v), r));
    if (w.empty() && w2.empty()) return relation_of(q);
    if (w.empty() || w2.empty()) return Relation::contradiction();
    p = std::move(q);
    q = {std::move(w), std::move(w2)};
  }
}

Relation conjoin(const Relation& r, const WordPair& p) {
  switch (r.kind) {
    case RelKind::Contradiction:
      return r;
    case RelKind::Trivial:
      return relation_of(p);
    case RelKind::Solved:
      return relation_implies(r, p) ? r : Relation::contradiction();
    case RelKind::Conjugation:
      if (balance(reduce(p.u)) != balance(reduce(p.v))) return Relation::contradiction();
      return solve_conjugation_pair(r.pair, p);
  }
  return Relation::contradiction();
}

bool relation_implies(const Relation& r, const WordPair& p0) {
  WordPair p{reduce(p0.u), reduce(p0.v)};
  switch (r.kind) {
    case RelKind::Contradiction:
      return true;
    case RelKind::Trivial:
      return p.u.empty() && p.v.empty();
    case RelKind::Solved:
      if (r.orientation == Orientation::AIsBw)
        return concat(concat(r.w, p.u), invert(r.w)) == p.v;
      return concat(concat(r.w, p.v), invert(r.w)) == p.u;
    case RelKind::Conjugation:
      if (balance(p.u) != balance(p.v)) return false;
      return solve_conjugation_pair(r.pair, p) == r;
  }
  return false;
}

bool pair_holds(const WordPair& p, const Word& A, const Word& B) {
  return concat(concat(A, p.u), invert(A)) == concat(concat(B, p.v), invert(B));
}

bool relation_holds(const Relation& r, const Word& A, const Word& B) {
  switch (r.kind) {
    case RelKind::Trivial:
      return true;
    case RelKind::Contradiction:
      return false;
    case RelKind::Solved:
      if (r.orientation == Orientation::AIsBw) return reduce(A) == concat(B, r.w);
      return concat(A, r.w) == reduce(B);
    case RelKind::Conjugation:
      return pair_holds(r.pair, A, B);
  }
  return false;
}

}  // namespace heq
