#include "heq/term.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

namespace heq {

namespace {

constexpr std::uint32_t kNoVar = 0;
constexpr std::uint32_t kManyVars = std::numeric_limits<std::uint32_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = a + b;
  return r < a ? std::numeric_limits<std::uint64_t>::max() : r;
}

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

class NameTable {
 public:
  std::uint32_t intern(std::string_view s) {
    std::lock_guard lock(mu_);
    auto it = ids_.find(std::string(s));
    if (it != ids_.end()) return it->second;
    auto id = static_cast<std::uint32_t>(names_.size());
    names_.push_back(std::make_unique<std::string>(s));
    ids_.emplace(*names_.back(), id);
    return id;
  }
  const std::string& name(std::uint32_t id) {
    std::lock_guard lock(mu_);
    return *names_[id];
  }

 private:
  std::mutex mu_;
  std::vector<std::unique_ptr<std::string>> names_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

NameTable& names() {
  static NameTable table;
  return table;
}

}  // namespace

namespace detail {
struct Node {
  NodeKind kind;
  std::uint32_t id;
  std::vector<Term> kids;
  std::size_t hash;
  std::uint64_t size;
  std::uint64_t holes;
  std::uint32_t var;  // kNoVar, kManyVars, or variable id + 1
};
}  // namespace detail

namespace {

class InternTable {
 public:
  std::shared_ptr<const detail::Node> get(NodeKind kind, std::uint32_t id, std::vector<Term> kids) {
    std::size_t h = mix(static_cast<std::size_t>(kind) * 1315423911u, id);
    for (const auto& k : kids) h = mix(h, k.hash());
    std::lock_guard lock(mu_);
    auto range = table_.equal_range(h);
    for (auto it = range.first; it != range.second;) {
      auto sp = it->second.lock();
      if (!sp) {
        it = table_.erase(it);
        continue;
      }
      if (sp->kind == kind && sp->id == id && sp->kids.size() == kids.size() &&
          std::equal(kids.begin(), kids.end(), sp->kids.begin()))
        return sp;
      ++it;
    }
    auto node = std::make_shared<detail::Node>();
    node->kind = kind;
    node->id = id;
    node->hash = h;
    node->size = 1;
    node->holes = kind == NodeKind::Hole ? 1 : 0;
    node->var = kind == NodeKind::Var ? id + 1 : kNoVar;
    for (const auto& k : kids) {
      const auto* kn = k.node();
      node->size = sat_add(node->size, kn->size);
      node->holes = sat_add(node->holes, kn->holes);
      if (kn->var != kNoVar) {
        if (node->var == kNoVar)
          node->var = kn->var;
        else if (node->var != kn->var)
          node->var = kManyVars;
      }
    }
    node->kids = std::move(kids);
    if (table_.size() > sweep_at_) sweep();
    table_.emplace(h, node);
    return node;
  }

 private:
  void sweep() {
    for (auto it = table_.begin(); it != table_.end();) {
      if (it->second.expired())
        it = table_.erase(it);
      else
        ++it;
    }
    sweep_at_ = std::max<std::size_t>(1 << 14, table_.size() * 2);
  }

  std::mutex mu_;
  std::unordered_multimap<std::size_t, std::weak_ptr<const detail::Node>> table_;
  std::size_t sweep_at_ = 1 << 14;
};

InternTable& interned() {
  static InternTable table;
  return table;
}

}  // namespace

Term make_node(NodeKind kind, std::uint32_t id, std::vector<Term> kids) {
  return Term(interned().get(kind, id, std::move(kids)));
}

Term::Term() : Term(hole()) {}

Term Term::hole() {
  static const Term h = make_node(NodeKind::Hole, names().intern("_"), {});
  return h;
}

Term Term::apply(std::string_view symbol, std::vector<Term> children) {
  return make_node(NodeKind::Apply, names().intern(symbol), std::move(children));
}

Term Term::var(std::string_view name) { return make_node(NodeKind::Var, names().intern(name), {}); }

NodeKind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return names().name(node_->id); }
std::uint32_t Term::name_id() const { return node_->id; }
const std::vector<Term>& Term::children() const { return node_->kids; }
std::uint64_t Term::size() const { return node_->size; }
std::uint64_t Term::hole_count() const { return node_->holes; }
std::size_t Term::hash() const { return node_->hash; }
bool Term::has_hole() const { return node_->holes > 0; }
bool Term::has_var() const { return node_->var != kNoVar; }
bool Term::has_many_vars() const { return node_->var == kManyVars; }

std::optional<std::string> Term::single_var() const {
  if (node_->var == kNoVar || node_->var == kManyVars) return std::nullopt;
  return names().name(node_->var - 1);
}

std::set<std::string> Term::vars() const {
  std::set<std::string> out;
  std::unordered_set<const detail::Node*> seen;
  std::function<void(const Term&)> walk = [&](const Term& t) {
    if (!t.has_var() || !seen.insert(t.node()).second) return;
    if (t.is_var()) out.insert(t.name());
    for (const auto& k : t.children()) walk(k);
  };
  walk(*this);
  return out;
}

namespace {
void render(const Term& t, std::string& out, std::size_t budget) {
  if (out.size() > budget) return;
  if (t.is_hole()) {
    out += '_';
    return;
  }
  out += t.name();
  if (t.arity() == 0) return;
  out += '(';
  bool first = true;
  for (const auto& k : t.children()) {
    if (!first) out += ',';
    first = false;
    render(k, out, budget);
    if (out.size() > budget) return;
  }
  out += ')';
}
}  // namespace

std::string Term::str() const {
  constexpr std::size_t kBudget = 1 << 16;
  std::string out;
  render(*this, out, kBudget);
  if (out.size() > kBudget) {
    out.resize(kBudget);
    out += "...";
  }
  return out;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  const auto* x = a.node();
  const auto* y = b.node();
  if (x->size != y->size) return x->size <=> y->size;
  if (x->kind != y->kind) return x->kind <=> y->kind;
  if (x->id != y->id) {
    int c = a.name().compare(b.name());
    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (x->kids.size() != y->kids.size()) return x->kids.size() <=> y->kids.size();
  for (std::size_t i = 0; i < x->kids.size(); ++i) {
    auto c = x->kids[i] <=> y->kids[i];
    if (c != std::strong_ordering::equal) return c;
  }
  return std::strong_ordering::equal;
}

namespace {

template <class Pred, class Leaf>
Term rebuild(const Term& t, Pred&& descend, Leaf&& leaf,
             std::unordered_map<const detail::Node*, Term>& memo) {
  if (!descend(t)) return t;
  if (auto it = memo.find(t.node()); it != memo.end()) return it->second;
  Term out;
  if (t.arity() == 0) {
    out = leaf(t);
  } else {
    std::vector<Term> kids;
    kids.reserve(t.arity());
    bool changed = false;
    for (const auto& k : t.children()) {
      kids.push_back(rebuild(k, descend, leaf, memo));
      changed = changed || !(kids.back() == k);
    }
    out = changed ? Term::apply(t.name(), std::move(kids)) : t;
  }
  memo.emplace(t.node(), out);
  return out;
}

}  // namespace

Term subst_hole(const Term& u, const Term& t) {
  if (!u.has_hole()) return u;
  std::unordered_map<const detail::Node*, Term> memo;
  return rebuild(
      u, [](const Term& n) { return n.has_hole(); },
      [&](const Term& n) { return n.is_hole() ? t : n; }, memo);
}

Term subst_var(const Term& t, std::string_view x, const Term& s) {
  if (!t.has_var()) return t;
  std::unordered_map<const detail::Node*, Term> memo;
  return rebuild(
      t, [](const Term& n) { return n.has_var(); },
      [&](const Term& n) { return n.is_var() && n.name() == x ? s : n; }, memo);
}

Term var_to_hole(const Term& t) {
  if (!t.has_var()) return t;
  std::unordered_map<const detail::Node*, Term> memo;
  return rebuild(
      t, [](const Term& n) { return n.has_var(); },
      [](const Term& n) { return n.is_var() ? Term::hole() : n; }, memo);
}

Term replace_all(const Term& t, const Term& from, const Term& to) {
  std::unordered_map<const detail::Node*, Term> memo;
  std::function<Term(const Term&)> go = [&](const Term& n) -> Term {
    if (n == from) return to;
    if (n.size() <= from.size() || n.arity() == 0) return n;
    if (auto it = memo.find(n.node()); it != memo.end()) return it->second;
    std::vector<Term> kids;
    kids.reserve(n.arity());
    bool changed = false;
    for (const auto& k : n.children()) {
      kids.push_back(go(k));
      changed = changed || !(kids.back() == k);
    }
    Term out = changed ? Term::apply(n.name(), std::move(kids)) : n;
    memo.emplace(n.node(), out);
    return out;
  };
  return go(t);
}

std::optional<Term> divide(const Term& t, const Term& u) {
  std::optional<Term> bound;
  std::function<bool(const Term&, const Term&)> go = [&](const Term& pat, const Term& val) {
    if (pat.is_hole()) {
      if (bound && !(*bound == val)) return false;
      bound = val;
      return true;
    }
    if (!pat.has_hole()) return pat == val;
    if (!pat.is_apply() || !val.is_apply() || pat.name_id() != val.name_id() ||
        pat.arity() != val.arity())
      return false;
    for (std::size_t i = 0; i < pat.arity(); ++i)
      if (!go(pat.children()[i], val.children()[i])) return false;
    return true;
  };
  if (!go(u, t) || !bound) return std::nullopt;
  return bound;
}

std::vector<Path> occurrences(const Term& s, const Term& t) {
  std::vector<Path> out;
  Path cur;
  std::function<void(const Term&)> walk = [&](const Term& n) {
    if (n == t) {
      out.push_back(cur);
      return;
    }
    if (n.size() <= t.size()) return;
    for (std::uint32_t i = 0; i < n.arity(); ++i) {
      cur.push_back(i);
      walk(n.children()[i]);
      cur.pop_back();
    }
  };
  walk(s);
  return out;
}

const Term& subterm_at(const Term& t, const Path& p) {
  const Term* cur = &t;
  for (auto i : p) {
    if (i >= cur->arity()) throw std::out_of_range("path leaves the term");
    cur = &cur->children()[i];
  }
  return *cur;
}

Term replace_at(const Term& t, const Path& p, const Term& r) {
  std::function<Term(const Term&, std::size_t)> go = [&](const Term& n, std::size_t d) -> Term {
    if (d == p.size()) return r;
    if (p[d] >= n.arity()) throw std::out_of_range("path leaves the term");
    std::vector<Term> kids = n.children();
    kids[p[d]] = go(kids[p[d]], d + 1);
    return Term::apply(n.name(), std::move(kids));
  };
  return go(t, 0);
}

std::vector<Term> replacements(const Term& s, const Term& t) {
  auto occ = occurrences(s, t);
  if (occ.empty()) return {};
  if (occ.size() > 20) throw std::length_error("too many occurrences to enumerate replacements");
  std::set<Term> out;
  const std::uint64_t n = occ.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    Term r = s;
    for (std::uint64_t i = 0; i < n; ++i)
      if (mask & (std::uint64_t{1} << i)) r = replace_at(r, occ[i], Term::hole());
    out.insert(r);
  }
  return {out.begin(), out.end()};
}

MarkerSolution solve_for_marker(const Term& u, const Term& v) {
  if (u == v) return {MarkerOutcome::AllValues, std::nullopt};
  Term marker = Term::hole();
  auto uv = u.single_var();
  auto vv = v.single_var();
  if (u.has_many_vars() || v.has_many_vars() || (uv && vv && *uv != *vv))
    throw std::invalid_argument("solve_for_marker: more than one marker");
  if (uv)
    marker = Term::var(*uv);
  else if (vv)
    marker = Term::var(*vv);
  auto contains_marker = [&](const Term& t) { return marker.is_hole() ? t.has_hole() : t.has_var(); };

  std::optional<Term> bound;
  std::function<bool(const Term&, const Term&)> go = [&](const Term& a, const Term& b) {
    if (a == b) return true;
    if (a == marker || b == marker) {
      const Term& other = a == marker ? b : a;
      if (contains_marker(other)) return false;
      if (bound && !(*bound == other)) return false;
      bound = other;
      return true;
    }
    if (!a.is_apply() || !b.is_apply() || a.name_id() != b.name_id() || a.arity() != b.arity())
      return false;
    for (std::size_t i = 0; i < a.arity(); ++i)
      if (!go(a.children()[i], b.children()[i])) return false;
    return true;
  };
  if (!go(u, v) || !bound) return {MarkerOutcome::NoSolution, std::nullopt};
  auto put = [&](const Term& t) {
    return marker.is_hole() ? subst_hole(t, *bound) : subst_var(t, marker.name(), *bound);
  };
  if (!(put(u) == put(v))) return {MarkerOutcome::NoSolution, std::nullopt};
  return {MarkerOutcome::Exactly, bound};
}

TermSet subterms(const Term& t) {
  TermSet out;
  std::function<void(const Term&)> walk = [&](const Term& n) {
    if (!out.insert(n).second) return;
    for (const auto& k : n.children()) walk(k);
  };
  walk(t);
  return out;
}

TermSet subterm_closure(const TermSet& ts) {
  TermSet out;
  for (const auto& t : ts) {
    auto s = subterms(t);
    out.insert(s.begin(), s.end());
  }
  return out;
}

TermSet maximal_ground_subterms(const Term& t) {
  TermSet out;
  std::function<void(const Term&)> walk = [&](const Term& n) {
    if (n.is_ground()) {
      out.insert(n);
      return;
    }
    for (const auto& k : n.children()) walk(k);
  };
  walk(t);
  return out;
}

bool Signature::declare(const std::string& symbol, std::size_t rank) {
  auto [it, fresh] = ranks_.emplace(symbol, rank);
  return fresh || it->second == rank;
}

std::optional<std::size_t> Signature::rank(const std::string& symbol) const {
  auto it = ranks_.find(symbol);
  if (it == ranks_.end()) return std::nullopt;
  return it->second;
}

bool Signature::has_constant() const {
  return std::any_of(ranks_.begin(), ranks_.end(), [](const auto& kv) { return kv.second == 0; });
}

std::optional<std::string> Signature::absorb(const Term& t) {
  for (const auto& s : subterms(t)) {
    if (!s.is_apply()) continue;
    if (!declare(s.name(), s.arity())) return s.name();
  }
  return std::nullopt;
}

namespace {

class TermParser {
 public:
  TermParser(std::string_view text, const std::set<std::string>& vars) : text_(text), vars_(vars) {}

  Term parse_all() {
    Term t = parse();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_ + 1); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  Term parse() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected an identifier or '_'");
    std::string id(text_.substr(start, pos_ - start));
    skip_ws();
    bool call = pos_ < text_.size() && text_[pos_] == '(';
    if (id == "_") {
      if (call) fail("the hole takes no arguments");
      return Term::hole();
    }
    if (vars_.count(id)) {
      if (call) fail("variable '" + id + "' used as a function symbol");
      return Term::var(id);
    }
    if (!call) return Term::apply(id);
    ++pos_;
    std::vector<Term> kids;
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == ')') fail("empty argument list");
    for (;;) {
      kids.push_back(parse());
      skip_ws();
      if (pos_ >= text_.size()) fail("unterminated argument list");
      if (text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (text_[pos_] == ')') {
        ++pos_;
        break;
      }
      fail("expected ',' or ')'");
    }
    return Term::apply(id, std::move(kids));
  }

  std::string_view text_;
  const std::set<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Term parse_term(std::string_view text, const std::set<std::string>& vars) {
  return TermParser(text, vars).parse_all();
}

}  // namespace heq
