#include "heq/oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace heq {

std::string State::str(const std::vector<std::string>& vars) const {
  std::string out = "{";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += (i < vars.size() ? vars[i] : "?") + "=" + values[i].str();
  }
  return out + "}";
}

std::string Counterexample::str(const std::vector<std::string>& vars) const {
  return point + ": " + invariant + " fails in " + state.str(vars);
}

std::vector<Term> default_pool(const Program& p) {
  auto sets = derive_sets(p);
  std::vector<Term> pool(sets.S.begin(), sets.S.end());
  std::set<std::string> taken(p.vars.begin(), p.vars.end());
  for (const auto& [sym, rank] : p.signature.symbols()) taken.insert(sym);
  std::string name = "fresh";
  for (int i = 1; taken.count(name); ++i) name = "fresh" + std::to_string(i);
  pool.push_back(Term::apply(name));
  return pool;
}

namespace {

struct Config {
  int point;
  std::vector<int> stack;
  std::vector<Term> state;
  std::size_t steps_left;
};

struct ConfigKey {
  int point;
  std::vector<int> stack;
  std::vector<Term> state;
  friend bool operator==(const ConfigKey&, const ConfigKey&) = default;
};

struct ConfigHash {
  std::size_t operator()(const ConfigKey& k) const {
    std::size_t h = std::hash<int>()(k.point);
    auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    for (int r : k.stack) mix(std::hash<int>()(r));
    mix(0xabcdef);
    for (const auto& t : k.state) mix(t.hash());
    return h;
  }
};

struct Move {
  int to;
  const Stmt* stmt;
};

}  // namespace

StateSets enumerate_states(const Program& prog, const RunConfig& cfg) {
  const auto& vars = prog.vars;
  if (!vars.empty() && cfg.havoc_pool.empty()) throw std::invalid_argument("empty value pool");

  std::vector<std::string> names;
  std::map<std::string, int> index;
  for (const auto& p : prog.procedures)
    for (const auto& n : p.nodes) {
      index[n] = static_cast<int>(names.size());
      names.push_back(n);
    }
  std::vector<std::vector<Move>> moves(names.size());
  std::vector<bool> is_exit(names.size(), false);
  std::map<std::string, int> entry_of;
  for (const auto& p : prog.procedures) {
    is_exit[index.at(p.exit)] = true;
    entry_of[p.name] = index.at(p.entry);
    for (const auto& e : p.edges) moves[index.at(e.from)].push_back({index.at(e.to), &e.stmt});
  }
  std::map<std::string, std::size_t> var_index;
  for (std::size_t i = 0; i < vars.size(); ++i) var_index[vars[i]] = i;

  StateSets out;
  for (const auto& n : names) out.at[n];
  std::unordered_map<ConfigKey, std::size_t, ConfigHash> best;
  std::vector<Config> work;

  std::vector<std::vector<Term>> initial{{}};
  for (std::size_t i = 0; i < vars.size(); ++i) {
    std::vector<std::vector<Term>> next;
    for (const auto& s : initial)
      for (const auto& v : cfg.havoc_pool) {
        auto t = s;
        t.push_back(v);
        next.push_back(std::move(t));
      }
    initial = std::move(next);
  }
  const int start = index.at(prog.main_procedure().entry);
  for (auto& s : initial) work.push_back({start, {}, std::move(s), cfg.max_steps});

  std::size_t configs = 0;
  while (!work.empty()) {
    Config c = std::move(work.back());
    work.pop_back();
    ConfigKey key{c.point, c.stack, c.state};
    auto [it, fresh] = best.try_emplace(key, c.steps_left);
    if (!fresh) {
      if (it->second >= c.steps_left) continue;
      it->second = c.steps_left;
    }
    if (++configs > cfg.max_configs) {
      out.partial = true;
      break;
    }
    out.at[names[c.point]].insert(State{c.state});
    if (c.steps_left == 0) continue;
    const std::size_t left = c.steps_left - 1;
    if (is_exit[c.point]) {
      if (c.stack.empty()) continue;  // main returned
      auto stack = c.stack;
      int ret = stack.back();
      stack.pop_back();
      work.push_back({ret, std::move(stack), c.state, left});
    }
    for (const auto& m : moves[c.point]) {
      const Stmt& s = *m.stmt;
      switch (s.kind) {
        case Stmt::Kind::Skip:
          work.push_back({m.to, c.stack, c.state, left});
          break;
        case Stmt::Kind::Assign: {
          Term v = s.rhs;
          for (const auto& y : s.rhs.vars()) v = subst_var(v, y, c.state[var_index.at(y)]);
          auto st = c.state;
          st[var_index.at(s.var)] = v;
          work.push_back({m.to, c.stack, std::move(st), left});
          break;
        }
        case Stmt::Kind::Havoc:
          for (const auto& v : cfg.havoc_pool) {
            auto st = c.state;
            st[var_index.at(s.var)] = v;
            work.push_back({m.to, c.stack, std::move(st), left});
          }
          break;
        case Stmt::Kind::Call: {
          if (c.stack.size() >= cfg.max_call_depth) break;
          auto stack = c.stack;
          stack.push_back(m.to);
          work.push_back({entry_of.at(s.callee), std::move(stack), c.state, left});
          break;
        }
      }
    }
  }
  return out;
}

namespace {

std::size_t position(const std::vector<std::string>& vars, const std::string& x) {
  auto it = std::find(vars.begin(), vars.end(), x);
  if (it == vars.end()) throw std::invalid_argument("unknown variable " + x);
  return static_cast<std::size_t>(it - vars.begin());
}

}  // namespace

std::optional<State> check_invariant(const PairInvariant& inv, const std::set<State>& states,
                                     const std::vector<std::string>& vars) {
  const auto i = position(vars, inv.lhs_var), j = position(vars, inv.rhs_var);
  for (const auto& s : states)
    if (subst_hole(inv.lhs_template, s.values[i]) != subst_hole(inv.rhs_template, s.values[j])) return s;
  return std::nullopt;
}

std::optional<State> check_invariant(const ConstantInvariant& inv, const std::set<State>& states,
                                     const std::vector<std::string>& vars) {
  const auto i = position(vars, inv.var);
  for (const auto& s : states)
    if (s.values[i] != inv.value) return s;
  return std::nullopt;
}

SoundnessResult soundness_report(const Program& p, const Report& r, const RunConfig& cfg) {
  return soundness_report(p, r, enumerate_states(p, cfg));
}

SoundnessResult soundness_report(const Program& p, const Report& r, const StateSets& states) {
  SoundnessResult out;
  out.partial = states.partial;
  for (const auto& pr : r.points) {
    auto it = states.at.find(pr.point);
    if (it == states.at.end() || it->second.empty()) continue;
    const auto& ss = it->second;
    if (!pr.reached) {
      out.failures.push_back({pr.point, "unreachable", *ss.begin()});
      continue;
    }
    for (const auto& c : pr.constants) {
      ++out.checked;
      if (auto bad = check_invariant(c, ss, p.vars))
        out.failures.push_back({pr.point, c.var + " == " + c.value.str(), *bad});
    }
    for (const auto& q : pr.pairs) {
      ++out.checked;
      if (auto bad = check_invariant(q, ss, p.vars)) out.failures.push_back({pr.point, q.str(), *bad});
    }
  }
  out.pass = out.failures.empty();
  return out;
}

SolutionSet brute_solve(const std::vector<std::pair<Term, Term>>& eqs, std::size_t size_bound) {
  if (eqs.empty()) throw std::invalid_argument("brute_solve: empty system");
  const auto& [s1, t1] = eqs.front();
  if (s1.size() > size_bound || t1.size() > size_bound) throw std::invalid_argument("brute_solve: input too large");
  SolutionSet cands;
  for (auto& r : replacements(s1, t1)) cands.push_back({Term::hole(), r});
  for (auto& r : replacements(t1, s1)) cands.push_back({r, Term::hole()});
  SolutionSet out;
  for (const auto& c : cands) {
    bool ok = std::all_of(eqs.begin(), eqs.end(), [&](const auto& e) {
      return subst_hole(c.rA, e.first) == subst_hole(c.rB, e.second);
    });
    if (ok) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

struct WordHash {
  std::size_t operator()(const Word& w) const {
    std::size_t h = w.size();
    for (const auto& l : w) h = h * 1000003u + (l.id * 2u + (l.inverse ? 1u : 0u));
    return h;
  }
};

std::vector<Word> monoid_words(const std::vector<Letter>& alphabet, std::size_t len_bound) {
  std::vector<Word> out{Word{}};
  std::size_t from = 0;
  for (std::size_t len = 1; len <= len_bound; ++len) {
    std::size_t to = out.size();
    for (std::size_t i = from; i < to; ++i)
      for (const auto& a : alphabet) {
        Word w = out[i];
        w.push_back(a);
        out.push_back(std::move(w));
      }
    from = to;
  }
  // lexicographic, so pair lists built by nested loops come out sorted
  std::sort(out.begin(), out.end());
  return out;
}

Word conj(const Word& x, const Word& u) { return concat(concat(x, u), invert(x)); }

using Pairs = std::vector<std::pair<Word, Word>>;

bool compatible(const Word& p, const Word& q) { return p.empty() || q.empty() || p.front() != q.front(); }

// representatives with x u x^-1 = y u' y^-1 for each pair
Pairs join(const std::vector<WordPair>& eqs, const std::vector<Letter>& alphabet, std::size_t len_bound) {
  auto words = monoid_words(alphabet, len_bound);
  struct KeyHash {
    std::size_t operator()(const std::vector<Word>& ks) const {
      std::size_t h = 0;
      for (const auto& k : ks) h = h * 31 + WordHash()(k);
      return h;
    }
  };
  std::unordered_map<std::vector<Word>, std::vector<std::size_t>, KeyHash> by_rhs;
  for (std::size_t j = 0; j < words.size(); ++j) {
    std::vector<Word> key;
    for (const auto& e : eqs) key.push_back(conj(words[j], e.v));
    by_rhs[std::move(key)].push_back(j);
  }
  Pairs out;
  for (const auto& p : words) {
    std::vector<Word> key;
    for (const auto& e : eqs) key.push_back(conj(p, e.u));
    auto it = by_rhs.find(key);
    if (it == by_rhs.end()) continue;
    for (auto j : it->second)
      if (compatible(p, words[j])) out.emplace_back(p, words[j]);
  }
  return out;
}

}  // namespace

Pairs monoid_pairs(const std::vector<Letter>& alphabet, std::size_t len_bound) {
  auto words = monoid_words(alphabet, len_bound);
  Pairs out;
  for (const auto& p : words)
    for (const auto& q : words)
      if (compatible(p, q)) out.emplace_back(p, q);
  return out;
}

Pairs brute_words(const WordPair& p, const WordPair& q, const std::vector<Letter>& alphabet, std::size_t len_bound) {
  return join({p, q}, alphabet, len_bound);
}

Pairs relation_solutions(const Relation& r, const std::vector<Letter>& alphabet, std::size_t len_bound) {
  switch (r.kind) {
    case RelKind::Contradiction:
      return {};
    case RelKind::Trivial:
      return monoid_pairs(alphabet, len_bound);
    case RelKind::Conjugation:
      return join({r.pair}, alphabet, len_bound);
    case RelKind::Solved:
      break;
  }
  Pairs out;
  for (const auto& x : monoid_words(alphabet, len_bound)) {
    // A = B w: (x w, x); A w = B: (x, x w)
    Word y = concat(x, r.w);
    if (y.size() > len_bound) continue;
    std::pair<Word, Word> pq = r.orientation == Orientation::AIsBw ? std::pair{y, x} : std::pair{x, y};
    if (compatible(pq.first, pq.second)) out.push_back(std::move(pq));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace heq
