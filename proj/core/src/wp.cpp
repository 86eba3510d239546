#include "heq/wp.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <set>

namespace heq {

Equality PostKey::generic() const {
  if (kind == Kind::Const) return Equality::constant(Term::var(x));
  return Equality::pair(Term::var(x), Term::var(y));
}

std::string PostKey::str() const {
  if (kind == Kind::Const) return "Const(" + x + ")";
  return "Pair(" + x + "," + y + ")";
}

std::vector<PostKey> post_keys(const std::vector<std::string>& vars) {
  std::vector<PostKey> out;
  for (const auto& x : vars)
    for (const auto& y : vars) out.push_back(PostKey::pair(x, y));
  for (const auto& x : vars) out.push_back(PostKey::constant(x));
  return out;
}

const Conjunction& Transformer::operator[](const PostKey& k) const {
  static const Conjunction top;
  auto it = table.find(k);
  return it == table.end() ? top : it->second;
}

Transformer Transformer::identity(const std::vector<PostKey>& keys) {
  Transformer t;
  for (const auto& k : keys) t.table[k] = Conjunction::of({k.generic()});
  return t;
}

std::string Transformer::str(const std::vector<PostKey>& keys) const {
  std::string out;
  for (const auto& k : keys) out += k.str() + ": " + (*this)[k].str() + "\n";
  return out;
}

Conjunction wp_stmt(const Stmt& s, const Conjunction& phi) {
  switch (s.kind) {
    case Stmt::Kind::Skip:
      return phi;
    case Stmt::Kind::Assign:
      return wp_subst(phi, s.var, s.rhs);
    case Stmt::Kind::Havoc:
      return forall(phi, s.var);
    case Stmt::Kind::Call:
      break;
  }
  throw std::logic_error("wp_stmt: calls are handled by transformers");
}

namespace {

struct HeadSub {
  TVar head;
  Term prefix;
};

Side substitute(const Side& side, const HeadSub* a, const HeadSub* b, const Side* c) {
  switch (side.head) {
    case TVar::A:
      return a ? Side{a->head, subst_hole(a->prefix, side.body)} : side;
    case TVar::B:
      return b ? Side{b->head, subst_hole(b->prefix, side.body)} : side;
    case TVar::C:
      return c ? *c : side;
  }
  return side;
}

Conjunction substitute(const Conjunction& psi, const HeadSub* a, const HeadSub* b, const Side* c) {
  if (psi.is_bottom()) return psi;
  Conjunction out;
  for (const auto& e : psi.equalities())
    out.add(Equality::make(substitute(e.lhs, a, b, c), substitute(e.rhs, a, b, c)));
  return out;
}

std::optional<std::string> var_of(const Term& t) {
  if (t.has_many_vars()) throw InternalError("body with two variables: " + t.str());
  return t.single_var();
}

Conjunction extend(const Transformer& f, const Equality& e) {
  auto vs = var_of(e.s());
  if (e.is_const()) {
    if (!vs) return Conjunction::of({e});
    HeadSub a{TVar::A, var_to_hole(e.s())};
    return substitute(f[PostKey::constant(*vs)], &a, nullptr, nullptr);
  }
  auto vt = var_of(e.t());
  if (vs && vt) {
    HeadSub a{TVar::A, var_to_hole(e.s())};
    HeadSub b{TVar::B, var_to_hole(e.t())};
    return substitute(f[PostKey::pair(*vs, *vt)], &a, &b, nullptr);
  }
  if (vs) {
    if (!e.t().is_ground()) throw InternalError("template body opposite a variable: " + e.str());
    HeadSub a{TVar::A, var_to_hole(e.s())};
    Side c{TVar::B, e.t()};
    return substitute(f[PostKey::constant(*vs)], &a, nullptr, &c);
  }
  if (vt) {
    if (!e.s().is_ground()) throw InternalError("template body opposite a variable: " + e.str());
    HeadSub a{TVar::B, var_to_hole(e.t())};
    Side c{TVar::A, e.s()};
    return substitute(f[PostKey::constant(*vt)], &a, nullptr, &c);
  }
  return Conjunction::of({e});
}

}  // namespace

Equality map_heads(const Equality& e, TVar a_head, const Term& a_prefix, TVar b_head, const Term& b_prefix) {
  HeadSub a{a_head, a_prefix}, b{b_head, b_prefix};
  return Equality::make(substitute(e.lhs, &a, &b, nullptr), substitute(e.rhs, &a, &b, nullptr));
}

Conjunction apply_transformer(const Transformer& f, const Conjunction& phi) {
  if (phi.is_bottom()) return phi;
  Conjunction out;
  for (const auto& e : phi.equalities()) {
    out.add_all(extend(f, e));
    if (out.is_bottom()) break;
  }
  return out;
}

Transformer compose(const Transformer& f, const Transformer& g, const ApproxCtx& ctx) {
  Transformer out;
  for (const auto& [k, c] : g.table) {
    auto r = compact(apply_transformer(f, c), ctx);
    if (!r.is_top()) out.table[k] = std::move(r);
  }
  return out;
}

std::string TraceCell::str() const {
  if (bottom) return "false";
  if (added.empty()) return top ? "⊤" : "-";
  std::string out;
  for (const auto& e : added) {
    if (!out.empty()) out += " ; ";
    out += e.factored();
  }
  return out;
}

AnalysisContext AnalysisContext::of(const Program& p) {
  AnalysisContext ac;
  ac.sets = derive_sets(p);
  ac.approx = ApproxCtx::make(ac.sets.G, ac.sets.R, p.vars, ac.sets.is_ir);
  ac.keys = post_keys(p.vars);
  return ac;
}

std::size_t iteration_cap(const SolveOptions& opts) {
  if (const char* env = std::getenv("HEQ_MAX_ITERS")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return opts.max_iters;
}

namespace {

void postorder(const Procedure& p, const std::string& u, std::set<std::string>& seen, std::vector<std::string>& out) {
  seen.insert(u);
  for (const auto& e : p.edges)
    if (e.from == u && !seen.count(e.to)) postorder(p, e.to, seen, out);
  out.push_back(u);
}

std::vector<std::string> postorder(const Procedure& p) {
  std::set<std::string> seen;
  std::vector<std::string> out;
  postorder(p, p.entry, seen, out);
  for (const auto& n : p.nodes)
    if (!seen.count(n)) out.push_back(n);
  return out;
}

using RhsFn = std::function<Conjunction(const std::string&, const PostKey&, const std::map<std::string, Transformer>&)>;

SystemSolution run_system(const Program& prog, const AnalysisContext& ac, std::vector<std::string> order,
                          const RhsFn& rhs, const SolveOptions& opts) {
  SystemSolution sol;
  sol.order = std::move(order);
  for (const auto& p : prog.procedures)
    for (const auto& n : p.nodes) sol.values[n];
  const std::size_t cap = iteration_cap(opts);
  std::set<std::pair<std::string, PostKey>> visited;
  // equalities a trace cell already showed; compaction may drop them from the value
  std::map<std::pair<std::string, PostKey>, std::set<Equality>> shown;
  for (std::size_t it = 1;; ++it) {
    bool changed = false;
    for (const auto& v : sol.order) {
      for (const auto& key : ac.keys) {
        Conjunction r = rhs(v, key, sol.values);
        const Conjunction& old = sol.values[v][key];
        const bool first = visited.insert({v, key}).second;
        TraceCell cell{it, v, key, {}, r.is_bottom() && !old.is_bottom(), false};
        bool fresh = false;
        if (!old.is_bottom()) {
          auto& seen = shown[{v, key}];
          for (const auto& e : r.equalities()) {
            if (old.contains(e)) continue;
            fresh = true;
            if (seen.insert(e).second) cell.added.push_back(e);
          }
        }
        if (!old.is_bottom() && (cell.bottom || fresh)) {
          Conjunction next = compact(conjoin(old, r), ac.approx);
          sol.max_conjunction = std::max(sol.max_conjunction, next.size());
          // next implies old by construction; a change means old does not imply next
          if (!approx_subsumes(old, next, ac.approx)) {
            changed = true;
            sol.values[v].table[key] = std::move(next);
          }
        }
        cell.top = first && sol.values[v][key].is_top();
        if (opts.trace) sol.trace.push_back(std::move(cell));
      }
    }
    if (changed) sol.iterations = it;
    if (!changed) break;
    if (it >= cap) throw InternalError("fixpoint iteration did not stabilize within " + std::to_string(cap) + " rounds");
  }
  return sol;
}

}  // namespace

SystemSolution solve_summaries(const Program& prog, const AnalysisContext& ac, const SolveOptions& opts) {
  std::vector<std::string> order;
  for (const auto& p : prog.procedures)
    for (auto& n : postorder(p)) order.push_back(std::move(n));
  std::map<std::string, const Procedure*> owner;
  for (const auto& p : prog.procedures)
    for (const auto& n : p.nodes) owner[n] = &p;
  const Transformer id = Transformer::identity(ac.keys);
  RhsFn rhs = [&](const std::string& v, const PostKey& key, const std::map<std::string, Transformer>& values) {
    const Procedure& p = *owner.at(v);
    Conjunction acc;
    if (v == p.exit) acc.add_all(id[key]);
    for (const auto& e : p.edges) {
      if (e.from != v) continue;
      const Conjunction& post = values.at(e.to)[key];
      if (e.stmt.kind == Stmt::Kind::Call)
        acc.add_all(apply_transformer(values.at(prog.find(e.stmt.callee)->entry), post));
      else
        acc.add_all(wp_stmt(e.stmt, post));
      if (acc.is_bottom()) break;
    }
    return acc;
  };
  return run_system(prog, ac, std::move(order), rhs, opts);
}

SystemSolution solve_reaching(const Program& prog, const AnalysisContext& ac, const SystemSolution& summaries,
                              const SolveOptions& opts) {
  std::vector<std::string> order;
  for (const auto& p : prog.procedures) {
    auto po = postorder(p);
    order.insert(order.end(), po.rbegin(), po.rend());
  }
  struct Incoming {
    std::string from;
    const Stmt* stmt;
  };
  std::map<std::string, std::vector<Incoming>> incoming;
  std::map<std::string, std::vector<std::string>> call_sites;  // callee entry -> calling points
  for (const auto& p : prog.procedures)
    for (const auto& e : p.edges) {
      incoming[e.to].push_back({e.from, &e.stmt});
      if (e.stmt.kind == Stmt::Kind::Call) call_sites[prog.find(e.stmt.callee)->entry].push_back(e.from);
    }
  const Transformer id = Transformer::identity(ac.keys);
  const std::string main_entry = prog.main_procedure().entry;
  RhsFn rhs = [&](const std::string& v, const PostKey& key, const std::map<std::string, Transformer>& values) {
    Conjunction acc;
    if (v == main_entry) acc.add_all(id[key]);
    if (auto it = call_sites.find(v); it != call_sites.end())
      for (const auto& u : it->second) acc.add_all(values.at(u)[key]);
    if (auto it = incoming.find(v); it != incoming.end())
      for (const auto& in : it->second) {
        const Transformer& before = values.at(in.from);
        if (in.stmt->kind == Stmt::Kind::Call)
          acc.add_all(apply_transformer(before, summaries.values.at(prog.find(in.stmt->callee)->entry)[key]));
        else
          acc.add_all(apply_transformer(before, wp_stmt(*in.stmt, id[key])));
        if (acc.is_bottom()) break;
      }
    return acc;
  };
  return run_system(prog, ac, std::move(order), rhs, opts);
}

std::optional<Term> extract_constant(const std::string& v, const std::string& x, const Program& p,
                                     const SystemSolution& reaching) {
  const Conjunction& c = reaching.values.at(v)[PostKey::constant(x)];
  if (c.is_top()) return std::nullopt;
  std::set<std::string> vars(p.vars.begin(), p.vars.end());
  auto r = solve_const_system(universal_closure(c, vars));
  if (r.is_bottom() || r.is_top()) return std::nullopt;
  return r.equalities().front().s();
}

std::optional<SolutionSet> extract_pairs(const std::string& v, const std::string& x, const std::string& y,
                                         const Program& p, const SystemSolution& reaching) {
  const Conjunction& c = reaching.values.at(v)[PostKey::pair(x, y)];
  if (c.is_top()) return std::nullopt;
  std::set<std::string> vars(p.vars.begin(), p.vars.end());
  auto psi = universal_closure(c, vars);
  if (psi.is_bottom()) return SolutionSet{};
  std::vector<std::pair<Term, Term>> eqs;
  for (const auto& e : psi.equalities()) eqs.emplace_back(e.s(), e.t());
  return solve_system(eqs);
}

std::string PairInvariant::str() const {
  return subst_hole(lhs_template, Term::var(lhs_var)).str() + " == " + subst_hole(rhs_template, Term::var(rhs_var)).str();
}

const PointReport* Report::find(const std::string& point) const {
  for (const auto& p : points)
    if (p.point == point) return &p;
  return nullptr;
}

Analysis analyze_full(const Program& prog, const SolveOptions& opts) {
  Analysis a;
  a.report.diagnostics = validate(prog);
  a.context = AnalysisContext::of(prog);
  Report& rep = a.report;
  rep.ir = a.context.sets.is_ir;
  rep.n_vars = prog.vars.size();
  rep.m_small = a.context.sets.S.size();
  rep.bound = compaction_bound(rep.n_vars, rep.m_small);
  if (!rep.diagnostics.empty()) return a;

  a.summaries = solve_summaries(prog, a.context, opts);
  a.reaching = solve_reaching(prog, a.context, a.summaries, opts);
  rep.iterations = a.summaries.iterations;
  rep.reaching_iterations = a.reaching.iterations;
  rep.max_conjunction = std::max(a.summaries.max_conjunction, a.reaching.max_conjunction);

  const auto& vars = prog.vars;
  for (const auto& proc : prog.procedures)
    for (const auto& v : proc.nodes) {
      PointReport pr;
      pr.point = v;
      const Transformer& t = a.reaching.values.at(v);
      for (const auto& k : a.context.keys) pr.max_conjunction = std::max(pr.max_conjunction, t[k].size());
      pr.reached = vars.empty() || std::any_of(a.context.keys.begin(), a.context.keys.end(),
                                               [&](const PostKey& k) { return !t[k].is_top(); });
      if (pr.reached) {
        for (const auto& x : vars)
          if (auto c = extract_constant(v, x, prog, a.reaching)) pr.constants.push_back({x, *c});
        for (std::size_t i = 0; i < vars.size(); ++i)
          for (std::size_t j = i; j < vars.size(); ++j) {
            auto sols = extract_pairs(v, vars[i], vars[j], prog, a.reaching);
            if (!sols) continue;
            for (const auto& s : *sols) {
              if (i == j && s.rA == s.rB) continue;
              pr.pairs.push_back({s.rA, vars[i], s.rB, vars[j]});
            }
          }
      }
      rep.points.push_back(std::move(pr));
    }
  return a;
}

Report analyze(const Program& p, const SolveOptions& opts) { return analyze_full(p, opts).report; }

std::vector<std::string> explain_point(const Analysis& a, const std::string& point) {
  std::vector<std::string> out;
  auto it = a.reaching.values.find(point);
  if (it == a.reaching.values.end()) return out;
  for (const auto& k : a.context.keys) {
    const Conjunction& c = it->second[k];
    if (c.is_bottom()) {
      out.push_back(k.str() + ": false");
      continue;
    }
    if (c.is_top()) continue;
    for (const auto& [fk, b] : buckets_of(c, {}, a.context.approx)) out.push_back(k.str() + ": " + b.str());
  }
  return out;
}

}  // namespace heq
