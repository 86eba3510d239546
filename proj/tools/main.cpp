// heq: infer one- and two-variable Herbrand equalities of .heq programs.
//
// Exit codes: 0 ok, 1 user error or diagnostics, 2 internal error,
// 3 the execution oracle refuted a reported invariant.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "heq/factorization.hpp"
#include "heq/oracle.hpp"
#include "heq/report.hpp"
#include "heq/words.hpp"
#include "heq/wp.hpp"

namespace {

using namespace heq;

constexpr int kOk = 0;
constexpr int kUserError = 1;
constexpr int kInternal = 2;
constexpr int kRefuted = 3;

struct UserError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Program load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UserError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  auto r = parse_program(ss.str());
  for (const auto& d : r.diagnostics) std::cerr << path << ":" << d.str() << "\n";
  if (!r.ok()) throw UserError("analysis refused: " + path + " has errors");
  return *std::move(r.program);
}

// splits at commas outside parentheses
std::vector<std::string> split_terms(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
      continue;
    }
    depth += c == '(' ? 1 : c == ')' ? -1 : 0;
    cur.push_back(c);
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

Term term_arg(const std::string& text, const std::set<std::string>& vars = {}) {
  try {
    return parse_term(text, vars);
  } catch (const ParseError& e) {
    throw UserError("bad term '" + text + "' at column " + std::to_string(e.column) + ": " + e.what());
  }
}

TermSet term_list(const std::string& s) {
  TermSet out;
  for (const auto& t : split_terms(s)) out.insert(term_arg(t));
  return out;
}

// "point: lhs == rhs" with one variable per side
std::pair<std::string, PairInvariant> parse_injected(const std::string& s, const Program& p) {
  auto colon = s.find(':');
  auto eq = s.find("==");
  if (colon == std::string::npos || eq == std::string::npos || eq < colon)
    throw UserError("expected --inject 'point: lhs == rhs'");
  auto trim = [](std::string x) {
    x.erase(0, x.find_first_not_of(" \t"));
    x.erase(x.find_last_not_of(" \t") + 1);
    return x;
  };
  std::set<std::string> vars(p.vars.begin(), p.vars.end());
  Term l = term_arg(trim(s.substr(colon + 1, eq - colon - 1)), vars);
  Term r = term_arg(trim(s.substr(eq + 2)), vars);
  auto lv = l.single_var(), rv = r.single_var();
  if (!lv || !rv) throw UserError("each side of an injected invariant needs exactly one variable");
  return {trim(s.substr(0, colon)), PairInvariant{var_to_hole(l), *lv, var_to_hole(r), *rv}};
}

Word word_arg(const std::string& s) {
  Word w;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    if (tok == "e" || tok == "ε") continue;
    bool inverse = false;
    if (tok.size() > 3 && tok.ends_with("^-1")) {
      inverse = true;
      tok.resize(tok.size() - 3);
    }
    Term t = tok.find('(') == std::string::npos ? Term::apply(tok, {Term::hole()}) : term_arg(tok);
    if (!t.is_template() || !is_irreducible(t)) throw UserError("'" + tok + "' is not an irreducible template");
    Letter l = positive(t);
    l.inverse = inverse;
    w.push_back(l);
  }
  return reduce(w);
}

int run_analyze(const std::string& path, const std::string& format, const std::optional<std::string>& point,
                bool explain) {
  Program p = load(path);
  if (point && !p.owner(*point)) throw UserError("no point named '" + *point + "'");
  Analysis a = analyze_full(p);
  std::cout << (format == "json" ? render_json(a.report, point) : render_text(a.report, point));
  if (explain)
    for (const auto& proc : p.procedures)
      for (const auto& n : proc.nodes) {
        if (point && n != *point) continue;
        for (const auto& line : explain_point(a, n)) std::cout << "explain " << n << " " << line << "\n";
      }
  return kOk;
}

int run_summaries(const std::string& path, const std::string& format) {
  Program p = load(path);
  Analysis a = analyze_full(p);
  if (format == "json") {
    nlohmann::json procs = nlohmann::json::array();
    for (const auto& proc : p.procedures) {
      nlohmann::json keys = nlohmann::json::object();
      const Transformer& t = a.summaries.values.at(proc.entry);
      for (const auto& k : a.context.keys) {
        const Conjunction& c = t[k];
        if (c.is_bottom()) {
          keys[k.str()] = false;
          continue;
        }
        nlohmann::json eqs = nlohmann::json::array();
        for (const auto& e : c.equalities()) eqs.push_back(e.str());
        keys[k.str()] = eqs;
      }
      procs.push_back({{"procedure", proc.name}, {"entry", proc.entry}, {"keys", keys}});
    }
    std::cout << nlohmann::json{{"procedures", procs}, {"iterations", a.summaries.iterations}}.dump(2) << "\n";
    return kOk;
  }
  for (const auto& proc : p.procedures) {
    std::cout << "proc " << proc.name << " entry " << proc.entry << "\n";
    const Transformer& t = a.summaries.values.at(proc.entry);
    const Transformer id = Transformer::identity(a.context.keys);
    bool is_id = true;
    for (const auto& k : a.context.keys) is_id = is_id && t[k] == id[k];
    if (is_id) {
      std::cout << "  Id\n";
      continue;
    }
    for (const auto& k : a.context.keys) std::cout << "  " << k.str() << ": " << t[k].str() << "\n";
  }
  std::cout << "iterations: " << a.summaries.iterations << "\n";
  return kOk;
}

int run_check(const std::string& path, std::size_t depth, std::size_t steps, const std::optional<std::string>& pool,
              const std::vector<std::string>& injected) {
  Program p = load(path);
  RunConfig cfg;
  cfg.max_call_depth = depth;
  cfg.max_steps = steps;
  if (pool) {
    auto ts = term_list(*pool);
    cfg.havoc_pool.assign(ts.begin(), ts.end());
  } else {
    cfg.havoc_pool = default_pool(p);
  }
  if (cfg.havoc_pool.empty() && !p.vars.empty()) throw UserError("the value pool is empty");
  Report r = analyze(p);
  for (const auto& inj : injected) {
    auto [point, inv] = parse_injected(inj, p);
    bool found = false;
    for (auto& pr : r.points)
      if (pr.point == point) {
        pr.pairs.push_back(inv);
        found = true;
      }
    if (!found) throw UserError("no point named '" + point + "'");
  }
  auto res = soundness_report(p, r, cfg);
  for (const auto& f : res.failures) std::cout << "refuted " << f.str(p.vars) << "\n";
  std::cout << (res.pass ? "pass" : "FAIL") << ": " << res.checked << " invariants checked"
            << (res.partial ? " (state enumeration truncated)" : "") << "\n";
  return res.pass ? kOk : kRefuted;
}

int run_factor(const std::string& term, const std::optional<std::string>& g, const std::optional<std::string>& s) {
  Term t = term_arg(term);
  if (!t.is_ground()) throw UserError("factor expects a ground term");
  TermUniverse u;
  u.G = g ? subterm_closure(term_list(*g)) : TermSet{};
  u.S = s ? term_list(*s) : u.G;
  u.S.insert(u.G.begin(), u.G.end());
  if (u.S.count(t)) throw UserError(t.str() + " is small; only large terms factor uniquely");
  auto f = factorize(t, u);
  std::cout << "m = " << f.m.str() << "\n";
  std::cout << "factors =";
  for (const auto& x : decompose(f.m)) std::cout << " " << x.str();
  std::cout << "\nx = " << f.x.str() << "\n";
  return kOk;
}

int run_words(const std::vector<std::string>& args) {
  if (args.size() != 2 && args.size() != 4) throw UserError("words expects u u' or u u' v v'");
  WordPair p{word_arg(args[0]), word_arg(args[1])};
  Relation r;
  try {
    if (args.size() == 2) {
      r = relation_of(p);
    } else {
      WordPair q{word_arg(args[2]), word_arg(args[3])};
      r = solve_conjugation_pair(p, q);
    }
  } catch (const std::invalid_argument& e) {
    throw UserError(e.what());
  }
  std::cout << r.str() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inter-procedural Herbrand equalities"};
  app.require_subcommand(1);

  std::string path, format = "text";
  std::optional<std::string> point;
  bool explain = false;
  auto* analyze_cmd = app.add_subcommand("analyze", "report per-point invariants");
  analyze_cmd->add_option("file", path, ".heq program")->required();
  analyze_cmd->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  analyze_cmd->add_option("--point", point, "only this program point");
  analyze_cmd->add_flag("--explain", explain, "dump format buckets of the reaching transformers");

  auto* summaries_cmd = app.add_subcommand("summaries", "dump procedure summaries");
  summaries_cmd->add_option("file", path, ".heq program")->required();
  summaries_cmd->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  std::size_t depth = 4, steps = 200;
  std::optional<std::string> pool;
  std::vector<std::string> injected;
  auto* check_cmd = app.add_subcommand("check", "analyze, then test every invariant on bounded runs");
  check_cmd->add_option("file", path, ".heq program")->required();
  check_cmd->add_option("--depth", depth, "maximal call depth");
  check_cmd->add_option("--steps", steps, "maximal transitions per run");
  check_cmd->add_option("--pool", pool, "comma-separated values for havoc and uninitialized reads");
  check_cmd->add_option("--inject", injected, "add 'point: lhs == rhs' to the report (testing)");

  std::string term;
  std::optional<std::string> g_list, s_list;
  auto* factor_cmd = app.add_subcommand("factor", "factor a large ground term");
  factor_cmd->add_option("term", term)->required();
  factor_cmd->add_option("--G", g_list, "comma-separated ground terms, closed under subterms");
  factor_cmd->add_option("--S", s_list, "comma-separated small terms (defaults to G)");

  std::vector<std::string> words;
  auto* words_cmd = app.add_subcommand("words", "solve A u A^-1 = B u' B^-1 (and a second pair)");
  words_cmd->add_option("words", words, "u u' [v v'], letters like f(_,_) or f, suffix ^-1 for inverses")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUserError;
  }

  try {
    if (*analyze_cmd) return run_analyze(path, format, point, explain);
    if (*summaries_cmd) return run_summaries(path, format);
    if (*check_cmd) return run_check(path, depth, steps, pool, injected);
    if (*factor_cmd) return run_factor(term, g_list, s_list);
    if (*words_cmd) return run_words(words);
  } catch (const UserError& e) {
    std::cerr << "heq: " << e.what() << "\n";
    return kUserError;
  } catch (const std::exception& e) {
    std::cerr << "heq: internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUserError;
}
