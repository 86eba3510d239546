#pragma once

#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "heq/equalities.hpp"
#include "heq/program.hpp"
#include "heq/subsumption.hpp"

namespace heq {

// Pair(x,y) stands for A x == B y, Const(x) for A x == C.
struct PostKey {
  enum class Kind : std::uint8_t { Pair, Const };
  Kind kind = Kind::Pair;
  std::string x;
  std::string y;  // Pair only

  static PostKey pair(std::string x, std::string y) { return {Kind::Pair, std::move(x), std::move(y)}; }
  static PostKey constant(std::string x) { return {Kind::Const, std::move(x), {}}; }
  Equality generic() const;
  std::string str() const;
  friend bool operator==(const PostKey&, const PostKey&) = default;
  friend std::strong_ordering operator<=>(const PostKey&, const PostKey&) = default;
};

// every Pair(x,y) (x == y included) then every Const(x), in declaration order
std::vector<PostKey> post_keys(const std::vector<std::string>& vars);

// A finite map from keys to conjunctions; missing keys are Top.
struct Transformer {
  std::map<PostKey, Conjunction> table;

  const Conjunction& operator[](const PostKey& k) const;
  static Transformer top() { return {}; }
  static Transformer identity(const std::vector<PostKey>& keys);
  std::string str(const std::vector<PostKey>& keys) const;
};

struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Conjunction wp_stmt(const Stmt& s, const Conjunction& phi);
// the extension of f to arbitrary analysis-shaped post-conditions
Conjunction apply_transformer(const Transformer& f, const Conjunction& phi);
Equality map_heads(const Equality& e, TVar a_head, const Term& a_prefix, TVar b_head, const Term& b_prefix);
Transformer compose(const Transformer& f, const Transformer& g, const ApproxCtx& ctx);

struct SolveOptions {
  std::size_t max_iters = 1000;  // HEQ_MAX_ITERS overrides when set
  bool trace = false;
};

// What one constraint evaluation contributed at a point and key.
struct TraceCell {
  std::size_t iteration = 0;
  std::string point;
  PostKey key;
  std::vector<Equality> added;  // right-hand side members neither present nor shown before
  bool bottom = false;          // right-hand side was Bottom
  bool top = false;             // the value is still Top on its first visit
  std::string str() const;      // added members in factored form, or ⊤ / -
};

struct SystemSolution {
  std::map<std::string, Transformer> values;
  std::size_t iterations = 0;  // last iteration that changed a value
  std::size_t max_conjunction = 0;
  std::vector<std::string> order;  // visiting order of points
  std::vector<TraceCell> trace;
};

// the analysis context of a program: derived sets, keys, small-value set
struct AnalysisContext {
  DerivedSets sets;
  ApproxCtx approx;
  std::vector<PostKey> keys;
  static AnalysisContext of(const Program& p);
};

std::size_t iteration_cap(const SolveOptions& opts);

SystemSolution solve_summaries(const Program& p, const AnalysisContext& ac, const SolveOptions& opts = {});
SystemSolution solve_reaching(const Program& p, const AnalysisContext& ac, const SystemSolution& summaries,
                              const SolveOptions& opts = {});

// absent when x has no constant value at v (or v is never reached)
std::optional<Term> extract_constant(const std::string& v, const std::string& x, const Program& p,
                                     const SystemSolution& reaching);
// minimal pairs (r1, r2) with r1 x == r2 y valid at v; nullopt when v is never reached
std::optional<SolutionSet> extract_pairs(const std::string& v, const std::string& x, const std::string& y,
                                         const Program& p, const SystemSolution& reaching);

struct ConstantInvariant {
  std::string var;
  Term value;
};

struct PairInvariant {
  Term lhs_template;
  std::string lhs_var;
  Term rhs_template;
  std::string rhs_var;
  std::string str() const;  // e.g. `f(x,x) == y`
};

struct PointReport {
  std::string point;
  std::vector<ConstantInvariant> constants;
  std::vector<PairInvariant> pairs;
  std::size_t max_conjunction = 0;  // over the reaching transformer's keys
  bool reached = true;              // false when the reaching transformer is Top
};

struct Report {
  std::vector<PointReport> points;  // procedures in declaration order, points in node order
  bool ir = false;
  std::size_t iterations = 0;
  std::size_t reaching_iterations = 0;
  std::size_t max_conjunction = 0;
  std::uint64_t bound = 0;
  std::size_t n_vars = 0;
  std::size_t m_small = 0;
  std::vector<Diagnostic> diagnostics;

  const PointReport* find(const std::string& point) const;
};

struct Analysis {
  AnalysisContext context;
  SystemSolution summaries;
  SystemSolution reaching;
  Report report;
};

Analysis analyze_full(const Program& p, const SolveOptions& opts = {});
Report analyze(const Program& p, const SolveOptions& opts = {});

// per-key bucket dumps of the reaching transformer at a point
std::vector<std::string> explain_point(const Analysis& a, const std::string& point);

}  // namespace heq
