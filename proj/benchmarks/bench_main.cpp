#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "gen.hpp"
#include "heq/factorization.hpp"
#include "heq/oracle.hpp"

using namespace heq;

namespace {

Program load(const std::string& name) {
  std::ifstream in(std::string(HEQ_TEST_DATA) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return *parse_program(ss.str()).program;
}

std::vector<Program> random_programs(std::size_t n) {
  gen::Rng rng(99);
  std::vector<Program> out;
  while (out.size() < n) {
    auto r = parse_program(gen::program_text(rng));
    if (r.ok()) out.push_back(*r.program);
  }
  return out;
}

void BM_Factorize(benchmark::State& st) {
  const Term t = parse_term("f(h(f(2,h(1))),h(f(2,h(1))))");
  const TermUniverse u{{parse_term("h(1)"), parse_term("1")}, {parse_term("h(1)"), parse_term("1")}};
  for (auto _ : st) benchmark::DoNotOptimize(decompose(factorize(t, u).m));
}
BENCHMARK(BM_Factorize);

void BM_SolveSystem(benchmark::State& st) {
  gen::Rng rng(1);
  std::vector<std::vector<std::pair<Term, Term>>> systems;
  for (int i = 0; i < 64; ++i) systems.push_back(gen::ground_system(rng, 4, 9));
  std::size_t i = 0;
  for (auto _ : st) benchmark::DoNotOptimize(solve_system(systems[i++ % systems.size()]));
}
BENCHMARK(BM_SolveSystem);

void BM_ConjugationPair(benchmark::State& st) {
  gen::Rng rng(2);
  auto alpha = gen::alphabet(3);
  std::vector<std::pair<WordPair, WordPair>> cases;
  while (cases.size() < 64) {
    auto [A, B] = gen::planted_solution(rng, alpha, 4);
    WordPair p, q;
    if (gen::conjugation_pair(rng, alpha, 5, A, B, p) && gen::conjugation_pair(rng, alpha, 5, A, B, q))
      cases.emplace_back(p, q);
  }
  std::size_t i = 0;
  for (auto _ : st) {
    const auto& [p, q] = cases[i++ % cases.size()];
    benchmark::DoNotOptimize(solve_conjugation_pair(p, q));
  }
}
BENCHMARK(BM_ConjugationPair);

void BM_Compact(benchmark::State& st) {
  auto ctx = ApproxCtx::make({parse_term("a")}, {parse_term("a")}, {"x", "y"}, false);
  std::set<std::string> xy{"x", "y"};
  auto E = Conjunction::of({Equality::pair(parse_term("x", xy), parse_term("y", xy)),
                            Equality::pair(parse_term("f(x,a,x)", xy), parse_term("f(y,a,y)", xy)),
                            Equality::pair(parse_term("f(f(x,a,x),a,f(x,a,x))", xy),
                                           parse_term("f(f(y,a,y),a,f(y,a,y))", xy))});
  for (auto _ : st) benchmark::DoNotOptimize(compact(E, ctx));
}
BENCHMARK(BM_Compact);

void BM_AnalyzeFile(benchmark::State& st, const char* file) {
  const Program p = load(file);
  for (auto _ : st) benchmark::DoNotOptimize(analyze(p));
}
BENCHMARK_CAPTURE(BM_AnalyzeFile, lockstep, "lockstep.heq");
BENCHMARK_CAPTURE(BM_AnalyzeFile, three_arg, "lockstep3.heq");

void BM_AnalyzeRandom(benchmark::State& st) {
  static const auto programs = random_programs(32);
  std::size_t i = 0;
  for (auto _ : st) benchmark::DoNotOptimize(analyze(programs[i++ % programs.size()]));
}
BENCHMARK(BM_AnalyzeRandom);

void BM_EnumerateStates(benchmark::State& st) {
  const Program p = load("lockstep.heq");
  RunConfig cfg;
  cfg.max_call_depth = static_cast<std::size_t>(st.range(0));
  cfg.havoc_pool = default_pool(p);
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_states(p, cfg));
}
BENCHMARK(BM_EnumerateStates)->DenseRange(1, 4);

}  // namespace
BENCHMARK_MAIN();
