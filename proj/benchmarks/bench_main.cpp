#include <benchmark/benchmark.h>

#include <random>

#include "undesign/design.hpp"
#include "undesign/lpg.hpp"

using namespace undesign;

namespace {

const ParameterSet& params() { return default_parameters(); }

Sequence random_sequence(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::string s;
  for (int k = 0; k < n; ++k) s.push_back("ACGU"[rng() % 4]);
  return Sequence(s);
}

void BM_Fold(benchmark::State& st) {
  Sequence x = random_sequence(static_cast<int>(st.range(0)), 1);
  auto c = FoldConstraint::unconstrained(x.length());
  for (auto _ : st) benchmark::DoNotOptimize(fold_constrained(params(), x, c));
}
BENCHMARK(BM_Fold)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_StructureEnergy(benchmark::State& st) {
  Sequence x = random_sequence(200, 2);
  auto y = fold_constrained(params(), x, FoldConstraint::unconstrained(200)).structure;
  for (auto _ : st) benchmark::DoNotOptimize(structure_energy(params(), x, y));
}
BENCHMARK(BM_StructureEnergy);

void BM_CanonicalForm(benchmark::State& st) {
  auto host = make_host(parse_dotbracket("....(....((..(.........)..((...((....))...((....))........))......)))...."));
  Motif m(host, {2, 3, 4, 5, 6});
  for (auto _ : st) benchmark::DoNotOptimize(canonical_form(m));
}
BENCHMARK(BM_CanonicalForm);

void BM_ConstraintFromRival(benchmark::State& st) {
  Motif target(make_host(parse_dotbracket("((((...).)))")), {3, 4});
  auto rival = region_motif(target, parse_dotbracket("(((......)))"));
  for (auto _ : st) benchmark::DoNotOptimize(constraint_from_rival(params(), target, rival, 1e10));
}
BENCHMARK(BM_ConstraintFromRival);

void BM_FastMotif(benchmark::State& st) {
  auto host = make_host(parse_dotbracket("((((...).)))..((..((...))..))"));
  ScanOptions opt;
  opt.budget.M = 1e7;
  for (auto _ : st) {
    MotifStores stores;
    benchmark::DoNotOptimize(fast_motif(params(), host, opt, stores));
  }
}
BENCHMARK(BM_FastMotif)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
