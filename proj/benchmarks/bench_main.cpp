// Microbenchmarks for the core algorithms.

#include <benchmark/benchmark.h>

#include <random>

#include "rankone/classify.hpp"
#include "rankone/homology.hpp"
#include "rankone/stallings.hpp"
#include "rankone/subgroup.hpp"
#include "rankone/whitehead.hpp"

using namespace rankone;

namespace {

Word random_word(std::size_t rank, std::size_t len, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> gen(0, rank - 1);
  std::vector<Letter> raw;
  for (std::size_t i = 0; i < len; ++i) {
    raw.push_back(make_letter(gen(rng), rng() % 2 ? 1 : -1));
  }
  return Word(raw);
}

void BM_Fold(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<Word> gens;
  for (int k = 0; k < 4; ++k) {
    gens.push_back(random_word(3, static_cast<std::size_t>(state.range(0)), rng));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(fold(gens, 3));
  }
}
BENCHMARK(BM_Fold)->Arg(16)->Arg(64)->Arg(256);

void BM_IsPrimitive(benchmark::State& state) {
  std::mt19937_64 rng(2);
  Word w = random_word(3, static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(is_primitive(w, 3));
  }
}
BENCHMARK(BM_IsPrimitive)->Arg(8)->Arg(32);

void BM_SmithNormalForm(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> entry(-9, 9);
  std::size_t const n = static_cast<std::size_t>(state.range(0));
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      m(i, j) = entry(rng);
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(smith_normal_form(m));
  }
}
BENCHMARK(BM_SmithNormalForm)->Arg(4)->Arg(12)->Arg(24);

void BM_CosetEnumerate(benchmark::State& state) {
  auto p = parse_presentation("< a, b | a^2, b^3, a b a b a b a b a b >");
  for (auto _ : state) {
    benchmark::DoNotOptimize(coset_enumerate(p, {}));
  }
}
BENCHMARK(BM_CosetEnumerate);

void BM_LowIndex(benchmark::State& state) {
  auto p = parse_presentation(
      "< t, a | a^2 t a^-3 t^-1 a^2 t a^-3 t^-1 a^2 t a^-3 t^-1 a^-2 >");
  LowIndexOptions o;
  o.max_index = static_cast<std::size_t>(state.range(0));
  o.jobs = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(low_index_subgroups(p, o));
  }
}
BENCHMARK(BM_LowIndex)->Args({6, 1})->Args({8, 1})->Args({8, 4})
    ->Unit(benchmark::kMillisecond);

void BM_VsaSearch(benchmark::State& state) {
  auto p = parse_presentation("< t, a | t a^2 t^-1 a^-3 >");
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        vsa_search(p, static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_VsaSearch)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
