#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "tabdoc/model/normalize.hpp"

namespace {

const std::vector<std::string>& samples() {
  static const std::vector<std::string> s = {
      "  Hello   World. ", "$12,450", "-1,234.50", "N/A", "2024-03-02", "03/02/2024",
      "\xC3\x89" "cole  Normale", "Patient-07", "12,34", "none"};
  return s;
}

void BM_NormalizeCell(benchmark::State& state) {
  std::size_t bytes = 0;
  for (const auto& s : samples()) bytes += s.size();
  for (auto _ : state) {
    for (const auto& s : samples()) benchmark::DoNotOptimize(tabdoc::model::normalize_cell(s));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * bytes));
}
BENCHMARK(BM_NormalizeCell);

void BM_NormalizeLong(benchmark::State& state) {
  std::string text;
  for (int i = 0; i < state.range(0); ++i) text += samples()[static_cast<std::size_t>(i) % samples().size()] + " ";
  for (auto _ : state) benchmark::DoNotOptimize(tabdoc::model::normalize_cell(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_NormalizeLong)->Arg(10)->Arg(1000);

}  // namespace
