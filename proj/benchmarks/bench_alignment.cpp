#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "tabdoc/eval/alignment.hpp"
#include "tabdoc/eval/scoring.hpp"

using namespace tabdoc;

namespace {

std::shared_ptr<const model::Schema> bench_schema() {
  static const auto schema = std::make_shared<const model::Schema>(
      "item", std::vector<model::AttributeSpec>{{"Name"}, {"Region"}, {"Amount"}, {"Date"}});
  return schema;
}

std::string word(std::mt19937_64& rng, int len) {
  std::uniform_int_distribution<int> ch('a', 'z');
  std::string s;
  for (int i = 0; i < len; ++i) s.push_back(static_cast<char>(ch(rng)));
  return s;
}

// Ground truth plus a shuffled prediction with perturbed keys and values.
std::pair<model::Table, model::Table> make_pair(int n) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(n));
  std::vector<model::Tuple> gt, pred;
  for (int i = 0; i < n; ++i) {
    model::Tuple t{{model::Cell{"entity " + word(rng, 8)}, model::Cell{word(rng, 5)},
                    model::Cell{std::to_string(1000 + i * 17)}, model::Cell{"2024-05-" + std::to_string(10 + i % 18)}}};
    gt.push_back(t);
    if (i % 3 == 0) t.cells[0].value->push_back('x');
    if (i % 4 == 0) t.cells[2].value = "0";
    pred.push_back(std::move(t));
  }
  std::shuffle(pred.begin(), pred.end(), rng);
  return {model::Table(bench_schema(), gt), model::Table(bench_schema(), pred)};
}

void BM_AlignRows(benchmark::State& state) {
  const auto [gt, pred] = make_pair(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eval::align_rows(pred, gt, {}));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AlignRows)->RangeMultiplier(2)->Range(4, 128)->Complexity();

void BM_ScoreCells(benchmark::State& state) {
  const auto [gt, pred] = make_pair(static_cast<int>(state.range(0)));
  model::CapabilityMatrix matrix(gt.rows(), gt.cols());
  for (std::size_t i = 0; i < gt.rows(); ++i)
    for (std::size_t j = 0; j < gt.cols(); ++j) matrix.set({i, j}, model::CapabilityLabel::empty());
  const auto alignment = eval::align_rows(pred, gt, {});
  for (auto _ : state) benchmark::DoNotOptimize(eval::score_cells(alignment, pred, gt, matrix));
}
BENCHMARK(BM_ScoreCells)->Arg(16)->Arg(128);

}  // namespace
