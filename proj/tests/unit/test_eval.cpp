#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "tabdoc/error.hpp"
#include "tabdoc/eval/alignment.hpp"
#include "tabdoc/eval/assignment.hpp"
#include "tabdoc/eval/corpus_stats.hpp"
#include "tabdoc/eval/metrics.hpp"
#include "tabdoc/eval/report.hpp"
#include "tabdoc/eval/scoring.hpp"
#include "tabdoc/eval/similarity.hpp"
#include "tabdoc/model/normalize.hpp"
#include "test_support.hpp"

using namespace tabdoc;
using namespace tabdoc::eval;
using model::CapabilityLabel;
using model::Cell;
using model::SubCapability;
using model::Table;
using model::Tuple;
using nlohmann::json;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::invalid_argument;
}

// Plain recursive edit distance over bytes, memoized. ASCII inputs only.
std::size_t oracle_distance(const std::string& a, const std::string& b) {
  std::vector<std::vector<long>> memo(a.size() + 1, std::vector<long>(b.size() + 1, -1));
  std::function<long(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> long {
    if (i == a.size()) return static_cast<long>(b.size() - j);
    if (j == b.size()) return static_cast<long>(a.size() - i);
    auto& m = memo[i][j];
    if (m >= 0) return m;
    if (a[i] == b[j]) return m = go(i + 1, j + 1);
    return m = 1 + std::min({go(i + 1, j), go(i, j + 1), go(i + 1, j + 1)});
  };
  return static_cast<std::size_t>(go(0, 0));
}

struct Brute {
  double best = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (left, right), lexicographic by (right, left)
};

// All one-to-one matchings over admissible edges; best total, then the
// smallest pair list ordered by (right, left).
Brute brute_force(const std::vector<std::vector<double>>& w, double tau) {
  const std::size_t nl = w.size(), nr = nl ? w[0].size() : 0;
  Brute out;
  bool have = false;
  std::vector<int> owner(nr, -1);
  std::vector<char> used(nl, 0);
  std::function<void(std::size_t, double)> go = [&](std::size_t r, double total) {
    if (r == nr) {
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t x = 0; x < nr; ++x)
        if (owner[x] >= 0) pairs.emplace_back(static_cast<std::size_t>(owner[x]), x);
      auto key = [](const auto& ps) {
        std::vector<std::pair<std::size_t, std::size_t>> k;
        for (auto [l, rr] : ps) k.emplace_back(rr, l);
        return k;
      };
      if (!have || total > out.best + 1e-9 || (std::abs(total - out.best) <= 1e-9 && key(pairs) < key(out.pairs))) {
        if (!have || total > out.best + 1e-9) out.best = total;
        out.pairs = pairs;
        have = true;
      }
      return;
    }
    owner[r] = -1;
    go(r + 1, total);
    for (std::size_t l = 0; l < nl; ++l) {
      if (used[l] || w[l][r] < tau || w[l][r] <= 0.0) continue;
      used[l] = 1;
      owner[r] = static_cast<int>(l);
      go(r + 1, total + w[l][r]);
      used[l] = 0;
      owner[r] = -1;
    }
  };
  go(0, 0.0);
  return out;
}

std::shared_ptr<const model::Schema> two_col() {
  return std::make_shared<const model::Schema>("x", std::vector<model::AttributeSpec>{{"Name"}, {"Value"}});
}

Table table_of(std::vector<std::pair<std::optional<std::string>, std::optional<std::string>>> rows) {
  std::vector<Tuple> tuples;
  for (auto& [k, v] : rows) tuples.push_back(Tuple{{Cell{k}, Cell{v}}});
  return Table(two_col(), std::move(tuples));
}

model::CapabilityMatrix all_empty(std::size_t rows, std::size_t cols) {
  model::CapabilityMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m.set({r, c}, CapabilityLabel::empty());
  return m;
}

}  // namespace

TEST_CASE("edit similarity agrees with a DP oracle") {
  CHECK(oracle_distance("acme corp", "acme corporation") == 7);
  CHECK(edit_distance("acme corp", "acme corporation") == 7);
  CHECK(similarity("acme corp", "acme corporation", SimilarityKind::normalized_edit) == doctest::Approx(0.5625));
  CHECK(similarity("acme corp", "acme corp", SimilarityKind::normalized_edit) == 1.0);
  CHECK(similarity("abc", "xyz", SimilarityKind::normalized_edit) == 0.0);
  CHECK(similarity("", "", SimilarityKind::normalized_edit) == 1.0);

  std::mt19937 rng(3);
  std::uniform_int_distribution<int> len(0, 9), ch('a', 'd');
  for (int i = 0; i < 500; ++i) {
    std::string a, b;
    for (int n = len(rng); n > 0; --n) a.push_back(static_cast<char>(ch(rng)));
    for (int n = len(rng); n > 0; --n) b.push_back(static_cast<char>(ch(rng)));
    CAPTURE(a);
    CAPTURE(b);
    CHECK(edit_distance(a, b) == oracle_distance(a, b));
    CHECK(similarity(a, b, SimilarityKind::normalized_edit) == similarity(b, a, SimilarityKind::normalized_edit));
  }
}

TEST_CASE("edit distance counts code points") {
  CHECK(edit_distance("caf\xC3\xA9", "cafe") == 1);
  CHECK(similarity("\xC3\xA9t\xC3\xA9", "ete", SimilarityKind::normalized_edit) == doctest::Approx(1.0 / 3));
}

TEST_CASE("token jaccard") {
  CHECK(similarity("a b c", "b c d", SimilarityKind::token_jaccard) == doctest::Approx(0.5));
  CHECK(similarity("a a", "a", SimilarityKind::token_jaccard) == 1.0);
  CHECK(similarity("", "", SimilarityKind::token_jaccard) == 1.0);
  CHECK(similarity("x", "", SimilarityKind::token_jaccard) == 0.0);
  CHECK(parse_similarity_kind("jaccard") == SimilarityKind::token_jaccard);
  CHECK_FALSE(parse_similarity_kind("cosine").has_value());
}

TEST_CASE("2x2 matching example") {
  const std::vector<std::vector<double>> w = {{0.9, 0.2}, {0.3, 0.8}};
  const auto m = max_weight_matching(w, 0.5);
  CHECK(m.pairs == std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 1}});
  CHECK(m.total == doctest::Approx(1.7));
  const auto b = brute_force(w, 0.5);
  CHECK(b.best == doctest::Approx(1.7));
}

TEST_CASE("matching equals brute force on random instances, including ties") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> side(0, 6), coarse(0, 4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int nl = side(rng), nr = side(rng);
    const bool ties = trial % 2 == 0;
    std::vector<std::vector<double>> w(nl, std::vector<double>(nr));
    for (auto& row : w)
      for (auto& x : row) x = ties ? coarse(rng) / 4.0 : u(rng);
    const double tau = ties ? 0.25 : u(rng) * 0.6;
    const auto got = max_weight_matching(w, tau);
    const auto want = brute_force(w, tau);
    CAPTURE(trial);
    CHECK(got.total == doctest::Approx(want.best).epsilon(1e-9));
    CHECK(got.pairs == want.pairs);
  }
}

TEST_CASE("raising tau can add pairs under exact max-weight matching") {
  // Alternating path g1-p1-g2-p2-g3-p3-g4-p4. The heavy edges (1.0) plus the
  // light bridge (0.3) beat the four 0.51 edges only while the bridge is
  // admissible.
  std::vector<std::vector<double>> w(4, std::vector<double>(4, 0.0));
  w[0][0] = 0.51;
  w[0][1] = 1.0;
  w[1][1] = 0.51;
  w[1][2] = 0.3;
  w[2][2] = 0.51;
  w[2][3] = 1.0;
  w[3][3] = 0.51;
  const auto low = max_weight_matching(w, 0.2);
  const auto high = max_weight_matching(w, 0.45);
  CHECK(low.pairs.size() == 3);
  CHECK(low.total == doctest::Approx(2.3));
  CHECK(high.pairs.size() == 4);
  CHECK(high.total == doctest::Approx(2.04));
  CHECK(brute_force(w, 0.2).best == doctest::Approx(2.3));
  CHECK(brute_force(w, 0.45).best == doctest::Approx(2.04));
}

TEST_CASE("assignment solver handles rectangular costs") {
  const auto a = solve_assignment({{4, 1, 3}, {2, 0, 5}});
  CHECK(a == std::vector<std::size_t>{1, 0});
  CHECK_THROWS(solve_assignment({{1}, {2}}));
}

TEST_CASE("row alignment recovers permutations") {
  const auto gt = table_of({{"alpha", "1"}, {"bravo", "2"}, {"charlie", "3"}, {"delta", "4"}, {"echo", "5"}});
  const auto pred = table_of({{"Delta", "4"}, {"alpha", "1"}, {"ECHO", "5"}, {"charlie", "3"}, {"bravo", "2"}});
  const auto a = align_rows(pred, gt, AlignmentConfig{});
  REQUIRE(a.pairs.size() == 5);
  const std::size_t expected_pred[] = {1, 4, 3, 0, 2};
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(a.pairs[i].gt_row == i);
    CHECK(a.pairs[i].pred_row == expected_pred[i]);
    CHECK(a.pairs[i].score == 1.0);
  }
  CHECK(a.unmatched_gt.empty());
  CHECK(a.total_score() == doctest::Approx(5.0));
}

TEST_CASE("alignment thresholds and unmatched rows") {
  const auto gt = table_of({{"acme corporation", "1"}, {"globex", "2"}});
  const auto pred = table_of({{"acme corp", "1"}, {std::nullopt, "2"}, {"initech", "3"}});
  const auto strict = align_rows(pred, gt, AlignmentConfig{0.85});
  CHECK(strict.pairs.empty());
  CHECK(strict.unmatched_pred == std::vector<std::size_t>{0, 1, 2});
  CHECK(strict.unmatched_gt == std::vector<std::size_t>{0, 1});
  const auto loose = align_rows(pred, gt, AlignmentConfig{0.5});
  REQUIRE(loose.pairs.size() == 1);
  CHECK(loose.pairs[0].pred_row == 0);
  CHECK(loose.pairs[0].score == doctest::Approx(0.5625));

  CHECK(code_of([] { AlignmentConfig{1.5}.validate(); }) == Errc::invalid_argument);
  CHECK_NOTHROW(AlignmentConfig{0.0}.validate());
  const auto other = Table(testing::patient_schema(), testing::patient_table().tuples());
  CHECK(code_of([&] { align_rows(other, gt, AlignmentConfig{}); }) == Errc::schema_mismatch);
}

TEST_CASE("cell scoring examples") {
  const auto gt = table_of({{"acme", "3480000"}, {"beta", std::nullopt}, {"gamma", "7"}});
  model::CapabilityMatrix m = all_empty(3, 2);
  m.set({0, 1}, CapabilityLabel(SubCapability::arithmetic_reasoning));
  m.set({1, 1}, CapabilityLabel(SubCapability::missing_value_faithfulness));

  SUBCASE("normalized match and NULL vs NULL") {
    const auto pred = table_of({{"Acme", "3,480,000"}, {"beta", std::nullopt}, {"gamma", "7"}});
    const auto s = score_cells(align_rows(pred, gt, {}), pred, gt, m);
    CHECK(s.counts.tp == 6);
    CHECK(s.counts.by_sub.at(SubCapability::missing_value_faithfulness) == BucketCount{1, 1});
    CHECK(s.counts.by_sub.at(SubCapability::arithmetic_reasoning) == BucketCount{1, 1});
    CHECK(s.counts.direct == BucketCount{4, 4});
    CHECK(s.counts.indirect == BucketCount{2, 2});
    CHECK(s.verdicts.size() == 6);
  }
  SUBCASE("truncated number misses, fabricated value misses") {
    const auto pred = table_of({{"acme", "3480"}, {"beta", "12"}, {"gamma", "7"}});
    const auto s = score_cells(align_rows(pred, gt, {}), pred, gt, m);
    CHECK(s.counts.tp == 4);
    CHECK(s.counts.by_category.at(model::Category::EF) == BucketCount{0, 1});
    CHECK(s.counts.by_category.at(model::Category::RI) == BucketCount{0, 1});
  }
  SUBCASE("unmatched rows") {
    const auto pred = table_of({{"acme", "3480000"}, {"zeta", "1"}, {"omega", "2"}, {"psi", "3"}});
    const auto s = score_cells(align_rows(pred, gt, {}), pred, gt, m);
    CHECK(s.counts.tp == 2);
    CHECK(s.counts.pred_cells == 8);
    CHECK(s.counts.gt_cells == 6);
    CHECK_FALSE(s.verdicts[2].pred_row.has_value());
  }
  SUBCASE("matrix shape and refinement") {
    const auto pred = gt;
    CHECK(code_of([&] { score_cells(align_rows(pred, gt, {}), pred, gt, all_empty(2, 2)); }) ==
          Errc::dimension_mismatch);
    auto coarse = m;
    coarse.set({2, 1}, CapabilityLabel(model::Category::TA, std::nullopt));
    CHECK(code_of([&] { score_cells(align_rows(pred, gt, {}), pred, gt, coarse); }) == Errc::invalid_argument);
  }
}

TEST_CASE("scoring is invariant under simultaneous row permutation") {
  const auto gt = table_of({{"a1", "x"}, {"b2", "y"}, {"c3", "z"}, {"d4", std::nullopt}});
  const auto pred = table_of({{"c3", "z"}, {"a1", "q"}, {"d4", std::nullopt}, {"e5", "y"}});
  auto m = all_empty(4, 2);
  m.set({3, 1}, CapabilityLabel(SubCapability::missing_value_faithfulness));
  m.set({1, 1}, CapabilityLabel(SubCapability::semantic_mapping));
  const auto base = score_cells(align_rows(pred, gt, {}), pred, gt, m).counts;

  const std::vector<std::size_t> perm = {2, 0, 3, 1};
  std::vector<Tuple> gt_rows, pred_rows;
  model::CapabilityMatrix pm(4, 2);
  for (std::size_t i = 0; i < 4; ++i) {
    gt_rows.push_back(gt.tuples()[perm[i]]);
    pred_rows.push_back(pred.tuples()[perm[i]]);
    for (std::size_t c = 0; c < 2; ++c) pm.set({i, c}, *m.at(perm[i], c));
  }
  const Table pgt(two_col(), gt_rows), ppred(two_col(), pred_rows);
  CHECK(score_cells(align_rows(ppred, pgt, {}), ppred, pgt, pm).counts == base);
}

TEST_CASE("metrics reproduce the published F1 and delta columns") {
  struct Row {
    double p, r, f1, rdir, rind, delta;
  };
  const Row rows[] = {
      {44.09, 27.20, 33.65, 35.47, 19.33, 45.50}, {68.64, 58.18, 62.98, 73.84, 43.25, 41.43},
      {70.99, 62.35, 66.39, 74.10, 51.15, 30.97}, {75.67, 73.81, 74.73, 91.00, 57.40, 36.92},
      {85.23, 85.37, 85.30, 96.37, 74.91, 22.27}, {85.81, 83.17, 84.47, 92.93, 73.88, 20.50},
      {88.53, 83.59, 85.99, 92.48, 75.12, 18.77}, {90.46, 88.24, 89.34, 95.93, 80.90, 15.67},
  };
  for (const auto& row : rows) {
    CHECK(std::abs(*f1_from(row.p, row.r) - row.f1) <= 0.01);
    CHECK(std::abs(*delta_from(row.rdir, row.rind) - row.delta) <= 0.01);
  }
}

TEST_CASE("metric edge cases") {
  CHECK(round2(0.125) == 0.13);
  CHECK(round2(-0.125) == -0.13);
  CHECK(round2(1.005) == 1.01);
  CHECK_FALSE(percent(1, 0).has_value());
  CHECK(*percent(1, 3) == 33.33);
  CHECK(*f1_from(0.0, 0.0) == 0.0);
  CHECK_FALSE(f1_from(std::nullopt, 5.0).has_value());
  CHECK_FALSE(delta_from(0.0, 0.0).has_value());

  ScoreCounts c;
  c.tp = 4;
  c.pred_cells = 4;
  c.gt_cells = 4;
  c.direct = {4, 4};
  const auto m = compute_metrics(c);
  CHECK(*m.precision == 100.0);
  CHECK(*m.f1 == 100.0);
  CHECK(*m.recall_direct == 100.0);
  CHECK_FALSE(m.recall_indirect.has_value());
  CHECK_FALSE(m.delta.has_value());
  CHECK(m.cssr.empty());
  const auto j = to_json(m);
  CHECK(j["recall_indirect"].is_null());
  CHECK(j["delta"].is_null());
}

TEST_CASE("counts add up and round-trip through JSON") {
  ScoreCounts a, b;
  a.tp = 1;
  a.pred_cells = 2;
  a.gt_cells = 3;
  a.indirect = {1, 2};
  a.by_category[model::Category::TA] = {1, 2};
  a.by_sub[SubCapability::unit_transformation] = {1, 2};
  b = a;
  b.by_sub[SubCapability::format_transformation] = {0, 1};
  a += b;
  CHECK(a.tp == 2);
  CHECK(a.by_sub.at(SubCapability::unit_transformation) == BucketCount{2, 4});
  CHECK(a.by_sub.at(SubCapability::format_transformation) == BucketCount{0, 1});
  CHECK(score_counts_from_json(to_json(a)) == a);
  CHECK(code_of([] { score_counts_from_json(json{{"tp", "x"}}); }) == Errc::parse_error);
}

TEST_CASE("corpus statistics") {
  const auto one = corpus_stats({{3, 2, 500, std::nullopt}});
  CHECK(one.rows.min == 3);
  CHECK(one.rows.max == 3);
  CHECK(one.rows.avg == 3.0);
  CHECK(one.cols.avg == 2.0);
  CHECK(one.tokens.avg == 500.0);

  auto m = all_empty(3, 2);
  m.set({0, 1}, CapabilityLabel(SubCapability::unit_transformation));
  const auto two = corpus_stats({{3, 2, 100, m}, {5, 4, 301, std::nullopt}});
  CHECK(two.rows.min == 3);
  CHECK(two.rows.max == 5);
  CHECK(two.rows.avg == 4.0);
  CHECK(two.cols.avg == 3.0);
  CHECK(two.tokens.avg == 200.5);
  CHECK(two.labeled_cells == 6);
  CHECK(two.category_counts.at(model::Category::empty) == 5);
  CHECK(two.sub_share(SubCapability::unit_transformation) == doctest::Approx(100.0 / 6));
  const auto md = corpus_stats_markdown(two);
  CHECK(md.find("| Rows | 3 | 5 | 4.0 |") != std::string::npos);
  CHECK(md.find("| Tokens | 100 | 301 | 200.5 |") != std::string::npos);
  CHECK(to_json(two)["rows"]["avg"] == 4.0);
  CHECK_THROWS_AS(corpus_stats({}), Error);
}

TEST_CASE("summaries group by model and micro-average") {
  ScoreCounts c1, c2;
  c1.tp = 3;
  c1.pred_cells = 4;
  c1.gt_cells = 4;
  c1.direct = {3, 4};
  c2.tp = 1;
  c2.pred_cells = 4;
  c2.gt_cells = 4;
  c2.direct = {1, 2};
  c2.indirect = {0, 2};
  c2.by_category[model::Category::CR] = {0, 2};
  c2.by_sub[SubCapability::source_aware_resolution] = {0, 2};
  const auto s = summarize({{"case2", "zeta", c2}, {"case1", "alpha", c1}, {"case2", "alpha", c2}});
  REQUIRE(s.size() == 2);
  CHECK(s[0].model == "alpha");
  CHECK(s[0].cases == 2);
  CHECK(*s[0].metrics.precision == 50.0);
  CHECK(*s[0].metrics.recall_direct == doctest::Approx(66.67));
  CHECK(s[0].metrics.cssr.at(model::Category::CR) == 0.0);
  const auto md = summary_markdown(s);
  CHECK(md.find("## Overall") != std::string::npos);
  CHECK(md.find("| alpha | 2 | 50.00 | 50.00 | 50.00 |") != std::string::npos);
  CHECK(md.find("| zeta | 1 |") != std::string::npos);
  CHECK(summary_json(s)["models"].size() == 2);
}

TEST_CASE("case report JSON carries what report needs") {
  const auto gt = table_of({{"a", "1"}, {"b", "2"}});
  const auto pred = table_of({{"a", "1"}, {"b", "3"}});
  CaseReport r{"c1", "m1", {}, align_rows(pred, gt, {}), {}};
  r.score = score_cells(r.alignment, pred, gt, all_empty(2, 2));
  const auto j = to_json(r, gt);
  CHECK(j["alignment"]["tau"] == 0.85);
  CHECK(j["cells"].size() == 4);
  const auto rec = case_record_from_json(j);
  CHECK(rec.case_id == "c1");
  CHECK(rec.model == "m1");
  CHECK(rec.counts == r.score.counts);
  CHECK(j["metrics"]["precision"] == 75.0);
}
