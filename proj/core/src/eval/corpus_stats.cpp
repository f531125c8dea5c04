#include "tabdoc/eval/corpus_stats.hpp"

#include "tabdoc/error.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace tabdoc::eval {

using nlohmann::json;

namespace {

template <class Get>
Range range_of(const std::vector<CaseShape>& cases, Get get) {
  Range r{get(cases.front()), get(cases.front()), 0.0};
  double sum = 0.0;
  for (const auto& c : cases) {
    const std::size_t v = get(c);
    r.min = std::min(r.min, v);
    r.max = std::max(r.max, v);
    sum += static_cast<double>(v);
  }
  r.avg = sum / static_cast<double>(cases.size());
  return r;
}

json range_json(const Range& r) { return {{"min", r.min}, {"max", r.max}, {"avg", r.avg}}; }

}  // namespace

double CorpusStats::category_share(model::Category c) const {
  const auto it = category_counts.find(c);
  if (labeled_cells == 0 || it == category_counts.end()) return 0.0;
  return 100.0 * static_cast<double>(it->second) / static_cast<double>(labeled_cells);
}

double CorpusStats::sub_share(model::SubCapability s) const {
  const auto it = sub_counts.find(s);
  if (labeled_cells == 0 || it == sub_counts.end()) return 0.0;
  return 100.0 * static_cast<double>(it->second) / static_cast<double>(labeled_cells);
}

CorpusStats corpus_stats(const std::vector<CaseShape>& cases) {
  if (cases.empty()) throw Error(Errc::invalid_argument, "corpus_stats needs at least one case");
  CorpusStats s;
  s.cases = cases.size();
  s.rows = range_of(cases, [](const CaseShape& c) { return c.rows; });
  s.cols = range_of(cases, [](const CaseShape& c) { return c.cols; });
  s.tokens = range_of(cases, [](const CaseShape& c) { return c.tokens; });
  for (const auto& c : cases) {
    if (!c.matrix) continue;
    for (std::size_t i = 0; i < c.matrix->rows(); ++i) {
      for (std::size_t j = 0; j < c.matrix->cols(); ++j) {
        const auto& label = c.matrix->at(i, j);
        if (!label) continue;
        ++s.labeled_cells;
        ++s.category_counts[label->category()];
        if (label->sub()) ++s.sub_counts[*label->sub()];
      }
    }
  }
  return s;
}

json to_json(const CorpusStats& s) {
  json cats = json::object(), subs = json::object();
  for (const auto& [k, n] : s.category_counts)
    cats[std::string(model::to_string(k))] = {{"count", n}, {"share", s.category_share(k)}};
  for (const auto& [k, n] : s.sub_counts)
    subs[std::string(model::to_string(k))] = {{"count", n}, {"share", s.sub_share(k)}};
  return {{"cases", s.cases},
          {"rows", range_json(s.rows)},
          {"cols", range_json(s.cols)},
          {"tokens", range_json(s.tokens)},
          {"labeled_cells", s.labeled_cells},
          {"categories", std::move(cats)},
          {"sub_capabilities", std::move(subs)}};
}

std::string corpus_stats_markdown(const CorpusStats& s) {
  std::ostringstream out;
  out << "| | Min | Max | Avg |\n|---|---|---|---|\n";
  auto line = [&](const char* name, const Range& r) {
    char avg[32];
    std::snprintf(avg, sizeof avg, "%.1f", r.avg);
    out << "| " << name << " | " << r.min << " | " << r.max << " | " << avg << " |\n";
  };
  line("Rows", s.rows);
  line("Columns", s.cols);
  line("Tokens", s.tokens);
  return out.str();
}

}  // namespace tabdoc::eval
