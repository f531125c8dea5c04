#include "tabdoc/eval/report.hpp"

#include <cstdio>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tabdoc/error.hpp"

namespace tabdoc::eval {

using nlohmann::json;

json to_json(const CaseReport& r, const model::Table& gt) {
  json pairs = json::array();
  for (const auto& p : r.alignment.pairs)
    pairs.push_back({{"pred_row", p.pred_row}, {"gt_row", p.gt_row}, {"score", p.score}});
  json cells = json::array();
  for (const auto& v : r.score.verdicts) cells.push_back(to_json(v, gt));
  return {{"case", r.case_id},
          {"model", r.model},
          {"alignment",
           {{"tau", r.alignment_config.tau},
            {"similarity", std::string(to_string(r.alignment_config.similarity))},
            {"pairs", std::move(pairs)},
            {"unmatched_pred", r.alignment.unmatched_pred},
            {"unmatched_gt", r.alignment.unmatched_gt}}},
          {"counts", to_json(r.score.counts)},
          {"metrics", to_json(compute_metrics(r.score.counts))},
          {"cells", std::move(cells)}};
}

CaseRecord case_record_from_json(const json& j) {
  try {
    return {j.at("case").get<std::string>(), j.at("model").get<std::string>(),
            score_counts_from_json(j.at("counts"))};
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("bad evaluation report: ") + e.what());
  }
}

std::vector<ModelSummary> summarize(const std::vector<CaseRecord>& records) {
  std::map<std::string, ModelSummary> by_model;
  for (const auto& r : records) {
    auto& s = by_model[r.model];
    s.model = r.model;
    ++s.cases;
    s.counts += r.counts;
  }
  std::vector<ModelSummary> out;
  for (auto& [name, s] : by_model) {
    s.metrics = compute_metrics(s.counts);
    out.push_back(std::move(s));
  }
  return out;
}

json summary_json(const std::vector<ModelSummary>& summaries) {
  json models = json::array();
  for (const auto& s : summaries)
    models.push_back({{"model", s.model}, {"cases", s.cases}, {"counts", to_json(s.counts)},
                      {"metrics", to_json(s.metrics)}});
  return {{"models", std::move(models)}};
}

namespace {

std::string fmt(std::optional<double> v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *v);
  return buf;
}

template <class Map, class Key>
std::optional<double> lookup(const Map& m, const Key& k) {
  const auto it = m.find(k);
  return it == m.end() ? std::nullopt : std::optional<double>(it->second);
}

}  // namespace

std::string summary_markdown(const std::vector<ModelSummary>& summaries) {
  std::ostringstream out;
  out << "## Overall\n\n| Model | Cases | P | R | F1 | R_dir | R_ind | Delta |\n"
      << "|---|---|---|---|---|---|---|---|\n";
  for (const auto& s : summaries) {
    const auto& m = s.metrics;
    out << "| " << s.model << " | " << s.cases << " | " << fmt(m.precision) << " | " << fmt(m.recall) << " | "
        << fmt(m.f1) << " | " << fmt(m.recall_direct) << " | " << fmt(m.recall_indirect) << " | "
        << fmt(m.delta) << " |\n";
  }

  out << "\n## Capability success rates\n\n| Model |";
  for (auto c : model::kCapabilityCategories) out << ' ' << model::to_string(c) << " |";
  for (auto sub : model::kSubCapabilities) out << ' ' << model::to_string(sub) << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < model::kCapabilityCategories.size() + model::kSubCapabilities.size(); ++i) out << "---|";
  out << '\n';
  for (const auto& s : summaries) {
    out << "| " << s.model << " |";
    for (auto c : model::kCapabilityCategories) out << ' ' << fmt(lookup(s.metrics.cssr, c)) << " |";
    for (auto sub : model::kSubCapabilities) out << ' ' << fmt(lookup(s.metrics.scssr, sub)) << " |";
    out << '\n';
  }
  return out.str();
}

}  // namespace tabdoc::eval
