#include "tabdoc/eval/scoring.hpp"

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "tabdoc/error.hpp"
#include "tabdoc/model/normalize.hpp"

namespace tabdoc::eval {

using nlohmann::json;

ScoreCounts& ScoreCounts::operator+=(const ScoreCounts& o) {
  tp += o.tp;
  pred_cells += o.pred_cells;
  gt_cells += o.gt_cells;
  direct += o.direct;
  indirect += o.indirect;
  for (const auto& [k, v] : o.by_category) by_category[k] += v;
  for (const auto& [k, v] : o.by_sub) by_sub[k] += v;
  return *this;
}

namespace {

json bucket_json(const BucketCount& b) { return {{"matched", b.matched}, {"total", b.total}}; }

BucketCount bucket_from_json(const json& j) {
  BucketCount b{j.at("matched").get<std::size_t>(), j.at("total").get<std::size_t>()};
  if (b.matched > b.total) throw Error(Errc::parse_error, "bucket has more matches than cells");
  return b;
}

}  // namespace

json to_json(const ScoreCounts& c) {
  json cats = json::object(), subs = json::object();
  for (const auto& [k, v] : c.by_category) cats[std::string(model::to_string(k))] = bucket_json(v);
  for (const auto& [k, v] : c.by_sub) subs[std::string(model::to_string(k))] = bucket_json(v);
  return {{"tp", c.tp},
          {"pred_cells", c.pred_cells},
          {"gt_cells", c.gt_cells},
          {"direct", bucket_json(c.direct)},
          {"indirect", bucket_json(c.indirect)},
          {"by_category", std::move(cats)},
          {"by_sub", std::move(subs)}};
}

ScoreCounts score_counts_from_json(const json& j) {
  try {
    ScoreCounts c;
    c.tp = j.at("tp").get<std::size_t>();
    c.pred_cells = j.at("pred_cells").get<std::size_t>();
    c.gt_cells = j.at("gt_cells").get<std::size_t>();
    c.direct = bucket_from_json(j.at("direct"));
    c.indirect = bucket_from_json(j.at("indirect"));
    for (const auto& [k, v] : j.at("by_category").items()) {
      const auto cat = model::parse_category(k);
      if (!cat || *cat == model::Category::empty) throw Error(Errc::parse_error, "unknown category: " + k);
      c.by_category[*cat] = bucket_from_json(v);
    }
    for (const auto& [k, v] : j.at("by_sub").items()) {
      const auto sub = model::parse_sub_capability(k);
      if (!sub) throw Error(Errc::parse_error, "unknown sub-capability: " + k);
      c.by_sub[*sub] = bucket_from_json(v);
    }
    return c;
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("bad score counts: ") + e.what());
  }
}

CaseScore score_cells(const Alignment& alignment, const model::Table& pred, const model::Table& gt,
                      const model::CapabilityMatrix& matrix) {
  if (!matrix.matches(gt)) throw Error(Errc::dimension_mismatch, "capability matrix does not fit the ground-truth table");
  if (!matrix.refined()) throw Error(Errc::invalid_argument, "capability matrix must be refined for scoring");
  if (pred.cols() != gt.cols()) throw Error(Errc::schema_mismatch, "prediction and ground truth differ in width");

  const std::size_t m = gt.cols();
  std::vector<std::optional<std::size_t>> partner(gt.rows());
  for (const auto& p : alignment.pairs) {
    if (p.gt_row >= gt.rows() || p.pred_row >= pred.rows())
      throw Error(Errc::invalid_argument, "alignment refers to a row outside the tables");
    partner[p.gt_row] = p.pred_row;
  }

  CaseScore out;
  auto& c = out.counts;
  c.pred_cells = pred.rows() * m;
  c.gt_cells = gt.rows() * m;
  out.verdicts.reserve(c.gt_cells);
  for (std::size_t g = 0; g < gt.rows(); ++g) {
    for (std::size_t j = 0; j < m; ++j) {
      CellVerdict v;
      v.gt = {g, j};
      v.pred_row = partner[g];
      v.label = *matrix.at(g, j);
      v.gt_value = model::normalize_cell(gt.at(g, j).value);
      if (v.pred_row) {
        v.pred_value = model::normalize_cell(pred.at(*v.pred_row, j).value);
        v.match = v.pred_value == v.gt_value;
      }
      const std::size_t hit = v.match ? 1 : 0;
      c.tp += hit;
      if (v.label.is_empty()) {
        c.direct += BucketCount{hit, 1};
      } else {
        c.indirect += BucketCount{hit, 1};
        c.by_category[v.label.category()] += BucketCount{hit, 1};
        c.by_sub[*v.label.sub()] += BucketCount{hit, 1};
      }
      out.verdicts.push_back(std::move(v));
    }
  }
  return out;
}

json to_json(const CellVerdict& v, const model::Table& gt) {
  json j = {{"gt_row", v.gt.row},
            {"attribute", gt.schema().attribute(v.gt.col).name},
            {"pred_row", v.pred_row ? json(*v.pred_row) : json(nullptr)},
            {"match", v.match},
            {"gt", v.gt_value},
            {"label", v.label.to_string()}};
  j["pred"] = v.pred_row ? json(v.pred_value) : json(nullptr);
  return j;
}

}  // namespace tabdoc::eval
