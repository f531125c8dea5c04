#include "tabdoc/eval/alignment.hpp"

#include <stdexcept>
#include <string>

#include "tabdoc/error.hpp"
#include "tabdoc/eval/assignment.hpp"
#include "tabdoc/model/normalize.hpp"

namespace tabdoc::eval {

void AlignmentConfig::validate() const {
  if (!(tau >= 0.0 && tau <= 1.0)) throw Error(Errc::invalid_argument, "alignment tau must be in [0, 1]");
}

double Alignment::total_score() const noexcept {
  double sum = 0.0;
  for (const auto& p : pairs) sum += p.score;
  return sum;
}

std::vector<std::vector<double>> key_similarity(const model::Table& pred, const model::Table& gt,
                                                SimilarityKind kind) {
  const auto pk = pred.schema().key_attribute_index();
  const auto gk = gt.schema().key_attribute_index();
  std::vector<std::string> gt_keys;
  gt_keys.reserve(gt.rows());
  for (std::size_t g = 0; g < gt.rows(); ++g) gt_keys.push_back(model::normalize_cell(gt.at(g, gk).value));

  std::vector<std::vector<double>> sim(pred.rows(), std::vector<double>(gt.rows(), 0.0));
  for (std::size_t p = 0; p < pred.rows(); ++p) {
    const auto& cell = pred.at(p, pk);
    if (cell.is_null()) continue;
    const auto key = model::normalize_cell(cell.value);
    for (std::size_t g = 0; g < gt.rows(); ++g) sim[p][g] = similarity(key, gt_keys[g], kind);
  }
  return sim;
}

Alignment align_rows(const model::Table& pred, const model::Table& gt, const AlignmentConfig& cfg) {
  cfg.validate();
  if (pred.schema().attribute_names() != gt.schema().attribute_names() ||
      pred.schema().key_attribute_index() != gt.schema().key_attribute_index())
    throw Error(Errc::schema_mismatch, "prediction and ground truth use different schemas");

  const auto sim = key_similarity(pred, gt, cfg.similarity);
  Alignment out;
  std::vector<bool> pred_used(pred.rows(), false), gt_used(gt.rows(), false);
  if (pred.rows() > 0 && gt.rows() > 0) {
    const auto m = max_weight_matching(sim, cfg.tau);
    for (const auto& [p, g] : m.pairs) {
      out.pairs.push_back({p, g, sim[p][g]});
      pred_used[p] = true;
      gt_used[g] = true;
    }
  }
  for (std::size_t p = 0; p < pred.rows(); ++p)
    if (!pred_used[p]) out.unmatched_pred.push_back(p);
  for (std::size_t g = 0; g < gt.rows(); ++g)
    if (!gt_used[g]) out.unmatched_gt.push_back(g);
  return out;
}

}  // namespace tabdoc::eval
