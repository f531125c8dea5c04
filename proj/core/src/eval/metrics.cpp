#include "tabdoc/eval/metrics.hpp"

#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

namespace tabdoc::eval {

using nlohmann::json;

double round2(double x) noexcept {
  // Nudge by a relative epsilon so 85.985 computed as 85.98499.. still rounds up.
  const double scaled = x * 100.0;
  const double nudged = scaled + std::copysign(std::abs(scaled) * 1e-12, scaled);
  return std::round(nudged) / 100.0;
}

std::optional<double> percent(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return round2(100.0 * static_cast<double>(num) / static_cast<double>(den));
}

std::optional<double> f1_from(std::optional<double> p, std::optional<double> r) {
  if (!p || !r) return std::nullopt;
  if (*p + *r == 0.0) return 0.0;
  return round2(2.0 * *p * *r / (*p + *r));
}

std::optional<double> delta_from(std::optional<double> r_dir, std::optional<double> r_ind) {
  if (!r_dir || !r_ind || *r_dir == 0.0) return std::nullopt;
  return round2((*r_dir - *r_ind) / *r_dir * 100.0);
}

MetricReport compute_metrics(const ScoreCounts& c) {
  MetricReport m;
  m.precision = percent(c.tp, c.pred_cells);
  m.recall = percent(c.tp, c.gt_cells);
  m.f1 = f1_from(m.precision, m.recall);
  m.recall_direct = percent(c.direct.matched, c.direct.total);
  m.recall_indirect = percent(c.indirect.matched, c.indirect.total);
  m.delta = delta_from(m.recall_direct, m.recall_indirect);
  for (const auto& [k, b] : c.by_category)
    if (auto r = percent(b.matched, b.total)) m.cssr[k] = *r;
  for (const auto& [k, b] : c.by_sub)
    if (auto r = percent(b.matched, b.total)) m.scssr[k] = *r;
  return m;
}

namespace {
json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
}  // namespace

json to_json(const MetricReport& m) {
  json cssr = json::object(), scssr = json::object();
  for (const auto& [k, v] : m.cssr) cssr[std::string(model::to_string(k))] = v;
  for (const auto& [k, v] : m.scssr) scssr[std::string(model::to_string(k))] = v;
  return {{"precision", opt(m.precision)},
          {"recall", opt(m.recall)},
          {"f1", opt(m.f1)},
          {"recall_direct", opt(m.recall_direct)},
          {"recall_indirect", opt(m.recall_indirect)},
          {"delta", opt(m.delta)},
          {"cssr", std::move(cssr)},
          {"scssr", std::move(scssr)}};
}

}  // namespace tabdoc::eval
