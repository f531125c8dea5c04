#pragma once

#include <map>
#include <optional>

#include <nlohmann/json.hpp>

#include "tabdoc/eval/scoring.hpp"

namespace tabdoc::eval {

/// Rounds half away from zero to two decimals.
double round2(double x) noexcept;

/// 100 * num / den rounded to two decimals; nullopt when den is 0.
std::optional<double> percent(std::size_t num, std::size_t den);

/// 2PR / (P + R) rounded, 0 when P + R is 0, nullopt if either is absent.
std::optional<double> f1_from(std::optional<double> p, std::optional<double> r);

/// (R_dir - R_ind) / R_dir * 100 rounded; nullopt when R_dir is absent or 0.
std::optional<double> delta_from(std::optional<double> r_dir, std::optional<double> r_ind);

/// Percentages with two decimals. Derived rates (F1, delta) are computed from
/// the rounded inputs. Buckets with no cells are absent.
struct MetricReport {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::optional<double> recall_direct;
  std::optional<double> recall_indirect;
  std::optional<double> delta;
  std::map<model::Category, double> cssr;
  std::map<model::SubCapability, double> scssr;
};

MetricReport compute_metrics(const ScoreCounts& counts);

/// {"precision", "recall", "f1", "recall_direct", "recall_indirect", "delta",
///  "cssr": {"TA": x}, "scssr": {"unit_transformation": x}}; absent values are null.
nlohmann::json to_json(const MetricReport& m);

}  // namespace tabdoc::eval
