#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eigenemo/eval.hpp"
#include "eigenemo/experiment.hpp"

namespace eigenemo::report {

using CellReports = std::vector<std::pair<std::string, eval::EvalReport>>;

std::string to_json(const CellReports& reports, const eval::ExperimentConfig& cfg);
CellReports from_json(std::string_view text);

/// Accuracy as a percentage with two decimals, e.g. 0.92401 -> "92.40".
std::string percent(double fraction);

/// Aligned plain-text table: one row per method, a WA/UA column pair per EP type.
std::string render_table(const CellReports& reports);

/// One block of rows per cell: cell,true_label,<count per predicted label>.
std::string render_confusion_csv(const CellReports& reports);

}  // namespace eigenemo::report
