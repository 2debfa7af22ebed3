#pragma once

// Text renderings of threshold tables and indicator rows.

#include <optional>
#include <string>
#include <vector>

#include "hicite/engine.hpp"
#include "hicite/model.hpp"

namespace hicite {

enum class OutputFormat { Csv, Markdown, Lines };

/// ratio * 100 rounded half-up to `decimals` places, with a trailing '%'.
std::string format_percent(double ratio, int decimals);

/// Shortest decimal text that reads back as the same double.
std::string format_real(double value);

/// format_real with ',' grouping in the integer part: 1309 -> "1,309".
std::string format_grouped(double value);

struct IndicatorRow {
  std::string period;
  std::optional<StratumKey> cell;
  GroupIndicator indicator;
};

/// Period label for a year range: "2012", "1990-2010", or "all" when unbounded.
std::string period_label(const YearRange& years, bool bounded);

std::string render_indicators(const std::vector<IndicatorRow>& rows, OutputFormat format, int decimals,
                              bool per_cell);

std::string render_thresholds(const ThresholdTable& table, OutputFormat format);

}  // namespace hicite
