#pragma once

#include <span>
#include <string>
#include <string_view>

#include "traffic/crossborder.hpp"
#include "traffic/hotspot.hpp"
#include "traffic/quality.hpp"
#include "traffic/trends.hpp"

namespace traffic::charts {

// All charts are standalone SVG documents with deterministic formatting:
// identical inputs yield byte-identical markup.

// Year grid, one cell per date, colored by completeness; the selected week
// of each month is outlined when a selection is given.
std::string calendar_heatmap(const CompletenessCalendar& calendar,
                             const WeekSelection* selection, std::string_view title);

// Line per trend over the 12 months; missing months break the line.
std::string monthly_trend_lines(std::span<const MonthlyTrend> trends, std::string_view title);

// Bubble per station with coordinates: size = |asymmetry|, color = total.
std::string hotspot_bubbles(std::span<const StationSummary> summaries, std::string_view title);

// 7x24 day-of-week by hour heatmap.
std::string matrix_heatmap(const HourlyMatrix& matrix, std::string_view title);

// Paired monthly bars of the balance change for both rush windows.
std::string balance_bars(const BalanceTable& table, std::string_view title);

}  // namespace traffic::charts
