#pragma once

#include <optional>
#include <span>
#include <string>

#include "traffic/harmonize.hpp"
#include "traffic/model.hpp"

namespace traffic {

struct MonthlyTrend {
  std::string label;
  int year = 0;
  DayType day_type = DayType::Weekday;
  HourWindow window;
  std::array<std::optional<double>, 12> values{};  // index = month - 1
};

// Per month, window volume summed across stations. Each station's volume is
// the strict window sum of its (month, day type) profile; the policy governs
// pooling across stations: Strict makes the month missing when any station
// is missing, Lenient sums the present stations.
MonthlyTrend monthly_totals(std::span<const HarmonizedSeries> series_set, DayType day_type,
                            const HourWindow& window, MissingPolicy policy);

enum class DeltaStatus : unsigned char { Present, NoData, UndefinedBaseline };

struct TrendDelta {
  std::array<std::optional<double>, 12> change{};  // signed percent, other vs base
  std::array<DeltaStatus, 12> status{};
};

// 100 * (other - base) / base per month. Missing when either value is
// missing (NoData) or the baseline is zero (UndefinedBaseline, never inf).
TrendDelta yoy_change(const MonthlyTrend& base, const MonthlyTrend& other);

// Each present month as a percentage of the sum over present months; the
// output sums to 100. Returns nothing when no month is present or the sum
// is zero.
std::optional<MonthlyTrend> percent_of_year(const MonthlyTrend& trend);

std::string trend_to_csv(const MonthlyTrend& trend);  // month,value
std::string delta_to_csv(const TrendDelta& delta);    // month,percent_change

}  // namespace traffic
