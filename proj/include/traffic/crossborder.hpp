#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "traffic/harmonize.hpp"
#include "traffic/model.hpp"
#include "traffic/quality.hpp"

namespace traffic {

struct DirectionalSeries {
  HarmonizedSeries dir1;
  HarmonizedSeries dir2;
};

// Harmonized series per travel direction for one station, without direction
// combination. Throws when the station lacks Dir1 or Dir2 records (Both
// records do not count toward either direction).
DirectionalSeries directional_series(const Dataset& dataset, std::string_view station_id,
                                     VehicleClass vehicle_class, const WeekSelection& selection);

// 7x24 day-of-week by hour grid for one month. Monday..Friday columns carry
// the month's averaged weekday profile, Saturday and Sunday their own.
struct HourlyMatrix {
  std::string station_id;
  DirectionMode direction_mode = DirectionMode::TwoWayCombined;
  int month = 0;
  std::array<std::array<std::optional<double>, 24>, 7> values{};  // [iso weekday - 1][hour]

  const std::optional<double>& at(int day_of_week, int hour) const {
    return values[static_cast<std::size_t>(day_of_week - 1)][static_cast<std::size_t>(hour)];
  }
};

HourlyMatrix hourly_matrix(const HarmonizedSeries& series, int month);

struct PeakCell {
  int day_of_week = 0;  // 1 = Monday .. 7 = Sunday
  int hour = 0;
  double value = 0;
};

// Argmax over present cells, ties to the smallest (day, hour). Throws when
// every cell is missing.
PeakCell peak_cell(const HourlyMatrix& matrix);

// Bounded signed split of flow between the two directions:
// 100 * (out - in) / (out + in), in [-100, 100]. Positive = net outbound
// flow; missing when either side is missing or the total is zero.
std::optional<double> direction_balance(std::optional<double> outbound,
                                        std::optional<double> inbound);

using MonthlyFeatures = std::array<RushHourFeatures, 12>;

MonthlyFeatures monthly_rush(const HarmonizedSeries& series, DayType day_type,
                             const HourWindow& morning = kMorningRush,
                             const HourWindow& evening = kEveningRush);

struct BalanceCell {
  std::optional<double> base;    // balance in the base year
  std::optional<double> other;   // balance in the comparison year
  std::optional<double> change;  // other - base
};

struct BalanceTable {
  std::string station_id;
  DayType day_type = DayType::Weekday;
  std::array<BalanceCell, 12> morning{};
  std::array<BalanceCell, 12> evening{};
};

// Per month and rush window: direction balance in each year and its change
// between them. The caller decides which direction is outbound.
BalanceTable direction_balance_change(std::string station_id, DayType day_type,
                                      const MonthlyFeatures& outbound_base,
                                      const MonthlyFeatures& inbound_base,
                                      const MonthlyFeatures& outbound_other,
                                      const MonthlyFeatures& inbound_other);

std::string matrix_to_csv(const HourlyMatrix& matrix);  // day,hour,value
// month,day_type,window,balance_base,balance_other,change
std::string balance_to_csv(const BalanceTable& table);

}  // namespace traffic
