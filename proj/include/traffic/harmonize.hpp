#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "traffic/model.hpp"
#include "traffic/quality.hpp"

namespace traffic {

enum class DirectionMode : unsigned char { TwoWayCombined, Dir1Only, Dir2Only };

std::string_view to_string(DirectionMode m);

// Averaged hourly volumes; an hour is missing when no day contributed.
using HourlyProfile = std::array<std::optional<double>, 24>;

std::optional<double> profile_window_sum(const HourlyProfile& profile, const HourWindow& window,
                                         MissingPolicy policy);

// Per (month, day type) averaged 24-hour profile for one station, built from
// the days of the month's selected week. A cell exists only if at least one
// day of that type inside the selected week had a record.
struct HarmonizedSeries {
  std::string station_id;
  int year = 0;
  VehicleClass vehicle_class = VehicleClass::Car;
  DirectionMode direction_mode = DirectionMode::TwoWayCombined;
  std::array<std::array<std::optional<HourlyProfile>, kDayTypeCount>, 12> cells{};

  const std::optional<HourlyProfile>& cell(int month, DayType type) const {
    return cells[static_cast<std::size_t>(month - 1)][static_cast<std::size_t>(type)];
  }
  std::optional<HourlyProfile>& cell(int month, DayType type) {
    return cells[static_cast<std::size_t>(month - 1)][static_cast<std::size_t>(type)];
  }
};

struct RushHourFeatures {
  std::optional<double> morning;  // default window [7,10)
  std::optional<double> evening;  // default window [16,19)
};

// Pure subset: records matching the class (and the station set, if given).
Dataset filter_dataset(const Dataset& dataset, VehicleClass vehicle_class,
                       const std::optional<std::set<std::string>>& stations = std::nullopt);

struct CombineMismatch {
  std::string station_id;
  Date date{};
  VehicleClass vehicle_class = VehicleClass::Car;
  int mismatched_hours = 0;  // hours where the Both record != Dir1 + Dir2
};

struct CombineResult {
  Dataset dataset;  // two-way records only
  std::vector<CombineMismatch> mismatches;
};

// Per (station, date, class): keep the sensor's own Both record when present,
// otherwise synthesize one from Dir1 + Dir2 (hourwise, an hour is missing if
// either side is missing). When a Both record coexists with a Dir1/Dir2 pair
// that disagrees, the Both record wins and the mismatch is reported.
CombineResult combine_directions(const Dataset& dataset);

// Averages each hour over the days of each day type inside the month's
// selected week, present days only. All records must share one direction and
// one vehicle class. Returns one series per station, ordered by station_id.
std::vector<HarmonizedSeries> weekday_average(const Dataset& dataset,
                                              const WeekSelection& selection);

RushHourFeatures rush_features(const HarmonizedSeries& series, int month, DayType day_type,
                               const HourWindow& morning = kMorningRush,
                               const HourWindow& evening = kEveningRush);

// station_id,month,day_type,h00..h23 — one row per existing cell
std::string harmonized_to_csv(std::span<const HarmonizedSeries> series_set);

}  // namespace traffic
