#include "traffic/harmonize.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

#include "traffic/csv.hpp"

namespace traffic {

std::string_view to_string(DirectionMode m) {
  switch (m) {
    case DirectionMode::TwoWayCombined: return "both";
    case DirectionMode::Dir1Only: return "dir1";
    case DirectionMode::Dir2Only: return "dir2";
  }
  return "?";
}

std::optional<double> profile_window_sum(const HourlyProfile& profile, const HourWindow& window,
                                         MissingPolicy policy) {
  if (!window.valid()) throw std::invalid_argument("profile_window_sum: invalid hour window");
  double sum = 0;
  bool any_present = false;
  for (int h = window.start_hour; h < window.end_hour; ++h) {
    const auto& cell = profile[static_cast<std::size_t>(h)];
    if (cell.has_value()) {
      sum += *cell;
      any_present = true;
    } else if (policy == MissingPolicy::Strict) {
      return std::nullopt;
    }
  }
  if (!any_present) return std::nullopt;
  return sum;
}

Dataset filter_dataset(const Dataset& dataset, VehicleClass vehicle_class,
                       const std::optional<std::set<std::string>>& stations) {
  Dataset out;
  out.year = dataset.year;
  out.stations = dataset.stations;
  for (const auto& record : dataset.records) {
    if (record.vehicle_class != vehicle_class) continue;
    if (stations && !stations->contains(record.station_id)) continue;
    out.records.push_back(record);
  }
  return out;
}

CombineResult combine_directions(const Dataset& dataset) {
  struct Group {
    const TrafficRecord* dir1 = nullptr;
    const TrafficRecord* dir2 = nullptr;
    const TrafficRecord* both = nullptr;
  };
  std::map<std::tuple<std::string_view, Date, VehicleClass>, Group> groups;
  for (const auto& record : dataset.records) {
    auto& group = groups[{record.station_id, record.date, record.vehicle_class}];
    switch (record.direction) {
      case Direction::Dir1: group.dir1 = &record; break;
      case Direction::Dir2: group.dir2 = &record; break;
      case Direction::Both: group.both = &record; break;
    }
  }

  CombineResult result;
  result.dataset.year = dataset.year;
  result.dataset.stations = dataset.stations;
  for (const auto& [key, group] : groups) {
    if (group.both != nullptr) {
      result.dataset.records.push_back(*group.both);
      if (group.dir1 != nullptr && group.dir2 != nullptr) {
        int mismatched = 0;
        for (std::size_t h = 0; h < 24; ++h) {
          const auto& b = group.both->counts[h];
          const auto& d1 = group.dir1->counts[h];
          const auto& d2 = group.dir2->counts[h];
          if (b && d1 && d2 && *b != *d1 + *d2) ++mismatched;
        }
        if (mismatched > 0) {
          result.mismatches.push_back({group.both->station_id, group.both->date,
                                       group.both->vehicle_class, mismatched});
        }
      }
      continue;
    }
    if (group.dir1 == nullptr || group.dir2 == nullptr) continue;

    TrafficRecord combined;
    combined.station_id = group.dir1->station_id;
    combined.route_id = group.dir1->route_id;
    combined.direction = Direction::Both;
    combined.vehicle_class = group.dir1->vehicle_class;
    combined.date = group.dir1->date;
    for (std::size_t h = 0; h < 24; ++h) {
      const auto& d1 = group.dir1->counts[h];
      const auto& d2 = group.dir2->counts[h];
      if (d1 && d2) combined.counts[h] = *d1 + *d2;
    }
    result.dataset.records.push_back(std::move(combined));
  }
  return result;
}

namespace {

DirectionMode mode_of(Direction direction) {
  switch (direction) {
    case Direction::Dir1: return DirectionMode::Dir1Only;
    case Direction::Dir2: return DirectionMode::Dir2Only;
    case Direction::Both: return DirectionMode::TwoWayCombined;
  }
  return DirectionMode::TwoWayCombined;
}

}  // namespace

std::vector<HarmonizedSeries> weekday_average(const Dataset& dataset,
                                              const WeekSelection& selection) {
  if (selection.year != dataset.year) {
    throw std::invalid_argument("weekday_average: selection year does not match dataset year");
  }
  if (dataset.records.empty()) return {};
  for (const auto& record : dataset.records) {
    if (record.direction != dataset.records.front().direction ||
        record.vehicle_class != dataset.records.front().vehicle_class) {
      throw std::invalid_argument(
          "weekday_average: records must share one direction and one vehicle class");
    }
  }

  // (station, date) -> record; keys are unique for a fixed direction/class
  std::map<std::pair<std::string_view, Date>, const TrafficRecord*> by_day;
  std::map<std::string_view, const TrafficRecord*> stations;
  for (const auto& record : dataset.records) {
    by_day[{record.station_id, record.date}] = &record;
    stations.emplace(record.station_id, &record);
  }

  std::vector<HarmonizedSeries> out;
  out.reserve(stations.size());
  for (const auto& [station_id, sample] : stations) {
    HarmonizedSeries series;
    series.station_id = std::string{station_id};
    series.year = dataset.year;
    series.vehicle_class = sample->vehicle_class;
    series.direction_mode = mode_of(sample->direction);

    for (int month = 1; month <= 12; ++month) {
      const auto& choice = selection.months[static_cast<std::size_t>(month - 1)];
      if (!choice) continue;

      std::array<std::array<double, 24>, kDayTypeCount> sums{};
      std::array<std::array<int, 24>, kDayTypeCount> n_days{};
      std::array<bool, kDayTypeCount> has_record{};
      for (int offset = 0; offset < 7; ++offset) {
        Date date = add_days(choice->week_start, offset);
        auto it = by_day.find({station_id, date});
        if (it == by_day.end()) continue;
        auto type = static_cast<std::size_t>(day_type(date));
        has_record[type] = true;
        for (std::size_t h = 0; h < 24; ++h) {
          const auto& cell = it->second->counts[h];
          if (cell.has_value()) {
            sums[type][h] += static_cast<double>(*cell);
            ++n_days[type][h];
          }
        }
      }
      for (std::size_t type = 0; type < kDayTypeCount; ++type) {
        if (!has_record[type]) continue;
        HourlyProfile profile{};
        for (std::size_t h = 0; h < 24; ++h) {
          if (n_days[type][h] > 0) profile[h] = sums[type][h] / n_days[type][h];
        }
        series.cells[static_cast<std::size_t>(month - 1)][type] = profile;
      }
    }
    out.push_back(std::move(series));
  }
  return out;
}

RushHourFeatures rush_features(const HarmonizedSeries& series, int month, DayType day_type,
                               const HourWindow& morning, const HourWindow& evening) {
  RushHourFeatures features;
  const auto& cell = series.cell(month, day_type);
  if (!cell) return features;
  features.morning = profile_window_sum(*cell, morning, MissingPolicy::Strict);
  features.evening = profile_window_sum(*cell, evening, MissingPolicy::Strict);
  return features;
}

std::string harmonized_to_csv(std::span<const HarmonizedSeries> series_set) {
  std::string out = "station_id,month,day_type,h00,h01,h02,h03,h04,h05,h06,h07,h08,h09,h10,h11,"
                    "h12,h13,h14,h15,h16,h17,h18,h19,h20,h21,h22,h23\n";
  constexpr DayType kTypes[] = {DayType::Weekday, DayType::Saturday, DayType::Sunday};
  for (const auto& series : series_set) {
    for (int month = 1; month <= 12; ++month) {
      for (DayType type : kTypes) {
        const auto& cell = series.cell(month, type);
        if (!cell) continue;
        out += csv::escape(series.station_id);
        out += ',';
        out += std::to_string(month);
        out += ',';
        out += to_string(type);
        for (const auto& value : *cell) {
          out += ',';
          if (value.has_value()) csv::append_double(out, *value);
        }
        out += '\n';
      }
    }
  }
  return out;
}

}  // namespace traffic
