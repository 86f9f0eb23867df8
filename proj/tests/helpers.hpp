#pragma once

// Shared builders for the test suites. Everything here is deliberately
// simple: fixed fills, explicit hour overrides, tiny datasets.

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "traffic/model.hpp"
#include "traffic/quality.hpp"

namespace testutil {

inline traffic::TrafficRecord make_record(
    std::string station, traffic::Date date,
    traffic::Direction direction = traffic::Direction::Dir1,
    traffic::VehicleClass vehicle_class = traffic::VehicleClass::Car,
    std::optional<std::uint32_t> fill = 0, std::string route = "R001") {
  traffic::TrafficRecord record;
  record.station_id = std::move(station);
  record.route_id = std::move(route);
  record.direction = direction;
  record.vehicle_class = vehicle_class;
  record.date = date;
  for (auto& cell : record.counts) cell = fill;
  return record;
}

inline void set_hours(
    traffic::TrafficRecord& record,
    std::initializer_list<std::pair<int, std::optional<std::uint32_t>>> hours) {
  for (const auto& [hour, value] : hours) {
    record.counts[static_cast<std::size_t>(hour)] = value;
  }
}

inline traffic::Dataset make_dataset(int year, std::vector<traffic::TrafficRecord> records) {
  traffic::Dataset dataset;
  dataset.year = year;
  dataset.records = std::move(records);
  return dataset;
}

inline traffic::Date first_monday(int year, int month) {
  traffic::Date date = traffic::make_date(year, static_cast<unsigned>(month), 1);
  while (traffic::iso_weekday(date) != 1) date = traffic::add_days(date, 1);
  return date;
}

// A selection with explicit Monday picks; unlisted months stay empty.
inline traffic::WeekSelection make_selection(
    int year, std::initializer_list<std::pair<int, traffic::Date>> picks) {
  traffic::WeekSelection selection;
  selection.year = year;
  for (const auto& [month, monday] : picks) {
    selection.months[static_cast<std::size_t>(month - 1)] = traffic::WeekChoice{monday, 1.0};
  }
  return selection;
}

// One record per day over [start, start+n_days), constant fill.
inline std::vector<traffic::TrafficRecord> daily_records(
    std::string station, traffic::Date start, int n_days,
    traffic::Direction direction = traffic::Direction::Dir1,
    std::optional<std::uint32_t> fill = 0) {
  std::vector<traffic::TrafficRecord> records;
  records.reserve(static_cast<std::size_t>(n_days));
  for (int i = 0; i < n_days; ++i) {
    records.push_back(make_record(station, traffic::add_days(start, i), direction,
                                  traffic::VehicleClass::Car, fill));
  }
  return records;
}

inline traffic::StationMeta make_station(std::string id, double lat, double lon,
                                         std::string route = "R001") {
  traffic::StationMeta meta;
  meta.station_id = std::move(id);
  meta.name = "name " + meta.station_id;
  meta.route_id = std::move(route);
  meta.latitude = lat;
  meta.longitude = lon;
  return meta;
}

}  // namespace testutil
