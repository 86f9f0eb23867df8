#include "traffic/crossborder.hpp"

#include <stdexcept>

#include "traffic/csv.hpp"

namespace traffic {

DirectionalSeries directional_series(const Dataset& dataset, std::string_view station_id,
                                     VehicleClass vehicle_class, const WeekSelection& selection) {
  Dataset dir1, dir2;
  dir1.year = dir2.year = dataset.year;
  dir1.stations = dir2.stations = dataset.stations;
  for (const auto& record : dataset.records) {
    if (record.station_id != station_id || record.vehicle_class != vehicle_class) continue;
    if (record.direction == Direction::Dir1) dir1.records.push_back(record);
    if (record.direction == Direction::Dir2) dir2.records.push_back(record);
  }
  if (dir1.records.empty()) {
    throw std::runtime_error("station " + std::string{station_id} +
                             " has no direction-1 records");
  }
  if (dir2.records.empty()) {
    throw std::runtime_error("station " + std::string{station_id} +
                             " has no direction-2 records");
  }

  auto series1 = weekday_average(dir1, selection);
  auto series2 = weekday_average(dir2, selection);
  return {std::move(series1.front()), std::move(series2.front())};
}

HourlyMatrix hourly_matrix(const HarmonizedSeries& series, int month) {
  if (month < 1 || month > 12) throw std::invalid_argument("hourly_matrix: month out of range");

  HourlyMatrix matrix;
  matrix.station_id = series.station_id;
  matrix.direction_mode = series.direction_mode;
  matrix.month = month;

  auto fill = [&](int day_of_week, DayType type) {
    const auto& cell = series.cell(month, type);
    if (!cell) return;
    matrix.values[static_cast<std::size_t>(day_of_week - 1)] = *cell;
  };
  for (int dow = 1; dow <= 5; ++dow) fill(dow, DayType::Weekday);
  fill(6, DayType::Saturday);
  fill(7, DayType::Sunday);
  return matrix;
}

PeakCell peak_cell(const HourlyMatrix& matrix) {
  std::optional<PeakCell> best;
  for (int dow = 1; dow <= 7; ++dow) {
    for (int hour = 0; hour < 24; ++hour) {
      const auto& value = matrix.at(dow, hour);
      if (!value) continue;
      if (!best || *value > best->value) best = PeakCell{dow, hour, *value};
    }
  }
  if (!best) throw std::runtime_error("peak_cell: matrix has no present cells");
  return *best;
}

std::optional<double> direction_balance(std::optional<double> outbound,
                                        std::optional<double> inbound) {
  if (!outbound || !inbound) return std::nullopt;
  double total = *outbound + *inbound;
  if (total == 0.0) return std::nullopt;
  return 100.0 * (*outbound - *inbound) / total;
}

MonthlyFeatures monthly_rush(const HarmonizedSeries& series, DayType day_type,
                             const HourWindow& morning, const HourWindow& evening) {
  MonthlyFeatures features{};
  for (int month = 1; month <= 12; ++month) {
    features[static_cast<std::size_t>(month - 1)] =
        rush_features(series, month, day_type, morning, evening);
  }
  return features;
}

BalanceTable direction_balance_change(std::string station_id, DayType day_type,
                                      const MonthlyFeatures& outbound_base,
                                      const MonthlyFeatures& inbound_base,
                                      const MonthlyFeatures& outbound_other,
                                      const MonthlyFeatures& inbound_other) {
  BalanceTable table;
  table.station_id = std::move(station_id);
  table.day_type = day_type;
  for (std::size_t m = 0; m < 12; ++m) {
    auto fill = [](BalanceCell& cell, std::optional<double> out_base,
                   std::optional<double> in_base, std::optional<double> out_other,
                   std::optional<double> in_other) {
      cell.base = direction_balance(out_base, in_base);
      cell.other = direction_balance(out_other, in_other);
      if (cell.base && cell.other) cell.change = *cell.other - *cell.base;
    };
    fill(table.morning[m], outbound_base[m].morning, inbound_base[m].morning,
         outbound_other[m].morning, inbound_other[m].morning);
    fill(table.evening[m], outbound_base[m].evening, inbound_base[m].evening,
         outbound_other[m].evening, inbound_other[m].evening);
  }
  return table;
}

std::string matrix_to_csv(const HourlyMatrix& matrix) {
  std::string out = "day,hour,value\n";
  for (int dow = 1; dow <= 7; ++dow) {
    for (int hour = 0; hour < 24; ++hour) {
      out += std::to_string(dow);
      out += ',';
      out += std::to_string(hour);
      out += ',';
      const auto& value = matrix.at(dow, hour);
      if (value) csv::append_double(out, *value);
      out += '\n';
    }
  }
  return out;
}

std::string balance_to_csv(const BalanceTable& table) {
  std::string out = "month,day_type,window,balance_base,balance_other,change\n";
  auto append = [&](int month, std::string_view window, const BalanceCell& cell) {
    out += std::to_string(month);
    out += ',';
    out += to_string(table.day_type);
    out += ',';
    out += window;
    out += ',';
    if (cell.base) csv::append_double(out, *cell.base);
    out += ',';
    if (cell.other) csv::append_double(out, *cell.other);
    out += ',';
    if (cell.change) csv::append_double(out, *cell.change);
    out += '\n';
  };
  for (int month = 1; month <= 12; ++month) {
    append(month, "morning", table.morning[static_cast<std::size_t>(month - 1)]);
    append(month, "evening", table.evening[static_cast<std::size_t>(month - 1)]);
  }
  return out;
}

}  // namespace traffic
