#pragma once

// Naive reference implementations used to cross-check the library. Each one
// recomputes its result from first principles with linear scans and explicit
// loops — no shared lookup structures or code paths with the production
// implementations. Integer-derived results must match exactly; pooled
// floating-point sums are compared with a relative tolerance by the callers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "traffic/crossborder.hpp"
#include "traffic/harmonize.hpp"
#include "traffic/model.hpp"
#include "traffic/quality.hpp"

namespace oracle {

inline bool rel_close(double a, double b, double rel = 1e-9) {
  const double scale = std::max({std::fabs(a), std::fabs(b), 1.0});
  return std::fabs(a - b) <= rel * scale;
}

inline bool opt_close(const std::optional<double>& a, const std::optional<double>& b,
                      double rel = 1e-9) {
  if (a.has_value() != b.has_value()) return false;
  return !a.has_value() || rel_close(*a, *b, rel);
}

// --------------------------------------------------------------------------
// window sums

inline std::optional<std::uint64_t> window_sum(const traffic::TrafficRecord& record,
                                               const traffic::HourWindow& window,
                                               traffic::MissingPolicy policy) {
  int missing = 0;
  std::uint64_t sum = 0;
  // Walk the window back to front; integer sums are order-insensitive.
  for (int h = window.end_hour - 1; h >= window.start_hour; --h) {
    const auto& cell = record.counts[static_cast<std::size_t>(h)];
    if (cell.has_value()) {
      sum += *cell;
    } else {
      ++missing;
    }
  }
  if (missing == window.length()) return std::nullopt;
  if (policy == traffic::MissingPolicy::Strict && missing > 0) return std::nullopt;
  return sum;
}

// --------------------------------------------------------------------------
// completeness calendar (returns empty map when no series are in scope)

inline std::map<traffic::Date, double> completeness(
    const traffic::Dataset& dataset, traffic::VehicleClass vehicle_class,
    const traffic::HourWindow& window, const std::optional<std::string>& station = std::nullopt) {
  std::vector<std::pair<std::string, traffic::Direction>> series;
  for (const auto& record : dataset.records) {
    if (record.vehicle_class != vehicle_class) continue;
    if (station && record.station_id != *station) continue;
    std::pair<std::string, traffic::Direction> key{record.station_id, record.direction};
    if (std::find(series.begin(), series.end(), key) == series.end()) series.push_back(key);
  }
  std::map<traffic::Date, double> cells;
  if (series.empty()) return cells;

  for (const traffic::Date& date : traffic::dates_of_year(dataset.year)) {
    long present = 0;
    for (const auto& record : dataset.records) {
      if (record.vehicle_class != vehicle_class) continue;
      if (station && record.station_id != *station) continue;
      if (!(record.date == date)) continue;
      for (int h = window.start_hour; h < window.end_hour; ++h) {
        if (record.counts[static_cast<std::size_t>(h)].has_value()) ++present;
      }
    }
    cells[date] =
        static_cast<double>(present) / (static_cast<double>(series.size()) * window.length());
  }
  return cells;
}

// --------------------------------------------------------------------------
// representative week: exhaustive argmax per month over Monday spans

struct WeekPick {
  traffic::Date monday;
  double score;
};

inline std::optional<WeekPick> best_week(const std::map<traffic::Date, double>& cells, int year,
                                         int month) {
  std::optional<WeekPick> best;
  for (const traffic::Date& date : traffic::dates_of_year(year)) {
    if (traffic::month_of(date) != month) continue;
    if (traffic::iso_weekday(date) != 1) continue;
    double sum = 0;
    int days = 0;
    for (int offset = 0; offset < 7; ++offset) {
      const auto it = cells.find(traffic::add_days(date, offset));
      if (it == cells.end()) continue;  // past the end of the year
      sum += it->second;
      ++days;
    }
    if (days == 0) continue;
    const double score = sum / days;
    if (score <= 0.0) continue;
    if (!best || score > best->score) best = WeekPick{date, score};
  }
  return best;
}

// --------------------------------------------------------------------------
// weekday averaging: per-day grouping with linear record lookup

inline const traffic::TrafficRecord* find_record(const traffic::Dataset& dataset,
                                                 const std::string& station,
                                                 const traffic::Date& date) {
  for (const auto& record : dataset.records) {
    if (record.station_id == station && record.date == date) return &record;
  }
  return nullptr;
}

inline std::vector<traffic::HarmonizedSeries> weekday_average(
    const traffic::Dataset& dataset, const traffic::WeekSelection& selection) {
  std::set<std::string> stations;
  for (const auto& record : dataset.records) stations.insert(record.station_id);

  std::vector<traffic::HarmonizedSeries> out;
  for (const std::string& station : stations) {
    traffic::HarmonizedSeries series;
    series.station_id = station;
    series.year = dataset.year;
    const traffic::TrafficRecord* any = nullptr;
    for (const auto& record : dataset.records) {
      if (record.station_id == station) {
        any = &record;
        break;
      }
    }
    series.vehicle_class = any->vehicle_class;
    series.direction_mode = any->direction == traffic::Direction::Both
                                ? traffic::DirectionMode::TwoWayCombined
                            : any->direction == traffic::Direction::Dir1
                                ? traffic::DirectionMode::Dir1Only
                                : traffic::DirectionMode::Dir2Only;

    for (int month = 1; month <= 12; ++month) {
      const auto& choice = selection.months[static_cast<std::size_t>(month - 1)];
      if (!choice) continue;

      // Collect the span's records per day type, then average each hour.
      constexpr traffic::DayType kTypes[] = {traffic::DayType::Weekday,
                                             traffic::DayType::Saturday,
                                             traffic::DayType::Sunday};
      for (traffic::DayType type : kTypes) {
        std::vector<const traffic::TrafficRecord*> group;
        for (int offset = 0; offset < 7; ++offset) {
          const traffic::Date date = traffic::add_days(choice->week_start, offset);
          if (traffic::day_type(date) != type) continue;
          if (const auto* record = find_record(dataset, station, date)) group.push_back(record);
        }
        if (group.empty()) continue;
        traffic::HourlyProfile profile{};
        for (std::size_t h = 0; h < 24; ++h) {
          double sum = 0;
          int n = 0;
          for (const auto* record : group) {
            if (record->counts[h].has_value()) {
              sum += static_cast<double>(*record->counts[h]);
              ++n;
            }
          }
          if (n > 0) profile[h] = sum / n;
        }
        series.cell(month, type) = profile;
      }
    }
    out.push_back(std::move(series));
  }
  return out;
}

// --------------------------------------------------------------------------
// profile sums and monthly totals (double loop, back-to-front months)

inline std::optional<double> profile_sum(const traffic::HourlyProfile& profile,
                                         const traffic::HourWindow& window,
                                         traffic::MissingPolicy policy) {
  int missing = 0;
  double sum = 0;
  for (int h = window.start_hour; h < window.end_hour; ++h) {
    const auto& cell = profile[static_cast<std::size_t>(h)];
    if (cell.has_value()) {
      sum += *cell;
    } else {
      ++missing;
    }
  }
  if (missing == window.length()) return std::nullopt;
  if (policy == traffic::MissingPolicy::Strict && missing > 0) return std::nullopt;
  return sum;
}

inline std::array<std::optional<double>, 12> monthly_totals(
    const std::vector<traffic::HarmonizedSeries>& series_set, traffic::DayType day_type,
    const traffic::HourWindow& window, traffic::MissingPolicy pooling) {
  std::array<std::optional<double>, 12> totals{};
  for (int month = 1; month <= 12; ++month) {
    std::vector<std::optional<double>> volumes;
    for (const auto& series : series_set) {
      const auto& cell = series.cell(month, day_type);
      if (!cell) {
        volumes.push_back(std::nullopt);
      } else {
        volumes.push_back(profile_sum(*cell, window, traffic::MissingPolicy::Strict));
      }
    }
    const long n_missing =
        std::count_if(volumes.begin(), volumes.end(),
                      [](const std::optional<double>& v) { return !v.has_value(); });
    if (n_missing == static_cast<long>(volumes.size())) continue;  // nothing present
    if (pooling == traffic::MissingPolicy::Strict && n_missing > 0) continue;
    double sum = 0;
    for (const auto& volume : volumes) {
      if (volume) sum += *volume;
    }
    totals[static_cast<std::size_t>(month - 1)] = sum;
  }
  return totals;
}

// --------------------------------------------------------------------------
// station summaries (keyed rows; warnings are not modelled)

struct SummaryRow {
  std::string station_id;
  double total = 0;
  double asymmetry = 0;
};

inline std::vector<SummaryRow> station_summaries(
    const std::vector<traffic::HarmonizedSeries>& series_set,
    const traffic::StationRegistry& registry, std::optional<int> month,
    traffic::DayType day_type, traffic::MissingPolicy policy, const traffic::HourWindow& morning,
    const traffic::HourWindow& evening) {
  std::vector<SummaryRow> rows;
  for (const auto& series : series_set) {
    if (registry.find(series.station_id) == nullptr) continue;

    std::vector<std::optional<double>> parts;  // morning/evening per in-scope month
    const int first = month.value_or(1);
    const int last = month.value_or(12);
    double morning_total = 0, evening_total = 0;
    for (int m = first; m <= last; ++m) {
      const auto& cell = series.cell(m, day_type);
      std::optional<double> mo, ev;
      if (cell) {
        mo = profile_sum(*cell, morning, traffic::MissingPolicy::Strict);
        ev = profile_sum(*cell, evening, traffic::MissingPolicy::Strict);
      }
      parts.push_back(mo);
      parts.push_back(ev);
      if (mo) morning_total += *mo;
      if (ev) evening_total += *ev;
    }
    const long n_present = std::count_if(
        parts.begin(), parts.end(), [](const std::optional<double>& v) { return v.has_value(); });
    if (n_present == 0) continue;
    if (policy == traffic::MissingPolicy::Strict &&
        n_present < static_cast<long>(parts.size())) {
      continue;
    }
    rows.push_back({series.station_id, morning_total + evening_total,
                    morning_total - evening_total});
  }
  std::sort(rows.begin(), rows.end(),
            [](const SummaryRow& a, const SummaryRow& b) { return a.station_id < b.station_id; });
  return rows;
}

// --------------------------------------------------------------------------
// hourly matrix (direct re-read of the series cells)

inline std::array<std::array<std::optional<double>, 24>, 7> hourly_matrix(
    const traffic::HarmonizedSeries& series, int month) {
  std::array<std::array<std::optional<double>, 24>, 7> grid{};
  for (int dow = 7; dow >= 1; --dow) {
    const traffic::DayType type = dow == 6   ? traffic::DayType::Saturday
                                  : dow == 7 ? traffic::DayType::Sunday
                                             : traffic::DayType::Weekday;
    const auto& cell = series.cell(month, type);
    if (!cell) continue;
    for (std::size_t h = 0; h < 24; ++h) grid[static_cast<std::size_t>(dow - 1)][h] = (*cell)[h];
  }
  return grid;
}

// --------------------------------------------------------------------------
// direction balance

inline std::optional<double> balance(std::optional<double> outbound,
                                     std::optional<double> inbound) {
  if (!outbound.has_value() || !inbound.has_value()) return std::nullopt;
  if (*outbound + *inbound == 0.0) return std::nullopt;
  return 100.0 * (*outbound - *inbound) / (*outbound + *inbound);
}

// Per month: {base balance, other balance, change} for one window's features.
struct BalanceRow {
  std::optional<double> base;
  std::optional<double> other;
  std::optional<double> change;
};

inline std::array<BalanceRow, 12> balance_rows(const traffic::MonthlyFeatures& out_base,
                                               const traffic::MonthlyFeatures& in_base,
                                               const traffic::MonthlyFeatures& out_other,
                                               const traffic::MonthlyFeatures& in_other,
                                               bool evening) {
  std::array<BalanceRow, 12> rows{};
  for (std::size_t m = 0; m < 12; ++m) {
    auto pick = [evening](const traffic::RushHourFeatures& f) {
      return evening ? f.evening : f.morning;
    };
    rows[m].base = balance(pick(out_base[m]), pick(in_base[m]));
    rows[m].other = balance(pick(out_other[m]), pick(in_other[m]));
    if (rows[m].base && rows[m].other) rows[m].change = *rows[m].other - *rows[m].base;
  }
  return rows;
}

// --------------------------------------------------------------------------
// direction recombination: hourwise Dir1+Dir2 from the raw records

inline std::optional<std::uint32_t> recombined_hour(const traffic::Dataset& dataset,
                                                    const std::string& station,
                                                    const traffic::Date& date,
                                                    traffic::VehicleClass vehicle_class,
                                                    int hour) {
  std::optional<std::uint32_t> d1, d2;
  for (const auto& record : dataset.records) {
    if (record.station_id != station || !(record.date == date) ||
        record.vehicle_class != vehicle_class) {
      continue;
    }
    if (record.direction == traffic::Direction::Dir1) {
      d1 = record.counts[static_cast<std::size_t>(hour)];
    }
    if (record.direction == traffic::Direction::Dir2) {
      d2 = record.counts[static_cast<std::size_t>(hour)];
    }
  }
  if (!d1.has_value() || !d2.has_value()) return std::nullopt;
  return *d1 + *d2;
}

}  // namespace oracle
