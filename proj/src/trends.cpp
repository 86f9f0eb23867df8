#include "traffic/trends.hpp"

#include <stdexcept>

#include "traffic/csv.hpp"

namespace traffic {

MonthlyTrend monthly_totals(std::span<const HarmonizedSeries> series_set, DayType day_type,
                            const HourWindow& window, MissingPolicy policy) {
  MonthlyTrend trend;
  trend.day_type = day_type;
  trend.window = window;
  if (series_set.empty()) return trend;

  trend.year = series_set.front().year;
  trend.label = std::to_string(trend.year);
  for (const auto& series : series_set) {
    if (series.year != trend.year || series.vehicle_class != series_set.front().vehicle_class) {
      throw std::invalid_argument("monthly_totals: series must share year and vehicle class");
    }
  }

  for (int month = 1; month <= 12; ++month) {
    double sum = 0;
    bool any_present = false;
    bool any_missing = false;
    for (const auto& series : series_set) {
      const auto& cell = series.cell(month, day_type);
      std::optional<double> volume;
      if (cell) volume = profile_window_sum(*cell, window, MissingPolicy::Strict);
      if (volume) {
        sum += *volume;
        any_present = true;
      } else {
        any_missing = true;
      }
    }
    if (any_present && !(policy == MissingPolicy::Strict && any_missing)) {
      trend.values[static_cast<std::size_t>(month - 1)] = sum;
    }
  }
  return trend;
}

TrendDelta yoy_change(const MonthlyTrend& base, const MonthlyTrend& other) {
  if (base.day_type != other.day_type || base.window != other.window) {
    throw std::invalid_argument("yoy_change: trends must share day type and window");
  }
  TrendDelta delta;
  for (std::size_t m = 0; m < 12; ++m) {
    const auto& b = base.values[m];
    const auto& o = other.values[m];
    if (!b || !o) {
      delta.status[m] = DeltaStatus::NoData;
    } else if (*b == 0.0) {
      delta.status[m] = DeltaStatus::UndefinedBaseline;
    } else {
      delta.change[m] = 100.0 * (*o - *b) / *b;
      delta.status[m] = DeltaStatus::Present;
    }
  }
  return delta;
}

std::optional<MonthlyTrend> percent_of_year(const MonthlyTrend& trend) {
  double total = 0;
  bool any_present = false;
  for (const auto& value : trend.values) {
    if (value) {
      total += *value;
      any_present = true;
    }
  }
  if (!any_present || total == 0.0) return std::nullopt;

  MonthlyTrend out = trend;
  for (auto& value : out.values) {
    if (value) value = 100.0 * *value / total;
  }
  return out;
}

std::string trend_to_csv(const MonthlyTrend& trend) {
  std::string out = "month,value\n";
  for (int month = 1; month <= 12; ++month) {
    out += std::to_string(month);
    out += ',';
    const auto& value = trend.values[static_cast<std::size_t>(month - 1)];
    if (value) csv::append_double(out, *value);
    out += '\n';
  }
  return out;
}

std::string delta_to_csv(const TrendDelta& delta) {
  std::string out = "month,percent_change\n";
  for (int month = 1; month <= 12; ++month) {
    out += std::to_string(month);
    out += ',';
    const auto& value = delta.change[static_cast<std::size_t>(month - 1)];
    if (value) csv::append_double(out, *value);
    out += '\n';
  }
  return out;
}

}  // namespace traffic
