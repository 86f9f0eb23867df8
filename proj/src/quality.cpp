#include "traffic/quality.hpp"

#include <set>
#include <stdexcept>
#include <utility>

#include "traffic/csv.hpp"

namespace traffic {

CompletenessCalendar completeness_calendar(const Dataset& dataset, VehicleClass vehicle_class,
                                           const HourWindow& window, const CalendarScope& scope) {
  if (!window.valid()) throw std::invalid_argument("completeness_calendar: invalid hour window");

  CompletenessCalendar calendar;
  calendar.scope = scope;
  calendar.vehicle_class = vehicle_class;
  calendar.window = window;
  calendar.year = dataset.year;

  auto in_scope = [&](const TrafficRecord& r) {
    if (r.vehicle_class != vehicle_class) return false;
    return !scope.station_id || r.station_id == *scope.station_id;
  };

  std::set<std::pair<std::string, Direction>> series;
  for (const auto& record : dataset.records) {
    if (in_scope(record)) series.emplace(record.station_id, record.direction);
  }
  if (series.empty()) {
    calendar.zero_expectation = true;
    return calendar;
  }

  std::map<Date, std::size_t> present;
  for (const auto& record : dataset.records) {
    if (!in_scope(record)) continue;
    std::size_t n = 0;
    for (int h = window.start_hour; h < window.end_hour; ++h) {
      if (record.counts[static_cast<std::size_t>(h)].has_value()) ++n;
    }
    present[record.date] += n;
  }

  const double expected = static_cast<double>(series.size()) * window.length();
  for (const Date& date : dates_of_year(dataset.year)) {
    auto it = present.find(date);
    double n = it == present.end() ? 0.0 : static_cast<double>(it->second);
    calendar.cells.emplace(date, n / expected);
  }
  return calendar;
}

WeekSelection select_weeks(const CompletenessCalendar& calendar, int year) {
  if (calendar.year != year) {
    throw std::invalid_argument("select_weeks: calendar year does not match requested year");
  }

  WeekSelection selection;
  selection.year = year;
  if (calendar.zero_expectation) return selection;

  for (const Date& date : dates_of_year(year)) {
    if (iso_weekday(date) != 1) continue;  // candidate spans start on a Monday
    double sum = 0;
    int days = 0;
    for (int offset = 0; offset < 7; ++offset) {
      auto it = calendar.cells.find(add_days(date, offset));
      if (it == calendar.cells.end()) continue;  // spilled past the year end
      sum += it->second;
      ++days;
    }
    if (days == 0) continue;
    double score = sum / days;
    if (score <= 0.0) continue;  // no data in the span

    auto& chosen = selection.months[static_cast<std::size_t>(month_of(date) - 1)];
    if (!chosen || score > chosen->score) chosen = WeekChoice{date, score};
  }
  return selection;
}

std::string calendar_to_csv(const CompletenessCalendar& calendar) {
  std::string out = "date,fraction\n";
  for (const auto& [date, fraction] : calendar.cells) {
    out += format_date(date);
    out += ',';
    csv::append_double(out, fraction);
    out += '\n';
  }
  return out;
}

std::string selection_to_csv(const WeekSelection& selection) {
  std::string out = "month,week_start,score\n";
  for (int month = 1; month <= 12; ++month) {
    out += std::to_string(month);
    out += ',';
    const auto& choice = selection.months[static_cast<std::size_t>(month - 1)];
    if (choice) {
      out += format_date(choice->week_start);
      out += ',';
      csv::append_double(out, choice->score);
    } else {
      out += ',';
    }
    out += '\n';
  }
  return out;
}

}  // namespace traffic
