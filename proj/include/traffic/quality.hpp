#pragma once

#include <map>
#include <optional>
#include <string>

#include "traffic/model.hpp"

namespace traffic {

struct CalendarScope {
  std::optional<std::string> station_id;  // empty = all stations
};

// Per-date fraction of expected hour cells actually present. A
// station-direction series counts toward the expectation on every date of
// the year once it appears anywhere in the dataset for the class.
struct CompletenessCalendar {
  CalendarScope scope;
  VehicleClass vehicle_class = VehicleClass::Car;
  HourWindow window;
  int year = 0;
  std::map<Date, double> cells;   // every date of the year, each in [0, 1]
  bool zero_expectation = false;  // class (or station) absent from the dataset
};

CompletenessCalendar completeness_calendar(const Dataset& dataset, VehicleClass vehicle_class,
                                           const HourWindow& window,
                                           const CalendarScope& scope = {});

struct WeekChoice {
  Date week_start;  // a Monday inside the month
  double score;     // mean daily completeness over the span's in-year days
};

// Per month, the Monday-anchored 7-day span with the best mean daily
// completeness. Candidates are the Mondays falling inside the month; the
// span may spill into the next month. Days outside the calendar year are
// excluded from the mean. A month whose candidates all score zero has no
// selection.
struct WeekSelection {
  int year = 0;
  std::array<std::optional<WeekChoice>, 12> months{};
};

WeekSelection select_weeks(const CompletenessCalendar& calendar, int year);

std::string calendar_to_csv(const CompletenessCalendar& calendar);  // date,fraction
std::string selection_to_csv(const WeekSelection& selection);       // month,week_start,score

}  // namespace traffic
