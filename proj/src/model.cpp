#include "traffic/model.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <stdexcept>
#include <tuple>

namespace traffic {

namespace {

std::chrono::sys_days to_sys_days(const Date& date) { return std::chrono::sys_days{date}; }

bool parse_uint(std::string_view s, unsigned& out) {
  if (s.empty()) return false;
  unsigned value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return false;
  out = value;
  return true;
}

}  // namespace

Date make_date(int year, unsigned month, unsigned day) {
  return Date{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
}

std::optional<Date> parse_date(std::string_view iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return std::nullopt;
  unsigned y = 0, m = 0, d = 0;
  if (!parse_uint(iso.substr(0, 4), y) || !parse_uint(iso.substr(5, 2), m) ||
      !parse_uint(iso.substr(8, 2), d)) {
    return std::nullopt;
  }
  Date date = make_date(static_cast<int>(y), m, d);
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year_of(date),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

Date add_days(const Date& date, int n) {
  return Date{to_sys_days(date) + std::chrono::days{n}};
}

int year_of(const Date& date) { return static_cast<int>(date.year()); }
int month_of(const Date& date) { return static_cast<int>(static_cast<unsigned>(date.month())); }
int day_of(const Date& date) { return static_cast<int>(static_cast<unsigned>(date.day())); }

int iso_weekday(const Date& date) {
  return static_cast<int>(std::chrono::weekday{to_sys_days(date)}.iso_encoding());
}

bool is_leap_year(int year) {
  return std::chrono::year{year}.is_leap();
}

std::vector<Date> dates_of_year(int year) {
  std::vector<Date> dates;
  dates.reserve(is_leap_year(year) ? 366 : 365);
  auto day = to_sys_days(make_date(year, 1, 1));
  const auto end = to_sys_days(make_date(year + 1, 1, 1));
  for (; day < end; day += std::chrono::days{1}) dates.emplace_back(day);
  return dates;
}

DayType day_type(const Date& date) {
  switch (iso_weekday(date)) {
    case 6: return DayType::Saturday;
    case 7: return DayType::Sunday;
    default: return DayType::Weekday;
  }
}

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::Dir1: return "1";
    case Direction::Dir2: return "2";
    case Direction::Both: return "B";
  }
  return "?";
}

std::string_view to_string(VehicleClass c) {
  switch (c) {
    case VehicleClass::Car: return "car";
    case VehicleClass::Truck: return "truck";
    case VehicleClass::All: return "all";
  }
  return "?";
}

std::string_view to_string(DayType t) {
  switch (t) {
    case DayType::Weekday: return "Weekday";
    case DayType::Saturday: return "Saturday";
    case DayType::Sunday: return "Sunday";
  }
  return "?";
}

std::string_view to_string(BorderCountry b) {
  switch (b) {
    case BorderCountry::DE: return "DE";
    case BorderCountry::FR: return "FR";
    case BorderCountry::BE: return "BE";
  }
  return "?";
}

std::optional<Direction> parse_direction(std::string_view s) {
  if (s == "1") return Direction::Dir1;
  if (s == "2") return Direction::Dir2;
  if (s == "B") return Direction::Both;
  return std::nullopt;
}

std::optional<VehicleClass> parse_vehicle_class(std::string_view s) {
  if (s == "car") return VehicleClass::Car;
  if (s == "truck") return VehicleClass::Truck;
  if (s == "all") return VehicleClass::All;
  return std::nullopt;
}

std::optional<DayType> parse_day_type(std::string_view s) {
  if (s == "Weekday" || s == "weekday") return DayType::Weekday;
  if (s == "Saturday" || s == "saturday") return DayType::Saturday;
  if (s == "Sunday" || s == "sunday") return DayType::Sunday;
  return std::nullopt;
}

std::optional<BorderCountry> parse_border_country(std::string_view s) {
  if (s == "DE") return BorderCountry::DE;
  if (s == "FR") return BorderCountry::FR;
  if (s == "BE") return BorderCountry::BE;
  return std::nullopt;
}

std::optional<HourWindow> parse_window(std::string_view s) {
  auto dash = s.find('-');
  if (dash == std::string_view::npos) return std::nullopt;
  unsigned start = 0, end = 0;
  if (!parse_uint(s.substr(0, dash), start) || !parse_uint(s.substr(dash + 1), end)) {
    return std::nullopt;
  }
  HourWindow w{static_cast<int>(start), static_cast<int>(end)};
  if (!w.valid()) return std::nullopt;
  return w;
}

std::string format_window(const HourWindow& w) {
  return std::to_string(w.start_hour) + "-" + std::to_string(w.end_hour);
}

namespace {

auto record_key(const TrafficRecord& r) {
  return std::tie(r.station_id, r.date, r.direction, r.vehicle_class);
}

}  // namespace

bool record_key_less(const TrafficRecord& a, const TrafficRecord& b) {
  return record_key(a) < record_key(b);
}

bool record_key_equal(const TrafficRecord& a, const TrafficRecord& b) {
  return record_key(a) == record_key(b);
}

std::optional<std::uint64_t> window_sum(const TrafficRecord& record, const HourWindow& window,
                                        MissingPolicy policy) {
  if (!window.valid()) throw std::invalid_argument("window_sum: invalid hour window");
  std::uint64_t sum = 0;
  bool any_present = false;
  for (int h = window.start_hour; h < window.end_hour; ++h) {
    const auto& cell = record.counts[static_cast<std::size_t>(h)];
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

bool StationRegistry::insert(StationMeta meta) {
  auto it = std::lower_bound(items_.begin(), items_.end(), meta.station_id,
                             [](const StationMeta& m, const std::string& id) {
                               return m.station_id < id;
                             });
  if (it != items_.end() && it->station_id == meta.station_id) return false;
  items_.insert(it, std::move(meta));
  return true;
}

const StationMeta* StationRegistry::find(std::string_view station_id) const {
  auto it = std::lower_bound(items_.begin(), items_.end(), station_id,
                             [](const StationMeta& m, std::string_view id) {
                               return m.station_id < id;
                             });
  if (it != items_.end() && it->station_id == station_id) return &*it;
  return nullptr;
}

}  // namespace traffic
