#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace traffic {

// One clock-hour vehicle count. Empty means the hour was not observed;
// 0 means observed with no vehicles. The two are never conflated.
using HourlyCount = std::optional<std::uint32_t>;

enum class Direction : unsigned char { Dir1, Dir2, Both };
enum class VehicleClass : unsigned char { Car, Truck, All };
enum class DayType : unsigned char { Weekday, Saturday, Sunday };
enum class MissingPolicy : unsigned char { Strict, Lenient };
enum class BorderCountry : unsigned char { DE, FR, BE };

inline constexpr int kVehicleClassCount = 3;
inline constexpr int kDayTypeCount = 3;

using Date = std::chrono::year_month_day;

Date make_date(int year, unsigned month, unsigned day);
std::optional<Date> parse_date(std::string_view iso);  // strict YYYY-MM-DD
std::string format_date(const Date& date);
Date add_days(const Date& date, int n);
int year_of(const Date& date);
int month_of(const Date& date);
int day_of(const Date& date);
int iso_weekday(const Date& date);  // 1 = Monday .. 7 = Sunday
bool is_leap_year(int year);
std::vector<Date> dates_of_year(int year);

DayType day_type(const Date& date);

std::string_view to_string(Direction d);
std::string_view to_string(VehicleClass c);
std::string_view to_string(DayType t);
std::string_view to_string(BorderCountry b);
std::optional<Direction> parse_direction(std::string_view s);          // "1" | "2" | "B"
std::optional<VehicleClass> parse_vehicle_class(std::string_view s);   // "car" | "truck" | "all"
std::optional<DayType> parse_day_type(std::string_view s);
std::optional<BorderCountry> parse_border_country(std::string_view s);

// Half-open range of hour bins [start_hour, end_hour). A bin is labeled by
// its start hour, so "7-10" covers the bins 7, 8 and 9.
struct HourWindow {
  int start_hour = 0;
  int end_hour = 24;

  bool valid() const { return start_hour >= 0 && start_hour < end_hour && end_hour <= 24; }
  int length() const { return end_hour - start_hour; }
  bool contains(int hour) const { return hour >= start_hour && hour < end_hour; }
  bool operator==(const HourWindow&) const = default;
};

std::optional<HourWindow> parse_window(std::string_view s);  // "7-10"
std::string format_window(const HourWindow& w);

inline constexpr HourWindow kMorningRush{7, 10};
inline constexpr HourWindow kEveningRush{16, 19};
inline constexpr HourWindow kFullDay{0, 24};

// One station-day series of 24 hourly counts for one travel direction and
// vehicle class. (station_id, date, direction, vehicle_class) is the record
// key and is unique within a Dataset.
struct TrafficRecord {
  std::string station_id;
  std::string route_id;
  Direction direction = Direction::Both;
  VehicleClass vehicle_class = VehicleClass::Car;
  Date date{};
  std::array<HourlyCount, 24> counts{};

  bool operator==(const TrafficRecord&) const = default;
};

bool record_key_less(const TrafficRecord& a, const TrafficRecord& b);
bool record_key_equal(const TrafficRecord& a, const TrafficRecord& b);

// Sum of counts over the window bins. Strict: missing result if any bin in
// the window is missing. Lenient: sum of the present bins, missing only if
// every bin in the window is missing.
std::optional<std::uint64_t> window_sum(const TrafficRecord& record, const HourWindow& window,
                                        MissingPolicy policy);

struct StationMeta {
  std::string station_id;
  std::string name;
  std::string route_id;
  std::optional<double> latitude;   // WGS84 degrees, [-90, 90]
  std::optional<double> longitude;  // WGS84 degrees, [-180, 180]
  std::optional<BorderCountry> border_country;

  bool has_coordinates() const { return latitude.has_value() && longitude.has_value(); }
  bool operator==(const StationMeta&) const = default;
};

class StationRegistry {
 public:
  // Keeps entries ordered by station_id. Returns false on duplicate id.
  bool insert(StationMeta meta);
  const StationMeta* find(std::string_view station_id) const;
  const std::vector<StationMeta>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  bool operator==(const StationRegistry&) const = default;

 private:
  std::vector<StationMeta> items_;
};

// All hourly records for one calendar year plus the station registry.
// Immutable by convention: the analytics never mutate a Dataset in place.
struct Dataset {
  int year = 0;
  std::vector<TrafficRecord> records;
  StationRegistry stations;
};

}  // namespace traffic
