#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "traffic/model.hpp"

namespace traffic {

struct IngestIssue {
  int line_no = 0;  // 1-based, header is line 1
  std::string reason;
};

struct IngestReport {
  std::size_t rows_read = 0;      // data rows, header excluded
  std::size_t rows_accepted = 0;
  std::size_t duplicates = 0;
  std::size_t malformed = 0;
  std::vector<IngestIssue> samples;  // first kMaxSamples issues, in line order

  static constexpr std::size_t kMaxSamples = 25;
};

struct DatasetSummary {
  std::size_t n_records = 0;
  std::size_t n_stations = 0;
  std::size_t n_routes = 0;
  std::array<std::uint64_t, kVehicleClassCount> total_by_class{};  // present cells only
};

struct ParsedCounts {
  Dataset dataset;
  IngestReport report;
};

// Counts interchange CSV. Header:
//   station_id,route_id,direction,vehicle_class,date,h00,...,h23
// direction 1|2|B, vehicle_class car|truck|all, date ISO-8601, empty hour
// cell = missing. Rows with a key already seen are skipped (first wins),
// malformed rows are skipped and reported. A wrong header is fatal.
ParsedCounts parse_counts(std::string_view content, int year);
ParsedCounts parse_counts_file(const std::filesystem::path& path, int year);

struct StationFileResult {
  StationRegistry registry;
  std::vector<IngestIssue> rejected;
};

// Stations CSV. Header:
//   station_id,name,route_id,latitude,longitude,border_country
// border_country empty or DE|FR|BE; latitude/longitude both present or both
// empty. Out-of-range or inconsistent rows are rejected with a reason;
// a duplicate station_id is fatal.
StationFileResult parse_stations(std::string_view content);
StationFileResult parse_stations_file(const std::filesystem::path& path);

DatasetSummary dataset_summary(const Dataset& dataset);

// Canonical exports: records sorted by (station, date, direction, class),
// stations sorted by id, LF line endings. Re-parsing an export and exporting
// again yields byte-identical output.
std::string counts_to_csv(const Dataset& dataset);
std::string stations_to_csv(const StationRegistry& registry);
void write_counts_csv(const Dataset& dataset, const std::filesystem::path& path);
void write_stations_csv(const StationRegistry& registry, const std::filesystem::path& path);

std::string report_to_text(const IngestReport& report);
std::string summary_to_csv(const DatasetSummary& summary);

inline constexpr std::string_view kCountsHeader =
    "station_id,route_id,direction,vehicle_class,date,"
    "h00,h01,h02,h03,h04,h05,h06,h07,h08,h09,h10,h11,"
    "h12,h13,h14,h15,h16,h17,h18,h19,h20,h21,h22,h23";
inline constexpr std::string_view kStationsHeader =
    "station_id,name,route_id,latitude,longitude,border_country";

}  // namespace traffic
