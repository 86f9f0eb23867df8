#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "traffic/harmonize.hpp"
#include "traffic/model.hpp"

namespace traffic {

struct SummaryScope {
  std::optional<int> month;  // empty = whole year
  DayType day_type = DayType::Weekday;
};

struct StationSummary {
  std::string station_id;
  std::optional<double> latitude;
  std::optional<double> longitude;
  double total_volume = 0;  // morning + evening rush over the scope
  double asymmetry = 0;     // morning - evening, signed
};

struct HotspotResult {
  std::vector<StationSummary> summaries;  // ordered by station_id
  std::vector<std::string> warnings;
};

// Per station: total and morning-evening asymmetry of the rush volumes over
// the scope. Strict omits a station when any in-scope feature is missing;
// Lenient sums the present features and omits only all-missing stations.
// Series without a registry entry are skipped with a warning; stations
// without coordinates stay in the tabular output and are flagged.
HotspotResult station_summaries(std::span<const HarmonizedSeries> series_set,
                                const StationRegistry& registry, const SummaryScope& scope,
                                MissingPolicy policy = MissingPolicy::Strict,
                                const HourWindow& morning = kMorningRush,
                                const HourWindow& evening = kEveningRush);

struct StationChange {
  std::string station_id;
  double delta_total = 0;
  double delta_percent = 0;
};

// Stations present in both years, ordered by |delta_percent| descending,
// ties by station_id ascending, top k. Stations with a zero year-a total are
// excluded (their percent change is undefined).
std::vector<StationChange> rank_changes(std::span<const StationSummary> year_a,
                                        std::span<const StationSummary> year_b, int top_k);

std::string summaries_to_csv(std::span<const StationSummary> summaries);
// Point FeatureCollection; only summaries with coordinates are included.
std::string summaries_to_geojson(std::span<const StationSummary> summaries);
std::string changes_to_csv(std::span<const StationChange> changes);

}  // namespace traffic
