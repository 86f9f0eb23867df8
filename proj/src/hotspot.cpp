#include "traffic/hotspot.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "traffic/csv.hpp"

namespace traffic {

HotspotResult station_summaries(std::span<const HarmonizedSeries> series_set,
                                const StationRegistry& registry, const SummaryScope& scope,
                                MissingPolicy policy, const HourWindow& morning,
                                const HourWindow& evening) {
  if (scope.month && (*scope.month < 1 || *scope.month > 12)) {
    throw std::invalid_argument("station_summaries: month out of range");
  }

  HotspotResult result;
  for (const auto& series : series_set) {
    const StationMeta* meta = registry.find(series.station_id);
    if (meta == nullptr) {
      result.warnings.push_back("station " + series.station_id + " not in registry, skipped");
      continue;
    }

    double morning_sum = 0, evening_sum = 0;
    bool any_present = false;
    bool any_missing = false;
    int first = scope.month.value_or(1);
    int last = scope.month.value_or(12);
    for (int month = first; month <= last; ++month) {
      auto features = rush_features(series, month, scope.day_type, morning, evening);
      if (features.morning) {
        morning_sum += *features.morning;
        any_present = true;
      } else {
        any_missing = true;
      }
      if (features.evening) {
        evening_sum += *features.evening;
        any_present = true;
      } else {
        any_missing = true;
      }
    }
    if (!any_present) continue;
    if (policy == MissingPolicy::Strict && any_missing) continue;

    StationSummary summary;
    summary.station_id = series.station_id;
    summary.latitude = meta->latitude;
    summary.longitude = meta->longitude;
    summary.total_volume = morning_sum + evening_sum;
    summary.asymmetry = morning_sum - evening_sum;
    if (!meta->has_coordinates()) {
      result.warnings.push_back("station " + series.station_id +
                                " has no coordinates, excluded from geo output");
    }
    result.summaries.push_back(std::move(summary));
  }
  std::sort(result.summaries.begin(), result.summaries.end(),
            [](const StationSummary& a, const StationSummary& b) {
              return a.station_id < b.station_id;
            });
  return result;
}

std::vector<StationChange> rank_changes(std::span<const StationSummary> year_a,
                                        std::span<const StationSummary> year_b, int top_k) {
  std::map<std::string_view, const StationSummary*> b_by_id;
  for (const auto& summary : year_b) b_by_id.emplace(summary.station_id, &summary);

  std::vector<StationChange> changes;
  for (const auto& a : year_a) {
    auto it = b_by_id.find(a.station_id);
    if (it == b_by_id.end()) continue;
    if (a.total_volume == 0.0) continue;  // percent change undefined
    const auto& b = *it->second;
    StationChange change;
    change.station_id = a.station_id;
    change.delta_total = b.total_volume - a.total_volume;
    change.delta_percent = 100.0 * (b.total_volume - a.total_volume) / a.total_volume;
    changes.push_back(std::move(change));
  }

  std::sort(changes.begin(), changes.end(), [](const StationChange& x, const StationChange& y) {
    double ax = std::fabs(x.delta_percent);
    double ay = std::fabs(y.delta_percent);
    if (ax != ay) return ax > ay;
    return x.station_id < y.station_id;
  });
  if (top_k >= 0 && changes.size() > static_cast<std::size_t>(top_k)) {
    changes.resize(static_cast<std::size_t>(top_k));
  }
  return changes;
}

std::string summaries_to_csv(std::span<const StationSummary> summaries) {
  std::string out = "station_id,latitude,longitude,total_volume,asymmetry\n";
  for (const auto& s : summaries) {
    out += csv::escape(s.station_id);
    out += ',';
    if (s.latitude) csv::append_double(out, *s.latitude);
    out += ',';
    if (s.longitude) csv::append_double(out, *s.longitude);
    out += ',';
    csv::append_double(out, s.total_volume);
    out += ',';
    csv::append_double(out, s.asymmetry);
    out += '\n';
  }
  return out;
}

std::string summaries_to_geojson(std::span<const StationSummary> summaries) {
  nlohmann::json features = nlohmann::json::array();
  for (const auto& s : summaries) {
    if (!s.latitude || !s.longitude) continue;
    features.push_back({
        {"type", "Feature"},
        {"geometry", {{"type", "Point"}, {"coordinates", {*s.longitude, *s.latitude}}}},
        {"properties",
         {{"station_id", s.station_id},
          {"total_volume", s.total_volume},
          {"asymmetry", s.asymmetry}}},
    });
  }
  nlohmann::json doc = {{"type", "FeatureCollection"}, {"features", std::move(features)}};
  return doc.dump(2) + "\n";
}

std::string changes_to_csv(std::span<const StationChange> changes) {
  std::string out = "station_id,delta_total,delta_percent\n";
  for (const auto& c : changes) {
    out += csv::escape(c.station_id);
    out += ',';
    csv::append_double(out, c.delta_total);
    out += ',';
    csv::append_double(out, c.delta_percent);
    out += '\n';
  }
  return out;
}

}  // namespace traffic
