#include "traffic/synth.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace traffic {

double uniform_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

namespace {

// Knuth inversion, valid while exp(-lambda) stays well above denormal range.
std::uint32_t poisson_small(std::mt19937_64& rng, double lambda) {
  const double limit = std::exp(-lambda);
  std::uint32_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform_draw(rng);
  } while (p > limit);
  return k - 1;
}

void validate(const SynthConfig& config) {
  auto fail = [](const char* field) {
    throw std::invalid_argument(std::string{"SynthConfig: invalid "} + field);
  };
  if (config.n_stations <= 0) fail("n_stations");
  if (config.year < 1900 || config.year > 2200) fail("year");
  for (double rate : config.base_profile) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) fail("base_profile");
  }
  if (!(config.weekend_factor > 0.0) || !std::isfinite(config.weekend_factor)) {
    fail("weekend_factor");
  }
  if (!(config.dropout_rate >= 0.0 && config.dropout_rate <= 1.0)) fail("dropout_rate");
  if (!(config.direction_split > 0.0 && config.direction_split < 1.0)) fail("direction_split");
  if (config.border_stations < 0 || config.border_stations > config.n_stations) {
    fail("border_stations");
  }
}

std::string padded_id(char prefix, int n, int width) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%c%0*d", prefix, width, n);
  return buf;
}

}  // namespace

std::uint32_t poisson_draw(std::mt19937_64& rng, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("poisson_draw: invalid rate");
  }
  constexpr double kChunk = 40.0;
  std::uint64_t total = 0;
  while (lambda > kChunk) {
    total += poisson_small(rng, kChunk);
    lambda -= kChunk;
  }
  if (lambda > 0.0) total += poisson_small(rng, lambda);
  return static_cast<std::uint32_t>(total);
}

Dataset generate(const SynthConfig& config) {
  validate(config);

  Dataset dataset;
  dataset.year = config.year;
  std::mt19937_64 rng(config.seed);

  constexpr BorderCountry kBorderCycle[] = {BorderCountry::DE, BorderCountry::FR,
                                            BorderCountry::BE};
  // Luxembourg-ish bounding box for the station coordinates.
  constexpr double kLatBase = 49.45, kLatSpan = 0.70;
  constexpr double kLonBase = 5.75, kLonSpan = 0.80;

  for (int i = 0; i < config.n_stations; ++i) {
    StationMeta meta;
    meta.station_id = padded_id('S', i + 1, 4);
    meta.route_id = padded_id('R', i / 2 + 1, 3);
    meta.name = "Station " + std::to_string(i + 1);
    meta.latitude = kLatBase + uniform_draw(rng) * kLatSpan;
    meta.longitude = kLonBase + uniform_draw(rng) * kLonSpan;
    if (i < config.border_stations) meta.border_country = kBorderCycle[i % 3];
    dataset.stations.insert(std::move(meta));
  }

  const auto dates = dates_of_year(config.year);
  dataset.records.reserve(static_cast<std::size_t>(config.n_stations) * dates.size() * 2);
  for (int i = 0; i < config.n_stations; ++i) {
    std::string station_id = padded_id('S', i + 1, 4);
    std::string route_id = padded_id('R', i / 2 + 1, 3);
    for (const Date& date : dates) {
      double day_factor = day_type(date) == DayType::Weekday ? 1.0 : config.weekend_factor;
      for (Direction direction : {Direction::Dir1, Direction::Dir2}) {
        double split = direction == Direction::Dir1 ? config.direction_split
                                                    : 1.0 - config.direction_split;
        TrafficRecord record;
        record.station_id = station_id;
        record.route_id = route_id;
        record.direction = direction;
        record.vehicle_class = VehicleClass::Car;
        record.date = date;
        for (std::size_t h = 0; h < 24; ++h) {
          std::uint32_t value = poisson_draw(rng, config.base_profile[h] * day_factor * split);
          bool dropped = uniform_draw(rng) < config.dropout_rate;
          if (!dropped) record.counts[h] = value;
        }
        dataset.records.push_back(std::move(record));
      }
    }
  }
  return dataset;
}

}  // namespace traffic
