#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "traffic/model.hpp"

namespace traffic {

// Generator configuration. Counts follow base_profile scaled by the day-type
// factor and the direction split; cells drop to missing independently with
// dropout_rate. Identical config => bit-identical dataset.
struct SynthConfig {
  std::uint64_t seed = 1;
  int n_stations = 5;
  int year = 2018;
  std::array<double, 24> base_profile = kDefaultProfile;
  double weekend_factor = 0.6;   // > 0, applied on Saturdays and Sundays
  double dropout_rate = 0.0;     // [0, 1]
  double direction_split = 0.5;  // (0, 1), Dir1's share of the flow
  int border_stations = 0;       // first n stations get a border tag

  static constexpr std::array<double, 24> kDefaultProfile = {
      4,  2,  2,  2,  3,  10, 35, 90, 120, 80,  55, 50,
      55, 60, 65, 75, 100, 130, 95, 55,  35,  20, 12, 6};
};

// Deterministic generation order: stations ascending, dates ascending, Dir1
// then Dir2, hours 0..23; per cell one Poisson draw then one dropout draw.
// Station ids are S0001.., two stations per route; the first
// config.border_stations stations cycle through DE, FR, BE border tags with
// Dir1 as the outbound direction by convention.
Dataset generate(const SynthConfig& config);

// Exact Poisson sampling over a fixed, portable generator. Splits large
// rates into additive chunks so the inversion stays in double range.
std::uint32_t poisson_draw(std::mt19937_64& rng, double lambda);

// Uniform double in [0, 1) from the top 53 bits.
double uniform_draw(std::mt19937_64& rng);

}  // namespace traffic
