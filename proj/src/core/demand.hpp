#pragma once

#include <string>

#include "rng.hpp"
#include "types.hpp"

namespace gridsec {

// Two-peak residential template with per-household scale/shape jitter and
// per-day multiplicative noise. Values are kWh per interval.
struct SyntheticDemandParams {
  double base_load = 0.75;        // overnight floor, kWh
  double morning_peak = 0.9;      // morning bump amplitude
  double evening_peak = 1.3;      // evening bump amplitude
  double morning_hour = 7.0;      // peak positions on a 24h clock
  double evening_hour = 19.0;
  double morning_width = 2.0;     // gaussian widths, hours
  double evening_width = 2.5;
  double household_jitter = 0.2;  // lognormal sigma of the per-household scale
  int shape_offset_range = 1;     // per-household peak shift, +-intervals
  double day_noise = 0.12;        // lognormal sigma per household-day-interval

  void validate() const {
    if (base_load < 0.0 || morning_peak < 0.0 || evening_peak < 0.0)
      throw DomainError("demand: template amplitudes must be >= 0");
    if (base_load + morning_peak + evening_peak <= 0.0)
      throw DomainError("demand: template is identically zero");
    if (household_jitter < 0.0 || day_noise < 0.0)
      throw DomainError("demand: noise sigmas must be >= 0");
    if (shape_offset_range < 0) throw DomainError("demand: negative shape offset range");
  }
};

// demands[day][household] with `intervals` values each; deterministic in the
// seed (household traits and day noise come from separate substreams).
std::vector<std::vector<Series>> synthesize_demands(int households, int days,
                                                    int intervals,
                                                    const SyntheticDemandParams& params,
                                                    uint64_t seed);

// Long-format CSV with header `household,day,interval,kwh`.
std::string demands_to_csv(const std::vector<std::vector<Series>>& demands);

// Parses the long format back into [day][household] profiles. Household and
// day indices must be dense starting at zero; every (household, day) pair
// needs exactly `intervals` rows (inferred from the data). Malformed or
// negative rows raise ParseError/DomainError with the offending line number.
std::vector<std::vector<Series>> demands_from_csv(const std::string& text);

std::vector<std::vector<Series>> load_demands_csv(const std::string& path);

}  // namespace gridsec
