#pragma once

#include <vector>

#include "attacks.hpp"
#include "forecast.hpp"
#include "types.hpp"

namespace gridsec {

enum class MonitorLevel {
  average_amount,    // daily totals of the aggregated forecast
  deep_aggregated,   // hourly aggregated forecast profile
  deep_individual,   // hourly per-household forecast profiles
};

const char* to_string(MonitorLevel level);

struct MonitoringStrategy {
  MonitorLevel level = MonitorLevel::deep_aggregated;
  double threshold = 0.0;        // 0 selects the level's default
  bool per_interval_max = false; // stricter mode: max relative error instead of mean

  double effective_threshold() const {
    if (threshold > 0.0) return threshold;
    return level == MonitorLevel::deep_individual ? 0.20 : 0.10;
  }

  void validate() const {
    const double th = effective_threshold();
    if (!(th > 0.0 && th < 1.0)) throw DomainError("monitor: threshold outside (0,1)");
  }
};

struct DetectionResult {
  bool detected = false;
  MonitorLevel level = MonitorLevel::deep_aggregated;
  double threshold = 0.0;
  // average_amount / deep_aggregated evidence
  double discrepancy = 0.0;
  // deep_individual evidence, indexed like the inputs
  std::vector<double> household_discrepancy;
  std::vector<int> flagged;
};

// Compares the received forecasts with the utility company's own estimates.
// `received` and `uc_estimates` are profile sets over the same households.
DetectionResult detect(const std::vector<Series>& received,
                       const std::vector<Series>& uc_estimates,
                       const MonitoringStrategy& strategy);

// Inputs for sweeping attack strength against a monitoring level: a corpus of
// days with actual demands for the whole neighborhood plus the forecast noise
// model used both for household submissions and the UC estimates.
struct MonitorCorpus {
  std::vector<std::vector<Series>> demands;  // [day][household]
  NeighborhoodConfig neighborhood;
  ForecastErrorParams forecast;
  uint64_t seed = 1;
};

// Largest rho on the grid whose median detection outcome over the corpus is
// "not detected".
double max_undetected_rho(const AttackSpec& attack, const MonitoringStrategy& strategy,
                          const MonitorCorpus& corpus, const std::vector<double>& rho_grid);

}  // namespace gridsec
