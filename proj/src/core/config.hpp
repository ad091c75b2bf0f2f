#pragma once

#include <optional>
#include <string>

#include "attacks.hpp"
#include "battery.hpp"
#include "demand.hpp"
#include "forecast.hpp"
#include "monitor.hpp"
#include "scheduler.hpp"
#include "types.hpp"

namespace gridsec {

enum class MitigationPolicy { none, local, previous_day };

const char* to_string(MitigationPolicy policy);

enum class DemandSource { synthetic, csv };

struct DemandConfig {
  DemandSource source = DemandSource::synthetic;
  std::string csv_path;
  SyntheticDemandParams synthetic;
};

// Full description of one experiment: neighborhood, horizon, device and
// tariff parameters, noise model, optional attack/monitoring/mitigation, and
// where the demand data comes from.
struct ScenarioConfig {
  int intervals = 24;
  int days = 365;
  uint64_t seed = 1;

  int households = 25;
  double participation = 1.0;          // used when participants not listed
  std::vector<int> participants;       // explicit list wins over participation
  int attacker = 0;

  BatterySpec battery;
  TariffParams tariff;
  ForecastErrorParams forecast;
  DemandConfig demand;

  std::optional<AttackSpec> attack;
  std::optional<MonitoringStrategy> monitor;
  MitigationPolicy mitigation = MitigationPolicy::none;

  GameOptions game;

  std::string output_directory = "out";

  // participants resolved from either the explicit list or the participation
  // rate (the first round(rate*M) ids); the attacker is always included.
  NeighborhoodConfig neighborhood() const;

  void validate() const;
};

// Parses the sectioned key/value config document. Unknown sections or keys
// are errors.
ScenarioConfig parse_scenario_config(const std::string& text);
ScenarioConfig load_scenario_config(const std::string& path);

// Applies a single `section.key=value` override on top of a parsed config.
void apply_override(ScenarioConfig& config, const std::string& dotted_key,
                    const std::string& value);

// Round-trips a config back to its file form (used for reproducibility dumps).
std::string scenario_config_to_text(const ScenarioConfig& config);

}  // namespace gridsec
