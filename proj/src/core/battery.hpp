#pragma once

#include <string>

#include "types.hpp"

namespace gridsec {

// Storage device parameters. Actions are metered in kWh at the meter side:
// a > 0 draws energy to charge, a < 0 offsets demand by discharging.
struct BatterySpec {
  double capacity = 13.5;                 // kWh
  double max_charge = 5.0;                // kWh per interval, meter side
  double max_discharge = 5.0;             // kWh per interval, meter side
  double charge_efficiency = 0.95;        // fraction of drawn energy stored
  double discharge_efficiency = 0.95;     // fraction of stored energy delivered
  double self_discharge = 0.0;            // fraction of SOC lost per interval
  double initial_soc = 6.75;              // kWh

  void validate() const {
    if (capacity < 0.0) throw DomainError("battery: negative capacity");
    if (!(max_charge > 0.0) || !(max_discharge > 0.0))
      throw DomainError("battery: rates must be positive");
    if (!(charge_efficiency > 0.0 && charge_efficiency <= 1.0))
      throw DomainError("battery: charge efficiency outside (0,1]");
    if (!(discharge_efficiency > 0.0 && discharge_efficiency <= 1.0))
      throw DomainError("battery: discharge efficiency outside (0,1]");
    if (self_discharge < 0.0 || self_discharge >= 1.0)
      throw DomainError("battery: self discharge outside [0,1)");
    if (initial_soc < 0.0 || initial_soc > capacity)
      throw DomainError("battery: initial SOC outside [0, capacity]");
  }
};

// One interval of the SOC recurrence:
//   soc' = soc*(1 - self_discharge) + eta_c*max(a,0) - max(-a,0)/eta_d
inline double soc_step(double soc, double action, const BatterySpec& spec) {
  const double decayed = soc * (1.0 - spec.self_discharge);
  if (action >= 0.0) return decayed + spec.charge_efficiency * action;
  return decayed - (-action) / spec.discharge_efficiency;
}

enum class ScheduleViolation {
  none,
  charge_rate,     // a_t > max_charge
  discharge_rate,  // -a_t > max_discharge
  soc_underflow,   // SOC would drop below 0
  soc_overflow,    // SOC would exceed capacity
};

const char* to_string(ScheduleViolation v);

// Result of validating a schedule: either the full SOC trajectory
// (soc[0] = initial, soc[T] = end of day) or the first violated constraint.
struct ScheduleCheck {
  bool feasible = false;
  Series soc;                    // T+1 entries when feasible
  ScheduleViolation violation = ScheduleViolation::none;
  int violation_interval = -1;

  std::string describe() const;
};

// Walks the SOC recurrence and checks rate and SOC bounds; `slack` absorbs
// solver round-off (constraints checked to within slack kWh).
ScheduleCheck validate_schedule(const Series& schedule, const BatterySpec& spec,
                                double slack = 1e-9);

// Clamps each action in turn so rate bounds hold and the SOC trajectory stays
// inside [0, capacity]; never fails. Used for previous-day reuse and for
// repairing near-feasible solver output.
Series truncate_to_feasible(const Series& schedule, const BatterySpec& spec);

}  // namespace gridsec
