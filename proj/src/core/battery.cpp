#include "battery.hpp"

#include <algorithm>
#include <cmath>

namespace gridsec {

const char* to_string(ScheduleViolation v) {
  switch (v) {
    case ScheduleViolation::none: return "none";
    case ScheduleViolation::charge_rate: return "charge_rate";
    case ScheduleViolation::discharge_rate: return "discharge_rate";
    case ScheduleViolation::soc_underflow: return "soc_underflow";
    case ScheduleViolation::soc_overflow: return "soc_overflow";
  }
  return "unknown";
}

std::string ScheduleCheck::describe() const {
  if (feasible) return "feasible";
  return std::string(to_string(violation)) + " at interval " +
         std::to_string(violation_interval);
}

ScheduleCheck validate_schedule(const Series& schedule, const BatterySpec& spec,
                                double slack) {
  spec.validate();
  ScheduleCheck check;
  check.soc.reserve(schedule.size() + 1);
  check.soc.push_back(spec.initial_soc);
  double soc = spec.initial_soc;
  for (size_t t = 0; t < schedule.size(); ++t) {
    const double a = schedule[t];
    if (a > spec.max_charge + slack) {
      check.violation = ScheduleViolation::charge_rate;
      check.violation_interval = static_cast<int>(t);
      return check;
    }
    if (-a > spec.max_discharge + slack) {
      check.violation = ScheduleViolation::discharge_rate;
      check.violation_interval = static_cast<int>(t);
      return check;
    }
    soc = soc_step(soc, a, spec);
    if (soc < -slack) {
      check.violation = ScheduleViolation::soc_underflow;
      check.violation_interval = static_cast<int>(t);
      return check;
    }
    if (soc > spec.capacity + slack) {
      check.violation = ScheduleViolation::soc_overflow;
      check.violation_interval = static_cast<int>(t);
      return check;
    }
    check.soc.push_back(soc);
  }
  check.feasible = true;
  return check;
}

Series truncate_to_feasible(const Series& schedule, const BatterySpec& spec) {
  spec.validate();
  Series out(schedule.size(), 0.0);
  double soc = spec.initial_soc;
  for (size_t t = 0; t < schedule.size(); ++t) {
    double a = std::clamp(schedule[t], -spec.max_discharge, spec.max_charge);
    const double decayed = soc * (1.0 - spec.self_discharge);
    if (a >= 0.0) {
      // headroom limits the charge
      const double room = spec.capacity - decayed;
      a = std::min(a, std::max(0.0, room / spec.charge_efficiency));
    } else {
      // stored energy limits the discharge
      const double available = decayed * spec.discharge_efficiency;
      a = -std::min(-a, std::max(0.0, available));
    }
    soc = soc_step(soc, a, spec);
    soc = std::clamp(soc, 0.0, spec.capacity);  // guard round-off
    out[t] = a;
  }
  return out;
}

}  // namespace gridsec
