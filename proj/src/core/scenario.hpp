#pragma once

#include <memory>
#include <string>

#include "config.hpp"
#include "secgame.hpp"

namespace gridsec {

struct DayResult {
  int day = 0;
  bool detected = false;
  bool converged = true;
  int rounds = 0;
  bool mitigated = false;
  double par = 0.0;
  double par_baseline = 0.0;
  double attacker_bill_change_pct = 0.0;
  double others_bill_change_pct = 0.0;
  double revenue_change_pct = 0.0;
  double revenue = 0.0;           // sum_t g(L_t) on the day's actual loads
  double revenue_baseline = 0.0;
  std::vector<double> bills;      // per household, the (possibly attacked) run
};

struct MetricSummary {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

struct ScenarioSummary {
  int days = 0;
  MetricSummary par;
  MetricSummary par_baseline;
  MetricSummary attacker_bill_change_pct;
  MetricSummary others_bill_change_pct;
  MetricSummary revenue_change_pct;
  double detection_rate = 0.0;
  double convergence_rate = 0.0;
  double mitigation_rate = 0.0;
};

struct ScenarioResult {
  std::vector<DayResult> days;
  ScenarioSummary summary;

  std::string days_csv() const;      // one row per day
  std::string summary_json() const;
};

MetricSummary summarize(std::vector<double> values);

// Runs one scenario day by day, carrying battery state across days for both
// the attacked run and its matched no-attack baseline (identical forecast
// noise, so metric deltas isolate the attack).
class ScenarioEngine {
 public:
  explicit ScenarioEngine(const ScenarioConfig& config);
  ~ScenarioEngine();
  ScenarioEngine(ScenarioEngine&&) noexcept;
  ScenarioEngine& operator=(ScenarioEngine&&) noexcept;

  DayResult run_day(int day_index);
  ScenarioResult run();

  const ScenarioConfig& config() const;
  const std::vector<std::vector<Series>>& demands() const;  // [day][household]

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

ScenarioResult run_scenario(const ScenarioConfig& config);

struct SweepCell {
  std::string kind;
  double participation = 0.0;
  double rho = 0.0;
  MetricSummary attacker_bill_change_pct;
  MetricSummary others_bill_change_pct;
  MetricSummary revenue_change_pct;
  MetricSummary par;
  ScenarioSummary full;
};

struct SweepResult {
  std::vector<SweepCell> cells;

  // one plottable CSV per metric: kind,participation,rho,median,q1,q3
  std::string metric_csv(const std::string& metric) const;
  static const std::vector<std::string>& metric_names();
};

// "none", "shift", "flat", "mirror" or "scale"; shift takes sigma and scale
// takes tau from the base config's attack section (or the defaults).
AttackSpec attack_for_kind(const std::string& kind, const ScenarioConfig& base);

// Grid of scenarios with matched seeds; every cell runs the full horizon.
SweepResult sweep(const ScenarioConfig& base,
                  const std::vector<double>& participation_grid,
                  const std::vector<double>& rho_grid,
                  const std::vector<std::string>& kinds);

// End-to-end defence advisor: builds the security-game payoffs from attack
// statistics, validates the assumptions, classifies the case and reports all
// equilibria plus the case-2 inequality as a JSON document. Refuses (throws
// AssumptionError) when the assumptions do not hold.
std::string defence_report_from_stats(double gamma_strong, double rho_strong,
                                      double gamma_weak, double rho_weak,
                                      double lambda, double kappa, double c_mon,
                                      double c_def);

// Same report for a fully specified payoff vector (no Eq.-(7) section).
std::string defence_report_from_payoffs(const SecurityGamePayoffs& payoffs);

// JSON detection report for CSV profile sets (one detection per day).
std::string detect_csv_report(const std::string& received_csv,
                              const std::string& estimates_csv,
                              const MonitoringStrategy& strategy);

}  // namespace gridsec
