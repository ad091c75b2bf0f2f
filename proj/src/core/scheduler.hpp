#pragma once

#include <memory>

#include "battery.hpp"
#include "grid.hpp"
#include "types.hpp"

namespace gridsec {

// Tuning knobs for the projection QP behind best_response.
struct ProjectorOptions {
  double reg = 1e-8;       // tie-break regularizer on |charge|, |discharge|
  double sigma = 1e-6;     // ADMM x-regularization
  double rho = 1.0;        // ADMM penalty (adapted at runtime)
  double alpha = 1.6;      // over-relaxation
  double eps = 1e-8;       // residual tolerance (kWh scale)
  int max_iter = 4000;
  int adapt_every = 50;
};

// Projects a desired meter-action profile onto the battery-feasible set:
//   minimize  sum_t (a_t - target_t)^2
//   subject to rate bounds and 0 <= SOC <= capacity along the whole day.
// Solved exactly as a convex QP in split charge/discharge variables (the
// split keeps the SOC map linear despite the efficiency kinks); the tiny
// regularizer prefers the smallest |a_t| among ties.
class BatteryProjector {
 public:
  BatteryProjector(int intervals, const BatterySpec& spec,
                   const ProjectorOptions& options = {});
  ~BatteryProjector();
  BatteryProjector(BatteryProjector&&) noexcept;
  BatteryProjector& operator=(BatteryProjector&&) noexcept;

  Series project(const Series& target) const;

  int intervals() const;
  const BatterySpec& spec() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// A household's bill when its own per-interval loads are `own` and the grid
// total per interval is `total` (which already includes `own`). Used while
// iterating the game on forecasts, where individual entries may transiently
// dip below zero; interval costs are evaluated on max(total, 0).
double bill_against_total(const Series& own, const Series& total,
                          const TariffParams& tariff);

// Feasible schedule minimizing the household's bill with everyone else's load
// held fixed, via the quadratic surrogate sum_t (others_t + own_t + a_t)^2.
Series best_response(const Series& own_forecast, const Series& others_aggregate,
                     const BatterySpec& spec, const TariffParams& tariff,
                     const ProjectorOptions& options = {});

// best_response against an empty neighborhood: the household flattens its own
// forecast. The mitigation scheduler of the two-level defence.
Series local_schedule(const Series& own_forecast, const BatterySpec& spec,
                      const TariffParams& tariff,
                      const ProjectorOptions& options = {});

// Yesterday's actions, re-validated for today's initial SOC; infeasible
// actions are truncated to the feasible boundary. Throws when no history.
Series previous_day_schedule(const std::vector<Series>& history,
                             const BatterySpec& spec);

struct GameOptions {
  double epsilon_rel = 1e-6;  // convergence threshold as fraction of the baseline bill
  int max_rounds = 200;
  ProjectorOptions projector;
};

struct GameDiagnostics {
  bool converged = false;
  int rounds = 0;
  double last_round_improvement = 0.0;  // largest accepted bill improvement in final round
  int accepted_steps = 0;
};

struct GameResult {
  std::vector<Series> schedules;  // one per participant
  GameDiagnostics diag;
};

// Round-robin iterated best response on the forecast profiles until no
// participant can lower its bill by more than epsilon, or max_rounds is hit.
// `background` is the aggregated forecast load of non-participants (zeros if
// omitted). A candidate schedule is only adopted when it improves the
// player's actual bill, so per-player bills decrease monotonically.
GameResult play_scheduling_game(const std::vector<Series>& forecasts,
                                const std::vector<BatterySpec>& specs,
                                const TariffParams& tariff,
                                const Series& background = {},
                                const GameOptions& options = {});

// epsilon-Nash certificate: for each participant, how much one more best
// response would lower its bill given everyone else's schedule. All entries
// <= epsilon after a converged game.
std::vector<double> nash_gap(const std::vector<Series>& forecasts,
                             const std::vector<BatterySpec>& specs,
                             const TariffParams& tariff,
                             const Series& background,
                             const std::vector<Series>& schedules,
                             const ProjectorOptions& options = {});

struct DayExecution {
  LoadMatrix loads;                     // all M households
  std::vector<double> bills;            // all M households
  double par = 0.0;
  std::vector<double> final_soc;        // per participant
  std::vector<Series> executed_actions; // per participant, after clamping
};

// Applies committed schedules to the day's actual demands. Participant loads
// are floored at zero (no export); discharge the demand cannot absorb stays
// in the battery, and charge is truncated at capacity, so execution is always
// physical even when actuals deviate from forecasts.
DayExecution execute_day(const std::vector<Series>& schedules,
                         const std::vector<int>& participant_ids,
                         const std::vector<Series>& actual_demands,
                         const std::vector<BatterySpec>& specs,
                         const TariffParams& tariff);

}  // namespace gridsec
