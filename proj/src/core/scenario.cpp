#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "demand.hpp"
#include "grid.hpp"

namespace gridsec {

MetricSummary summarize(std::vector<double> values) {
  MetricSummary s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  const auto quantile = [&](double p) {
    const double h = p * static_cast<double>(values.size() - 1);
    const size_t lo = static_cast<size_t>(h);
    const double frac = h - static_cast<double>(lo);
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] + frac * (values[lo + 1] - values[lo]);
  };
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  return s;
}

namespace {

void append_csv_double(std::string& out, double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  out += buf;
}

double pct_change(double value, double baseline) {
  if (baseline == 0.0) return 0.0;
  return 100.0 * (value - baseline) / baseline;
}

}  // namespace

std::string ScenarioResult::days_csv() const {
  std::string out =
      "day,detected,converged,rounds,mitigated,par,par_baseline,"
      "attacker_bill_change_pct,others_bill_change_pct,revenue_change_pct,revenue";
  const size_t households = days.empty() ? 0 : days.front().bills.size();
  for (size_t m = 0; m < households; ++m) out += ",bill_" + std::to_string(m);
  out += "\n";
  for (const DayResult& d : days) {
    out += std::to_string(d.day);
    out += d.detected ? ",1" : ",0";
    out += d.converged ? ",1" : ",0";
    out += "," + std::to_string(d.rounds);
    out += d.mitigated ? ",1" : ",0";
    for (double v : {d.par, d.par_baseline, d.attacker_bill_change_pct,
                     d.others_bill_change_pct, d.revenue_change_pct, d.revenue}) {
      out += ",";
      append_csv_double(out, v);
    }
    for (double b : d.bills) {
      out += ",";
      append_csv_double(out, b);
    }
    out += "\n";
  }
  return out;
}

namespace {

nlohmann::json metric_json(const MetricSummary& m) {
  return {{"median", m.median}, {"q1", m.q1}, {"q3", m.q3}, {"iqr", m.q3 - m.q1}};
}

}  // namespace

std::string ScenarioResult::summary_json() const {
  nlohmann::json j;
  j["days"] = summary.days;
  j["par"] = metric_json(summary.par);
  j["par_baseline"] = metric_json(summary.par_baseline);
  j["attacker_bill_change_pct"] = metric_json(summary.attacker_bill_change_pct);
  j["others_bill_change_pct"] = metric_json(summary.others_bill_change_pct);
  j["revenue_change_pct"] = metric_json(summary.revenue_change_pct);
  j["detection_rate"] = summary.detection_rate;
  j["convergence_rate"] = summary.convergence_rate;
  j["mitigation_rate"] = summary.mitigation_rate;
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// engine

struct ScenarioEngine::Impl {
  ScenarioConfig config;
  NeighborhoodConfig neighborhood;
  std::vector<int> participant_ids;
  int attacker_index = -1;  // position of the attacker within participant_ids
  std::vector<std::vector<Series>> demand_tensor;

  // per-participant battery state carried across days, one lane for the
  // attacked run and one for the matched baseline
  std::vector<double> soc_main;
  std::vector<double> soc_baseline;
  std::vector<Series> previous_schedules;  // committed schedules of yesterday
  bool has_history = false;

  explicit Impl(const ScenarioConfig& cfg) : config(cfg) {
    config.validate();
    neighborhood = config.neighborhood();
    participant_ids = neighborhood.participants;
    for (size_t k = 0; k < participant_ids.size(); ++k)
      if (neighborhood.attacker_id && participant_ids[k] == *neighborhood.attacker_id)
        attacker_index = static_cast<int>(k);

    if (config.demand.source == DemandSource::csv) {
      demand_tensor = load_demands_csv(config.demand.csv_path);
      if (static_cast<int>(demand_tensor.size()) < config.days)
        throw DomainError("demand CSV provides " + std::to_string(demand_tensor.size()) +
                          " days, config needs " + std::to_string(config.days));
      for (const auto& day : demand_tensor) {
        if (static_cast<int>(day.size()) != config.households)
          throw DomainError("demand CSV household count does not match config");
        for (const Series& profile : day)
          check_profile(profile, config.intervals, "demand CSV profile");
      }
    } else {
      demand_tensor = synthesize_demands(config.households, config.days,
                                         config.intervals, config.demand.synthetic,
                                         config.seed);
    }

    soc_main.assign(participant_ids.size(), config.battery.initial_soc);
    soc_baseline.assign(participant_ids.size(), config.battery.initial_soc);
  }

  std::vector<BatterySpec> specs_with_soc(const std::vector<double>& soc) const {
    std::vector<BatterySpec> specs(participant_ids.size(), config.battery);
    for (size_t k = 0; k < specs.size(); ++k)
      specs[k].initial_soc = std::clamp(soc[k], 0.0, config.battery.capacity);
    return specs;
  }

  // aggregated forecast load of non-participants
  Series background_of(const std::vector<Series>& forecasts) const {
    Series bg(config.intervals, 0.0);
    std::vector<bool> is_part(config.households, false);
    for (int id : participant_ids) is_part[id] = true;
    for (int m = 0; m < config.households; ++m) {
      if (is_part[m]) continue;
      for (int t = 0; t < config.intervals; ++t) bg[t] += forecasts[m][t];
    }
    return bg;
  }

  DayResult run_day(int day_index);
};

ScenarioEngine::ScenarioEngine(const ScenarioConfig& config)
    : impl_(std::make_unique<Impl>(config)) {}
ScenarioEngine::~ScenarioEngine() = default;
ScenarioEngine::ScenarioEngine(ScenarioEngine&&) noexcept = default;
ScenarioEngine& ScenarioEngine::operator=(ScenarioEngine&&) noexcept = default;

const ScenarioConfig& ScenarioEngine::config() const { return impl_->config; }
const std::vector<std::vector<Series>>& ScenarioEngine::demands() const {
  return impl_->demand_tensor;
}

DayResult ScenarioEngine::Impl::run_day(int day_index) {
  if (day_index < 0 || day_index >= static_cast<int>(demand_tensor.size()))
    throw DomainError("run_day: day index out of range");
  const std::vector<Series>& actual = demand_tensor[day_index];
  const int M = config.households;
  const int T = config.intervals;
  const size_t P = participant_ids.size();

  // forecasts submitted by households and the UC's independent estimates
  std::vector<Series> forecasts(M), uc_estimates(M);
  for (int m = 0; m < M; ++m) {
    Rng fr(substream_seed(config.seed, Stream::forecast, day_index, m));
    forecasts[m] = simulate_forecast(actual[m], config.forecast, fr);
    if (config.monitor) {
      Rng ur(substream_seed(config.seed, Stream::uc_estimate, day_index, m));
      uc_estimates[m] = simulate_forecast(actual[m], config.forecast, ur);
    }
  }

  const Series background = background_of(forecasts);
  const bool attacked = config.attack.has_value();

  // --- baseline lane: clean forecasts, plain scheduling game ---
  std::vector<Series> part_forecasts(P);
  for (size_t k = 0; k < P; ++k) part_forecasts[k] = forecasts[participant_ids[k]];

  const std::vector<BatterySpec> base_specs = specs_with_soc(soc_baseline);
  const GameResult base_game = play_scheduling_game(part_forecasts, base_specs,
                                                    config.tariff, background,
                                                    config.game);
  const DayExecution base_exec = execute_day(base_game.schedules, participant_ids,
                                             actual, base_specs, config.tariff);
  soc_baseline = base_exec.final_soc;

  DayResult result;
  result.day = day_index;
  result.par_baseline = base_exec.par;
  result.revenue_baseline = total_cost(aggregate_load(base_exec.loads), config.tariff);

  if (!attacked && !config.monitor) {
    // identical lanes; reuse the baseline run
    soc_main = soc_baseline;
    previous_schedules = base_game.schedules;
    has_history = true;
    result.converged = base_game.diag.converged;
    result.rounds = base_game.diag.rounds;
    result.par = base_exec.par;
    result.revenue = result.revenue_baseline;
    result.bills = base_exec.bills;
    return result;
  }

  // --- attacked lane ---
  std::vector<Series> received = forecasts;
  std::set<int> victims;
  if (attacked) {
    Rng vr(substream_seed(config.seed ^ config.attack->seed, Stream::victims,
                          day_index));
    AttackOutcome outcome = apply_attack(forecasts, *config.attack, neighborhood, vr);
    received = std::move(outcome.forecasts);
    victims = std::move(outcome.victims);
  }

  if (config.monitor)
    result.detected = detect(received, uc_estimates, *config.monitor).detected;

  const std::vector<BatterySpec> main_specs = specs_with_soc(soc_main);
  std::vector<Series> schedules;
  if (result.detected && config.mitigation != MitigationPolicy::none) {
    result.mitigated = true;
    schedules.resize(P);
    if (config.mitigation == MitigationPolicy::previous_day && has_history) {
      for (size_t k = 0; k < P; ++k)
        schedules[k] = previous_day_schedule({previous_schedules[k]}, main_specs[k]);
    } else {
      // local scheduling; also the day-0 fallback for previous_day
      for (size_t k = 0; k < P; ++k)
        schedules[k] = local_schedule(forecasts[participant_ids[k]], main_specs[k],
                                      config.tariff, config.game.projector);
    }
  } else {
    // the game is played on the forecasts as received (tampered for victims)
    std::vector<Series> game_inputs(P);
    for (size_t k = 0; k < P; ++k) game_inputs[k] = received[participant_ids[k]];
    const GameResult game = play_scheduling_game(game_inputs, main_specs, config.tariff,
                                                 background, config.game);
    schedules = game.schedules;
    result.converged = game.diag.converged;
    result.rounds = game.diag.rounds;
  }

  // attacker adapts: best response with their true forecast against what the
  // other households will actually present (true forecasts plus committed
  // schedules, all known to the attacker)
  if (attacked && attacker_index >= 0) {
    const int attacker_id = participant_ids[attacker_index];
    Series others(T, 0.0);
    std::vector<int> sched_index(M, -1);
    for (size_t k = 0; k < P; ++k) sched_index[participant_ids[k]] = static_cast<int>(k);
    for (int m = 0; m < M; ++m) {
      if (m == attacker_id) continue;
      for (int t = 0; t < T; ++t) {
        double load = forecasts[m][t];
        if (sched_index[m] >= 0) load += schedules[sched_index[m]][t];
        others[t] += std::max(load, 0.0);
      }
    }
    BatteryProjector projector(T, main_specs[attacker_index], config.game.projector);
    Series target(T);
    for (int t = 0; t < T; ++t) target[t] = -(others[t] + forecasts[attacker_id][t]);
    schedules[attacker_index] = projector.project(target);
  }

  const DayExecution exec =
      execute_day(schedules, participant_ids, actual, main_specs, config.tariff);
  soc_main = exec.final_soc;
  previous_schedules = schedules;
  has_history = true;

  result.par = exec.par;
  result.revenue = total_cost(aggregate_load(exec.loads), config.tariff);
  result.bills = exec.bills;
  result.revenue_change_pct = pct_change(result.revenue, result.revenue_baseline);
  if (neighborhood.attacker_id) {
    const int a = *neighborhood.attacker_id;
    result.attacker_bill_change_pct = pct_change(exec.bills[a], base_exec.bills[a]);
    double sum = 0.0;
    int counted = 0;
    for (int m = 0; m < M; ++m) {
      if (m == a) continue;
      sum += pct_change(exec.bills[m], base_exec.bills[m]);
      ++counted;
    }
    result.others_bill_change_pct = counted > 0 ? sum / counted : 0.0;
  }
  return result;
}

DayResult ScenarioEngine::run_day(int day_index) { return impl_->run_day(day_index); }

ScenarioResult ScenarioEngine::run() {
  ScenarioResult result;
  result.days.reserve(impl_->config.days);
  for (int day = 0; day < impl_->config.days; ++day)
    result.days.push_back(impl_->run_day(day));

  ScenarioSummary& s = result.summary;
  s.days = static_cast<int>(result.days.size());
  std::vector<double> par, par_base, att, oth, rev;
  int detected = 0, converged = 0, mitigated = 0;
  for (const DayResult& d : result.days) {
    par.push_back(d.par);
    par_base.push_back(d.par_baseline);
    att.push_back(d.attacker_bill_change_pct);
    oth.push_back(d.others_bill_change_pct);
    rev.push_back(d.revenue_change_pct);
    detected += d.detected ? 1 : 0;
    converged += d.converged ? 1 : 0;
    mitigated += d.mitigated ? 1 : 0;
  }
  s.par = summarize(par);
  s.par_baseline = summarize(par_base);
  s.attacker_bill_change_pct = summarize(att);
  s.others_bill_change_pct = summarize(oth);
  s.revenue_change_pct = summarize(rev);
  s.detection_rate = s.days ? static_cast<double>(detected) / s.days : 0.0;
  s.convergence_rate = s.days ? static_cast<double>(converged) / s.days : 0.0;
  s.mitigation_rate = s.days ? static_cast<double>(mitigated) / s.days : 0.0;
  return result;
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  ScenarioEngine engine(config);
  return engine.run();
}

// ---------------------------------------------------------------------------
// sweeps

AttackSpec attack_for_kind(const std::string& kind, const ScenarioConfig& base) {
  AttackSpec spec = base.attack.value_or(AttackSpec{});
  if (kind == "shift") {
    spec.kind = AttackKind::shift;
  } else if (kind == "flat") {
    spec.kind = AttackKind::scale;
    spec.tau = 0.0;
  } else if (kind == "mirror") {
    spec.kind = AttackKind::scale;
    spec.tau = -1.0;
  } else if (kind == "scale") {
    spec.kind = AttackKind::scale;
    if (base.attack && base.attack->kind == AttackKind::scale)
      spec.tau = base.attack->tau;
    else
      spec.tau = 2.0;
  } else {
    throw DomainError("unknown attack kind '" + kind +
                      "' (expected shift, flat, mirror or scale)");
  }
  return spec;
}

const std::vector<std::string>& SweepResult::metric_names() {
  static const std::vector<std::string> names = {
      "attacker_bill_change_pct", "others_bill_change_pct", "revenue_change_pct",
      "par"};
  return names;
}

std::string SweepResult::metric_csv(const std::string& metric) const {
  const MetricSummary SweepCell::*field = nullptr;
  if (metric == "attacker_bill_change_pct")
    field = &SweepCell::attacker_bill_change_pct;
  else if (metric == "others_bill_change_pct")
    field = &SweepCell::others_bill_change_pct;
  else if (metric == "revenue_change_pct")
    field = &SweepCell::revenue_change_pct;
  else if (metric == "par")
    field = &SweepCell::par;
  else
    throw DomainError("unknown sweep metric '" + metric + "'");

  std::string out = "kind,participation,rho,median,q1,q3\n";
  for (const SweepCell& cell : cells) {
    out += cell.kind + ",";
    append_csv_double(out, cell.participation);
    out += ",";
    append_csv_double(out, cell.rho);
    const MetricSummary& m = cell.*field;
    for (double v : {m.median, m.q1, m.q3}) {
      out += ",";
      append_csv_double(out, v);
    }
    out += "\n";
  }
  return out;
}

SweepResult sweep(const ScenarioConfig& base,
                  const std::vector<double>& participation_grid,
                  const std::vector<double>& rho_grid,
                  const std::vector<std::string>& kinds) {
  if (participation_grid.empty() || rho_grid.empty() || kinds.empty())
    throw DomainError("sweep: grids must be non-empty");
  SweepResult result;
  for (const std::string& kind : kinds) {
    for (double participation : participation_grid) {
      for (double rho : rho_grid) {
        ScenarioConfig cell_config = base;
        cell_config.participants.clear();
        cell_config.participation = participation;
        AttackSpec spec = attack_for_kind(kind, base);
        spec.rho = rho;
        cell_config.attack = spec;
        const ScenarioResult run = run_scenario(cell_config);
        SweepCell cell;
        cell.kind = kind;
        cell.participation = participation;
        cell.rho = rho;
        cell.attacker_bill_change_pct = run.summary.attacker_bill_change_pct;
        cell.others_bill_change_pct = run.summary.others_bill_change_pct;
        cell.revenue_change_pct = run.summary.revenue_change_pct;
        cell.par = run.summary.par;
        cell.full = run.summary;
        result.cells.push_back(std::move(cell));
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// defence reports

namespace {

nlohmann::json payoffs_json(const SecurityGamePayoffs& p) {
  return {{"c_mon", p.c_mon},           {"c_def", p.c_def},
          {"l_att_weak", p.l_att_weak}, {"l_att_strong", p.l_att_strong},
          {"c_att_weak", p.c_att_weak}, {"c_att_strong", p.c_att_strong}};
}

nlohmann::json solve_report(const SecurityGamePayoffs& payoffs) {
  nlohmann::json report;
  report["payoffs"] = payoffs_json(payoffs);
  const std::vector<std::string> violated = violated_assumptions(payoffs);
  report["assumptions"] = {{"hold", violated.empty()}, {"violated", violated}};
  if (!violated.empty()) {
    std::string msg = "security game assumptions violated:";
    for (const std::string& v : violated) msg += " [" + v + "]";
    throw AssumptionError(msg);
  }
  const GameCase game_case = classify_case(payoffs);
  report["delta"] = delta(payoffs);
  report["case"] = to_string(game_case);
  switch (game_case) {
    case GameCase::case1:
      report["advice"] = "do not monitor; a weak attack is the rational play";
      break;
    case GameCase::case2:
      report["advice"] = "no pure equilibrium; follow the mixed monitoring probabilities";
      break;
    case GameCase::case3:
      report["advice"] = "boundary case; not monitoring is optimal but non-strict";
      break;
  }
  const BimatrixGame game = build_game(payoffs);
  const std::vector<EquilibriumProfile> pure = pure_ne(game);
  const std::vector<EquilibriumProfile> all = mixed_ne(game);
  report["pure_equilibria"] = nlohmann::json::parse(equilibria_json(pure));
  report["equilibria"] = nlohmann::json::parse(equilibria_json(all));
  return report;
}

}  // namespace

std::string defence_report_from_stats(double gamma_strong, double rho_strong,
                                      double gamma_weak, double rho_weak,
                                      double lambda, double kappa, double c_mon,
                                      double c_def) {
  SecurityGamePayoffs payoffs =
      payoffs_from_stats(gamma_strong, rho_strong, gamma_weak, rho_weak, lambda, kappa);
  payoffs.c_mon = c_mon;
  payoffs.c_def = c_def;
  nlohmann::json report = solve_report(payoffs);
  const Case2Condition cond =
      case2_condition(gamma_strong, rho_strong, gamma_weak, rho_weak, kappa, lambda);
  report["case2_condition"] = {{"lhs", cond.lhs},
                               {"kappa_over_lambda", cond.kappa_over_lambda},
                               {"holds", cond.holds},
                               {"assumption_bound", cond.assumption_bound},
                               {"assumption_holds", cond.assumption_holds}};
  report["stats"] = {{"gamma_strong", gamma_strong}, {"rho_strong", rho_strong},
                     {"gamma_weak", gamma_weak},     {"rho_weak", rho_weak},
                     {"lambda", lambda},             {"kappa", kappa}};
  return report.dump(2);
}

std::string defence_report_from_payoffs(const SecurityGamePayoffs& payoffs) {
  return solve_report(payoffs).dump(2);
}

std::string detect_csv_report(const std::string& received_csv,
                              const std::string& estimates_csv,
                              const MonitoringStrategy& strategy) {
  const std::vector<std::vector<Series>> received = load_demands_csv(received_csv);
  const std::vector<std::vector<Series>> estimates = load_demands_csv(estimates_csv);
  if (received.size() != estimates.size())
    throw DomainError("detect: received and estimate files cover different day counts");
  nlohmann::json days = nlohmann::json::array();
  for (size_t day = 0; day < received.size(); ++day) {
    const DetectionResult r = detect(received[day], estimates[day], strategy);
    nlohmann::json j;
    j["day"] = day;
    j["strategy"] = to_string(r.level);
    j["threshold"] = r.threshold;
    j["detected"] = r.detected;
    j["discrepancy"] = r.discrepancy;
    if (r.level == MonitorLevel::deep_individual) {
      j["flagged"] = r.flagged;
      j["household_discrepancy"] = r.household_discrepancy;
    }
    days.push_back(j);
  }
  nlohmann::json report;
  report["days"] = days;
  return report.dump(2);
}

}  // namespace gridsec
