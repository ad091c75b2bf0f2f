#include "scheduler.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gridsec {

namespace {

double clamp_to(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

}  // namespace

// QP data for: minimize ||c - d - z||^2 + reg*(||c||^2 + ||d||^2)
// subject to 0 <= c <= c_max, 0 <= d <= d_max, 0 <= soc_t <= capacity,
// where soc is linear in (c, d). Variables x = (c_0..c_{T-1}, d_0..d_{T-1}).
struct BatteryProjector::Impl {
  int T = 0;
  BatterySpec spec;
  ProjectorOptions opt;

  Eigen::MatrixXd A;    // (3T x 2T): box rows then SOC rows
  Eigen::MatrixXd AtA;  // cached for refactorization on rho changes
  Eigen::MatrixXd Q;    // objective Hessian
  Eigen::VectorXd lo, hi;

  Series project(const Series& target) const;
};

BatteryProjector::BatteryProjector(int intervals, const BatterySpec& spec,
                                   const ProjectorOptions& options)
    : impl_(std::make_unique<Impl>()) {
  if (intervals <= 0) throw DomainError("projector: interval count must be positive");
  spec.validate();
  Impl& im = *impl_;
  im.T = intervals;
  im.spec = spec;
  im.opt = options;

  const int T = intervals;
  const int n = 2 * T;
  const int m = 3 * T;
  im.A.setZero(m, n);
  im.lo.resize(m);
  im.hi.resize(m);

  // box rows
  for (int t = 0; t < T; ++t) {
    im.A(t, t) = 1.0;
    im.lo(t) = 0.0;
    im.hi(t) = spec.max_charge;
    im.A(T + t, T + t) = 1.0;
    im.lo(T + t) = 0.0;
    im.hi(T + t) = spec.max_discharge;
  }
  // SOC rows: soc_{k+1} = keep^{k+1} soc0 + sum_{s<=k} keep^{k-s} (eta_c c_s - d_s/eta_d)
  const double keep = 1.0 - spec.self_discharge;
  for (int k = 0; k < T; ++k) {
    const int row = 2 * T + k;
    double w = 1.0;
    for (int s = k; s >= 0; --s) {
      im.A(row, s) = w * spec.charge_efficiency;
      im.A(row, T + s) = -w / spec.discharge_efficiency;
      w *= keep;
    }
    const double carried = spec.initial_soc * std::pow(keep, k + 1);
    im.lo(row) = -carried;
    im.hi(row) = spec.capacity - carried;
  }
  im.AtA = im.A.transpose() * im.A;

  im.Q.setZero(n, n);
  for (int t = 0; t < T; ++t) {
    im.Q(t, t) = 2.0 + 2.0 * options.reg;
    im.Q(T + t, T + t) = 2.0 + 2.0 * options.reg;
    im.Q(t, T + t) = -2.0;
    im.Q(T + t, t) = -2.0;
  }
}

BatteryProjector::~BatteryProjector() = default;
BatteryProjector::BatteryProjector(BatteryProjector&&) noexcept = default;
BatteryProjector& BatteryProjector::operator=(BatteryProjector&&) noexcept = default;

int BatteryProjector::intervals() const { return impl_->T; }
const BatterySpec& BatteryProjector::spec() const { return impl_->spec; }

Series BatteryProjector::Impl::project(const Series& target) const {
  const int n = 2 * T;
  const int m = 3 * T;

  Eigen::VectorXd q(n);
  for (int t = 0; t < T; ++t) {
    q(t) = -2.0 * target[t];
    q(T + t) = 2.0 * target[t];
  }

  double rho = opt.rho;
  Eigen::LLT<Eigen::MatrixXd> kkt;
  auto factorize = [&]() {
    Eigen::MatrixXd K = Q + rho * AtA;
    K.diagonal().array() += opt.sigma;
    kkt.compute(K);
  };
  factorize();

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd zv = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < m; ++i) zv(i) = clamp_to(0.0, lo(i), hi(i));
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

  const double qscale = 1.0 + q.cwiseAbs().maxCoeff();
  Eigen::VectorXd ax = Eigen::VectorXd::Zero(m);

  for (int iter = 1; iter <= opt.max_iter; ++iter) {
    const Eigen::VectorXd rhs = opt.sigma * x - q + A.transpose() * (rho * zv - y);
    const Eigen::VectorXd xh = kkt.solve(rhs);
    const Eigen::VectorXd axh = A * xh;

    const Eigen::VectorXd zeta = opt.alpha * axh + (1.0 - opt.alpha) * zv;
    Eigen::VectorXd zn = zeta + y / rho;
    for (int i = 0; i < m; ++i) zn(i) = clamp_to(zn(i), lo(i), hi(i));
    y += rho * (zeta - zn);
    x = opt.alpha * xh + (1.0 - opt.alpha) * x;
    zv = zn;

    if (iter % 10 == 0 || iter == opt.max_iter) {
      ax.noalias() = A * x;
      const double r_prim = (ax - zv).cwiseAbs().maxCoeff();
      const double r_dual =
          (Q * x + q + A.transpose() * y).cwiseAbs().maxCoeff();
      const double ax_scale = 1.0 + ax.cwiseAbs().maxCoeff();
      if (r_prim <= opt.eps * ax_scale && r_dual <= opt.eps * qscale) break;
      if (iter % opt.adapt_every == 0) {
        // residual balancing
        const double ratio = std::sqrt((r_prim / ax_scale + 1e-300) /
                                       (r_dual / qscale + 1e-300));
        const double rho_new = clamp_to(rho * ratio, 1e-4, 1e6);
        if (rho_new > 1.25 * rho || rho_new < rho / 1.25) {
          rho = rho_new;
          factorize();
        }
      }
    }
  }

  Series actions(T, 0.0);
  for (int t = 0; t < T; ++t) {
    double a = x(t) - x(T + t);
    if (std::abs(a) < 1e-12) a = 0.0;
    actions[t] = a;
  }
  // repair residual constraint round-off so the result is always feasible
  return truncate_to_feasible(actions, spec);
}

Series BatteryProjector::project(const Series& target) const {
  if (static_cast<int>(target.size()) != impl_->T)
    throw DomainError("projector: target length mismatch");
  return impl_->project(target);
}

double bill_against_total(const Series& own, const Series& total,
                          const TariffParams& tariff) {
  if (own.size() != total.size())
    throw DomainError("bill_against_total: length mismatch");
  double own_sum = 0.0, grand = 0.0, cost = 0.0;
  for (size_t t = 0; t < total.size(); ++t) {
    own_sum += own[t];
    grand += total[t];
    cost += unit_cost(std::max(total[t], 0.0), tariff);
  }
  if (grand <= 0.0) throw DomainError("bill_against_total: zero grid total");
  return own_sum / grand * cost;
}

namespace {

Series best_response_impl(const BatteryProjector& projector, const Series& own_forecast,
                          const Series& others_aggregate) {
  const int T = projector.intervals();
  if (static_cast<int>(own_forecast.size()) != T ||
      static_cast<int>(others_aggregate.size()) != T)
    throw DomainError("best_response: profile length mismatch");
  Series target(T);
  for (int t = 0; t < T; ++t) target[t] = -(others_aggregate[t] + own_forecast[t]);
  return projector.project(target);
}

}  // namespace

Series best_response(const Series& own_forecast, const Series& others_aggregate,
                     const BatterySpec& spec, const TariffParams& tariff,
                     const ProjectorOptions& options) {
  tariff.validate();
  for (double v : others_aggregate)
    if (v < 0.0) throw DomainError("best_response: negative others_aggregate entry");
  check_profile(own_forecast, static_cast<int>(own_forecast.size()), "own forecast");
  BatteryProjector projector(static_cast<int>(own_forecast.size()), spec, options);
  return best_response_impl(projector, own_forecast, others_aggregate);
}

Series local_schedule(const Series& own_forecast, const BatterySpec& spec,
                      const TariffParams& tariff, const ProjectorOptions& options) {
  return best_response(own_forecast, Series(own_forecast.size(), 0.0), spec, tariff,
                       options);
}

Series previous_day_schedule(const std::vector<Series>& history,
                             const BatterySpec& spec) {
  if (history.empty())
    throw DomainError("previous_day_schedule: no prior day available");
  return truncate_to_feasible(history.back(), spec);
}

GameResult play_scheduling_game(const std::vector<Series>& forecasts,
                                const std::vector<BatterySpec>& specs,
                                const TariffParams& tariff,
                                const Series& background,
                                const GameOptions& options) {
  tariff.validate();
  const int players = static_cast<int>(forecasts.size());
  if (players == 0) throw DomainError("scheduling game: no participants");
  if (specs.size() != forecasts.size())
    throw DomainError("scheduling game: one battery spec per participant required");
  const int T = static_cast<int>(forecasts.front().size());
  for (const Series& f : forecasts) check_profile(f, T, "forecast");
  Series bg = background.empty() ? Series(T, 0.0) : background;
  check_profile(bg, T, "background load");

  GameResult result;
  result.schedules.assign(players, Series(T, 0.0));

  // grid total on forecasts, updated incrementally as schedules move
  Series total = bg;
  for (const Series& f : forecasts)
    for (int t = 0; t < T; ++t) total[t] += f[t];

  std::vector<BatteryProjector> projectors;
  projectors.reserve(players);
  for (int i = 0; i < players; ++i)
    projectors.emplace_back(T, specs[i], options.projector);

  // per-player thresholds from the zero-schedule baseline bills
  std::vector<double> epsilon(players, 0.0);
  for (int i = 0; i < players; ++i) {
    const double base = bill_against_total(forecasts[i], total, tariff);
    epsilon[i] = std::max(options.epsilon_rel * base, 1e-12);
  }

  Series own_load(T), others(T), candidate_load(T), new_total(T);
  for (int round = 1; round <= options.max_rounds; ++round) {
    double round_best_improvement = 0.0;
    bool any_accepted = false;
    for (int i = 0; i < players; ++i) {
      for (int t = 0; t < T; ++t) {
        own_load[t] = forecasts[i][t] + result.schedules[i][t];
        others[t] = total[t] - own_load[t];
      }
      const double old_bill = bill_against_total(own_load, total, tariff);
      const Series cand = best_response_impl(projectors[i], forecasts[i], others);
      for (int t = 0; t < T; ++t) {
        candidate_load[t] = forecasts[i][t] + cand[t];
        new_total[t] = others[t] + candidate_load[t];
      }
      const double new_bill = bill_against_total(candidate_load, new_total, tariff);
      const double improvement = old_bill - new_bill;
      if (improvement > epsilon[i]) {
        result.schedules[i] = cand;
        total = new_total;
        any_accepted = true;
        ++result.diag.accepted_steps;
        round_best_improvement = std::max(round_best_improvement, improvement);
      }
    }
    result.diag.rounds = round;
    result.diag.last_round_improvement = round_best_improvement;
    if (!any_accepted) {
      result.diag.converged = true;
      break;
    }
  }
  return result;
}

std::vector<double> nash_gap(const std::vector<Series>& forecasts,
                             const std::vector<BatterySpec>& specs,
                             const TariffParams& tariff,
                             const Series& background,
                             const std::vector<Series>& schedules,
                             const ProjectorOptions& options) {
  const int players = static_cast<int>(forecasts.size());
  const int T = players > 0 ? static_cast<int>(forecasts.front().size()) : 0;
  Series bg = background.empty() ? Series(T, 0.0) : background;
  Series total = bg;
  for (int i = 0; i < players; ++i)
    for (int t = 0; t < T; ++t) total[t] += forecasts[i][t] + schedules[i][t];

  std::vector<double> gaps(players, 0.0);
  Series own_load(T), others(T), candidate_load(T), new_total(T);
  for (int i = 0; i < players; ++i) {
    for (int t = 0; t < T; ++t) {
      own_load[t] = forecasts[i][t] + schedules[i][t];
      others[t] = total[t] - own_load[t];
    }
    const double old_bill = bill_against_total(own_load, total, tariff);
    BatteryProjector projector(T, specs[i], options);
    const Series cand = best_response_impl(projector, forecasts[i], others);
    for (int t = 0; t < T; ++t) {
      candidate_load[t] = forecasts[i][t] + cand[t];
      new_total[t] = others[t] + candidate_load[t];
    }
    const double new_bill = bill_against_total(candidate_load, new_total, tariff);
    gaps[i] = std::max(0.0, old_bill - new_bill);
  }
  return gaps;
}

DayExecution execute_day(const std::vector<Series>& schedules,
                         const std::vector<int>& participant_ids,
                         const std::vector<Series>& actual_demands,
                         const std::vector<BatterySpec>& specs,
                         const TariffParams& tariff) {
  tariff.validate();
  if (schedules.size() != participant_ids.size() || specs.size() != schedules.size())
    throw DomainError("execute_day: schedules, ids and specs must align");
  const int M = static_cast<int>(actual_demands.size());
  if (M == 0) throw DomainError("execute_day: no households");
  const int T = static_cast<int>(actual_demands.front().size());
  for (const Series& d : actual_demands) check_profile(d, T, "actual demand");

  std::vector<int> participant_index(M, -1);
  for (size_t k = 0; k < participant_ids.size(); ++k) {
    const int id = participant_ids[k];
    if (id < 0 || id >= M) throw DomainError("execute_day: participant id out of range");
    participant_index[id] = static_cast<int>(k);
  }

  DayExecution out;
  out.loads.assign(M, Series(T, 0.0));
  out.final_soc.assign(participant_ids.size(), 0.0);
  out.executed_actions.assign(participant_ids.size(), Series(T, 0.0));

  for (int m = 0; m < M; ++m) {
    const int k = participant_index[m];
    if (k < 0) {
      out.loads[m] = actual_demands[m];
      continue;
    }
    const BatterySpec& spec = specs[k];
    spec.validate();
    const Series& plan = schedules[k];
    if (static_cast<int>(plan.size()) != T)
      throw DomainError("execute_day: schedule length mismatch");
    double soc = spec.initial_soc;
    for (int t = 0; t < T; ++t) {
      const double demand = actual_demands[m][t];
      const double decayed = soc * (1.0 - spec.self_discharge);
      double executed = 0.0;
      if (plan[t] >= 0.0) {
        // charge, truncated at capacity (execution SOC may run above plan)
        const double room = std::max(0.0, spec.capacity - decayed);
        executed = std::min(plan[t], room / spec.charge_efficiency);
        soc = decayed + spec.charge_efficiency * executed;
        out.loads[m][t] = demand + executed;
      } else {
        // discharge: limited by stored energy and by what the demand absorbs
        const double available = decayed * spec.discharge_efficiency;
        double delivered = std::min(-plan[t], available);
        delivered = std::min(delivered, demand);  // no grid export
        soc = decayed - delivered / spec.discharge_efficiency;
        executed = -delivered;
        out.loads[m][t] = demand - delivered;
      }
      out.executed_actions[k][t] = executed;
    }
    out.final_soc[k] = soc;
  }

  out.bills = all_bills(out.loads, tariff);
  out.par = par(aggregate_load(out.loads));
  return out;
}

}  // namespace gridsec
