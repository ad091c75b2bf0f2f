#include "monitor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gridsec {

namespace {

Series sum_profiles(const std::vector<Series>& profiles) {
  Series total;
  if (profiles.empty()) return total;
  total.assign(profiles.front().size(), 0.0);
  for (const Series& p : profiles) {
    if (p.size() != total.size()) throw DomainError("detect: ragged profile set");
    for (size_t t = 0; t < p.size(); ++t) total[t] += p[t];
  }
  return total;
}

// mean (or max) relative deviation of `received` from `reference`, skipping
// zero-reference intervals; mirrors the forecast-sim MAPE rule.
double profile_discrepancy(const Series& received, const Series& reference,
                           bool per_interval_max) {
  if (received.size() != reference.size()) throw DomainError("detect: length mismatch");
  double acc = 0.0;
  size_t counted = 0;
  for (size_t t = 0; t < reference.size(); ++t) {
    if (reference[t] == 0.0) continue;
    const double rel = std::abs(received[t] - reference[t]) / reference[t];
    if (per_interval_max)
      acc = std::max(acc, rel);
    else
      acc += rel;
    ++counted;
  }
  if (counted == 0) throw DomainError("detect: reference profile is all zero");
  return per_interval_max ? acc : acc / static_cast<double>(counted);
}

}  // namespace

const char* to_string(MonitorLevel level) {
  switch (level) {
    case MonitorLevel::average_amount: return "average_amount";
    case MonitorLevel::deep_aggregated: return "deep_aggregated";
    case MonitorLevel::deep_individual: return "deep_individual";
  }
  return "unknown";
}

DetectionResult detect(const std::vector<Series>& received,
                       const std::vector<Series>& uc_estimates,
                       const MonitoringStrategy& strategy) {
  strategy.validate();
  if (received.size() != uc_estimates.size())
    throw DomainError("detect: household sets differ");
  if (received.empty()) throw DomainError("detect: empty profile set");

  DetectionResult result;
  result.level = strategy.level;
  result.threshold = strategy.effective_threshold();

  switch (strategy.level) {
    case MonitorLevel::average_amount: {
      const Series recv_total = sum_profiles(received);
      const Series uc_total = sum_profiles(uc_estimates);
      const double recv_sum = std::accumulate(recv_total.begin(), recv_total.end(), 0.0);
      const double uc_sum = std::accumulate(uc_total.begin(), uc_total.end(), 0.0);
      if (uc_sum <= 0.0) throw DomainError("detect: zero UC estimate total");
      result.discrepancy = std::abs(recv_sum - uc_sum) / uc_sum;
      break;
    }
    case MonitorLevel::deep_aggregated: {
      result.discrepancy = profile_discrepancy(sum_profiles(received),
                                               sum_profiles(uc_estimates),
                                               strategy.per_interval_max);
      break;
    }
    case MonitorLevel::deep_individual: {
      result.household_discrepancy.resize(received.size());
      for (size_t h = 0; h < received.size(); ++h) {
        const double d = profile_discrepancy(received[h], uc_estimates[h],
                                             strategy.per_interval_max);
        result.household_discrepancy[h] = d;
        if (d > result.threshold) result.flagged.push_back(static_cast<int>(h));
        result.discrepancy = std::max(result.discrepancy, d);
      }
      break;
    }
  }
  result.detected = result.discrepancy > result.threshold;
  return result;
}

double max_undetected_rho(const AttackSpec& attack, const MonitoringStrategy& strategy,
                          const MonitorCorpus& corpus,
                          const std::vector<double>& rho_grid) {
  if (rho_grid.empty()) throw DomainError("max_undetected_rho: empty rho grid");
  corpus.neighborhood.validate();
  corpus.forecast.validate();
  const size_t days = corpus.demands.size();
  if (days == 0) throw DomainError("max_undetected_rho: empty corpus");

  double best = -1.0;
  for (double rho : rho_grid) {
    size_t detected_days = 0;
    for (size_t day = 0; day < days; ++day) {
      const std::vector<Series>& actual = corpus.demands[day];
      std::vector<Series> received(actual.size());
      std::vector<Series> estimates(actual.size());
      for (size_t h = 0; h < actual.size(); ++h) {
        Rng fr(substream_seed(corpus.seed, Stream::forecast, day, h));
        Rng ur(substream_seed(corpus.seed, Stream::uc_estimate, day, h));
        received[h] = simulate_forecast(actual[h], corpus.forecast, fr);
        estimates[h] = simulate_forecast(actual[h], corpus.forecast, ur);
      }
      AttackSpec spec = attack;
      spec.rho = rho;
      Rng vr(substream_seed(corpus.seed ^ spec.seed, Stream::victims, day));
      const AttackOutcome tampered = apply_attack(received, spec, corpus.neighborhood, vr);
      if (detect(tampered.forecasts, estimates, strategy).detected) ++detected_days;
    }
    const bool median_undetected = 2 * detected_days <= days;
    if (median_undetected) best = std::max(best, rho);
  }
  return best < 0.0 ? 0.0 : best;
}

}  // namespace gridsec
