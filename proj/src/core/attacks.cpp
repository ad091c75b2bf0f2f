#include "attacks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gridsec {

Series shift_attack(const Series& forecast, int sigma) {
  const int T = static_cast<int>(forecast.size());
  if (T == 0) return {};
  int s = sigma % T;
  if (s < 0) s += T;
  Series out(forecast.size());
  for (int t = 0; t < T; ++t) out[t] = forecast[(t - s + T) % T];
  return out;
}

Series scale_attack(const Series& forecast, double tau) {
  if (forecast.empty()) return {};
  const double mu =
      std::accumulate(forecast.begin(), forecast.end(), 0.0) / forecast.size();
  Series out(forecast.size());
  for (size_t t = 0; t < forecast.size(); ++t)
    out[t] = std::max(0.0, mu + tau * (forecast[t] - mu));
  return out;
}

std::set<int> select_victims(const NeighborhoodConfig& config, double rho, Rng& rng) {
  config.validate();
  if (!config.attacker_id) throw DomainError("select_victims: attacker_id not set");
  if (rho < 0.0 || rho > 1.0) throw DomainError("select_victims: rho outside [0,1]");
  std::vector<int> pool;
  for (int p : config.participants)
    if (p != *config.attacker_id) pool.push_back(p);
  std::sort(pool.begin(), pool.end());

  const int N = config.participant_count();
  long count = std::lround(rho * N);
  count = std::min<long>(count, static_cast<long>(pool.size()));  // cap at N-1

  // partial Fisher-Yates
  std::set<int> victims;
  for (long k = 0; k < count; ++k) {
    const size_t j = k + rng.uniform_below(pool.size() - k);
    std::swap(pool[k], pool[j]);
    victims.insert(pool[k]);
  }
  return victims;
}

AttackOutcome apply_attack(const std::vector<Series>& forecasts, const AttackSpec& spec,
                           const NeighborhoodConfig& config, Rng& rng) {
  spec.validate();
  if (static_cast<int>(forecasts.size()) != config.households)
    throw DomainError("apply_attack: one forecast per household required");

  AttackOutcome out;
  out.forecasts = forecasts;
  out.victims = select_victims(config, spec.rho, rng);
  for (int v : out.victims) {
    out.forecasts[v] = spec.kind == AttackKind::shift
                           ? shift_attack(forecasts[v], spec.sigma)
                           : scale_attack(forecasts[v], spec.tau);
  }
  for (const Series& f : forecasts)
    out.sum_before = std::accumulate(f.begin(), f.end(), out.sum_before);
  for (const Series& f : out.forecasts)
    out.sum_after = std::accumulate(f.begin(), f.end(), out.sum_after);
  return out;
}

}  // namespace gridsec
