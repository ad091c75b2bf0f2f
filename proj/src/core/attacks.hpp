#pragma once

#include <set>

#include "rng.hpp"
#include "types.hpp"

namespace gridsec {

enum class AttackKind { shift, scale };

// An average-preserving corruption of victim forecasts. Shift rotates the
// profile by sigma intervals; scale stretches it around its daily mean by
// tau (tau=0 flat, tau=-1 mirror). rho is the targeted fraction of DSM
// participants.
struct AttackSpec {
  AttackKind kind = AttackKind::shift;
  int sigma = 4;       // shift amount, interpreted mod T; positive delays peaks
  double tau = 2.0;    // scale factor
  double rho = 1.0;    // targeted fraction of participants
  uint64_t seed = 0;   // victim-selection stream

  void validate() const {
    if (rho < 0.0 || rho > 1.0) throw DomainError("attack: rho outside [0,1]");
  }
};

// out[t] = in[(t - sigma) mod T]; the daily sum is preserved exactly.
Series shift_attack(const Series& forecast, int sigma);

// out[t] = max(0, mu + tau*(in[t] - mu)); the daily mean is preserved exactly
// unless clamping binds, in which case it weakly increases.
Series scale_attack(const Series& forecast, double tau);

// round(rho*N) participants drawn uniformly without replacement, never the
// attacker. Counts above N-1 are capped.
std::set<int> select_victims(const NeighborhoodConfig& config, double rho, Rng& rng);

struct AttackOutcome {
  std::vector<Series> forecasts;  // same indexing as the input
  std::set<int> victims;
  double sum_before = 0.0;        // aggregated daily sum over all profiles
  double sum_after = 0.0;         // differs only when scale clamping binds
};

// Applies the attack to the victims' forecasts and leaves everyone else,
// including the attacker's own submission, untouched. `forecasts` is indexed
// by household id over the whole neighborhood.
AttackOutcome apply_attack(const std::vector<Series>& forecasts, const AttackSpec& spec,
                           const NeighborhoodConfig& config, Rng& rng);

}  // namespace gridsec
