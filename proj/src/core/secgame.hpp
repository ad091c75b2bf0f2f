#pragma once

#include <array>
#include <string>
#include <vector>

#include "rng.hpp"
#include "types.hpp"

namespace gridsec {

// The six payoff scalars of the augmented security game between the utility
// company (monitor / don't monitor) and the attacker (weak attack, strong
// attack, no attack). Attacker benefits equal the defender's losses.
struct SecurityGamePayoffs {
  double c_mon = 0.0;         // cost of deep aggregated monitoring
  double c_def = 0.0;         // cost of the mitigating action
  double l_att_weak = 0.0;    // UC loss from an (undetectable) weak attack
  double l_att_strong = 0.0;  // UC loss from an unmitigated strong attack
  double c_att_weak = 0.0;    // attacker's cost of the weak attack
  double c_att_strong = 0.0;  // attacker's cost of the strong attack
};

// Names of the violated game assumptions, empty when the instance is valid.
//   weak_net_benefit:        c_att_weak < l_att_weak
//   strong_attack_costlier:  c_att_strong > c_att_weak
//   strong_attack_worse:     l_att_strong > l_att_weak
//   prevention_cheaper:      c_mon + c_def < l_att_strong
//   strong_net_benefit:      l_att_strong - c_att_strong > 0
std::vector<std::string> violated_assumptions(const SecurityGamePayoffs& p);

// Defender rows: 0 = mon, 1 = -mon. Attacker columns: 0 = att_weak (att°),
// 1 = att_strong (att), 2 = no_att (-att).
struct BimatrixGame {
  std::array<std::array<double, 3>, 2> defender{};  // A
  std::array<std::array<double, 3>, 2> attacker{};  // B

  double scale() const;  // max |entry|, floor 1
};

extern const std::array<const char*, 2> kDefenderLabels;
extern const std::array<const char*, 3> kAttackerLabels;

// Normal form of the augmented security game.
BimatrixGame build_game(const SecurityGamePayoffs& p);

// Second-order difference: weak-attack net benefit minus strong-attack net
// benefit for the attacker. Its sign selects the equilibrium structure.
double delta(const SecurityGamePayoffs& p);

enum class GameCase {
  case1,  // delta > 0: unique strict pure NE (-mon, att_weak)
  case2,  // delta < 0: no pure NE, mixed equilibria only
  case3,  // delta = 0: unique pure non-strict NE (-mon, att_weak)
};

const char* to_string(GameCase c);

// Classification per the propositions; refuses instances that violate the
// game assumptions. The tolerance band around delta == 0 is relative to the
// payoff scale.
GameCase classify_case(const SecurityGamePayoffs& p, double tol_rel = 1e-9);

struct EquilibriumProfile {
  enum class Kind { pure_strict, pure_non_strict, mixed };

  std::array<double, 2> defender{};  // (p_mon, p_-mon)
  std::array<double, 3> attacker{};  // (p_att_weak, p_att_strong, p_no_att)
  Kind kind = Kind::mixed;
  double defender_payoff = 0.0;
  double attacker_payoff = 0.0;
  // largest gain any unilateral pure deviation would achieve (<= tol for a
  // verified equilibrium; negative means every deviation strictly loses)
  double certificate_gap = 0.0;
};

const char* to_string(EquilibriumProfile::Kind k);

// All pure strategy profiles where neither player gains from a unilateral
// deviation, marked strict / non-strict.
std::vector<EquilibriumProfile> pure_ne(const BimatrixGame& game);

// Exact support enumeration over every defender/attacker support pair: solves
// the indifference systems, keeps solutions with valid probabilities and a
// best-response certificate, merges duplicates. Pure equilibria appear as
// size-1 supports. Degenerate (singular) supports are skipped.
std::vector<EquilibriumProfile> mixed_ne(const BimatrixGame& game);

// Attack losses/costs from simulation statistics: losses are bill-change
// magnitudes scaled by the bill amount lambda, costs scale linearly with the
// targeted fraction at kappa per unit. c_mon / c_def are left at zero.
SecurityGamePayoffs payoffs_from_stats(double gamma_strong, double rho_strong,
                                       double gamma_weak, double rho_weak,
                                       double lambda, double kappa);

struct Case2Condition {
  double lhs = 0.0;               // (gamma_weak - gamma_strong)/(rho_weak - rho_strong)
  double kappa_over_lambda = 0.0;
  bool holds = false;             // lhs > kappa/lambda  <=>  delta < 0
  double assumption_bound = 0.0;  // gamma_weak / rho_weak
  bool assumption_holds = false;  // assumption_bound > kappa/lambda
};

Case2Condition case2_condition(double gamma_strong, double rho_strong,
                               double gamma_weak, double rho_weak, double kappa,
                               double lambda);

// Flat text record of a game instance (six scalars plus strategy labels).
std::string payoffs_to_text(const SecurityGamePayoffs& p);
SecurityGamePayoffs payoffs_from_text(const std::string& text);

// JSON array of equilibria records (probabilities, kind, payoffs,
// certificates, joint probability table).
std::string equilibria_json(const std::vector<EquilibriumProfile>& profiles);

// Draws a payoff vector satisfying every game assumption with the delta sign
// of the requested case. Used by the propositions test-suites and the
// sampling report below.
SecurityGamePayoffs sample_payoffs(GameCase target, Rng& rng);

// Fraction of sampled assumption-satisfying Case-2 instances whose mixed NE
// puts at least `threshold` probability on monitoring.
double monitoring_probability_report(int samples, double threshold, Rng& rng);

}  // namespace gridsec
