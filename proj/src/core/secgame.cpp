#include "secgame.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace gridsec {

const std::array<const char*, 2> kDefenderLabels = {"mon", "-mon"};
const std::array<const char*, 3> kAttackerLabels = {"att_weak", "att_strong", "no_att"};

std::vector<std::string> violated_assumptions(const SecurityGamePayoffs& p) {
  std::vector<std::string> out;
  if (p.c_mon < 0.0 || p.c_def < 0.0 || p.l_att_weak <= 0.0 || p.l_att_strong <= 0.0 ||
      p.c_att_weak <= 0.0 || p.c_att_strong <= 0.0)
    out.push_back("positivity: costs >= 0, losses and attack costs > 0");
  if (!(p.c_att_weak < p.l_att_weak))
    out.push_back("weak_net_benefit: c_att_weak < l_att_weak");
  if (!(p.c_att_strong > p.c_att_weak))
    out.push_back("strong_attack_costlier: c_att_strong > c_att_weak");
  if (!(p.l_att_strong > p.l_att_weak))
    out.push_back("strong_attack_worse: l_att_strong > l_att_weak");
  if (!(p.c_mon + p.c_def < p.l_att_strong))
    out.push_back("prevention_cheaper: c_mon + c_def < l_att_strong");
  if (!(p.l_att_strong - p.c_att_strong > 0.0))
    out.push_back("strong_net_benefit: l_att_strong - c_att_strong > 0");
  return out;
}

double BimatrixGame::scale() const {
  double s = 1.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      s = std::max({s, std::abs(defender[i][j]), std::abs(attacker[i][j])});
  return s;
}

BimatrixGame build_game(const SecurityGamePayoffs& p) {
  BimatrixGame g;
  // row mon
  g.defender[0] = {-p.c_mon - p.l_att_weak, -p.c_mon - p.c_def, -p.c_mon};
  g.attacker[0] = {p.l_att_weak - p.c_att_weak, -p.c_att_strong, 0.0};
  // row -mon
  g.defender[1] = {-p.l_att_weak, -p.l_att_strong, 0.0};
  g.attacker[1] = {p.l_att_weak - p.c_att_weak, p.l_att_strong - p.c_att_strong, 0.0};
  return g;
}

double delta(const SecurityGamePayoffs& p) {
  return (p.l_att_weak - p.c_att_weak) - (p.l_att_strong - p.c_att_strong);
}

const char* to_string(GameCase c) {
  switch (c) {
    case GameCase::case1: return "case1";
    case GameCase::case2: return "case2";
    case GameCase::case3: return "case3";
  }
  return "unknown";
}

GameCase classify_case(const SecurityGamePayoffs& p, double tol_rel) {
  const std::vector<std::string> violated = violated_assumptions(p);
  if (!violated.empty()) {
    std::string msg = "security game assumptions violated:";
    for (const std::string& v : violated) msg += " [" + v + "]";
    throw AssumptionError(msg);
  }
  const double scale =
      std::max({1.0, p.c_mon, p.c_def, p.l_att_weak, p.l_att_strong, p.c_att_weak,
                p.c_att_strong});
  const double tol = tol_rel * scale;
  const double d = delta(p);
  if (d > tol) return GameCase::case1;
  if (d < -tol) return GameCase::case2;
  return GameCase::case3;
}

const char* to_string(EquilibriumProfile::Kind k) {
  switch (k) {
    case EquilibriumProfile::Kind::pure_strict: return "pure-strict";
    case EquilibriumProfile::Kind::pure_non_strict: return "pure-non-strict";
    case EquilibriumProfile::Kind::mixed: return "mixed";
  }
  return "unknown";
}

namespace {

// expected payoffs and the worst unilateral-deviation gain for a profile
struct Certificate {
  double defender_payoff = 0.0;
  double attacker_payoff = 0.0;
  double gap = 0.0;
};

Certificate certify(const BimatrixGame& g, const std::array<double, 2>& x,
                    const std::array<double, 3>& y) {
  Certificate c;
  std::array<double, 2> row_payoff{};  // A y
  std::array<double, 3> col_payoff{};  // x^T B
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) {
      row_payoff[i] += g.defender[i][j] * y[j];
      col_payoff[j] += g.attacker[i][j] * x[i];
    }
  for (int i = 0; i < 2; ++i) c.defender_payoff += x[i] * row_payoff[i];
  for (int j = 0; j < 3; ++j) c.attacker_payoff += y[j] * col_payoff[j];
  double gap = -1e300;
  for (int i = 0; i < 2; ++i) gap = std::max(gap, row_payoff[i] - c.defender_payoff);
  for (int j = 0; j < 3; ++j) gap = std::max(gap, col_payoff[j] - c.attacker_payoff);
  c.gap = gap;
  return c;
}

EquilibriumProfile make_profile(const BimatrixGame& g, const std::array<double, 2>& x,
                                const std::array<double, 3>& y) {
  EquilibriumProfile p;
  p.defender = x;
  p.attacker = y;
  const Certificate c = certify(g, x, y);
  p.defender_payoff = c.defender_payoff;
  p.attacker_payoff = c.attacker_payoff;
  p.certificate_gap = c.gap;
  return p;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool same_profile(const EquilibriumProfile& a, const EquilibriumProfile& b) {
  for (int i = 0; i < 2; ++i)
    if (!near(a.defender[i], b.defender[i], 1e-9)) return false;
  for (int j = 0; j < 3; ++j)
    if (!near(a.attacker[j], b.attacker[j], 1e-9)) return false;
  return true;
}

void add_unique(std::vector<EquilibriumProfile>& out, const EquilibriumProfile& p) {
  for (const EquilibriumProfile& q : out)
    if (same_profile(p, q)) return;
  out.push_back(p);
}

// attacker's expected payoff per column when the defender plays (p, 1-p)
std::array<double, 3> attacker_payoffs_at(const BimatrixGame& g, double p) {
  std::array<double, 3> out{};
  for (int j = 0; j < 3; ++j)
    out[j] = p * g.attacker[0][j] + (1.0 - p) * g.attacker[1][j];
  return out;
}

}  // namespace

std::vector<EquilibriumProfile> pure_ne(const BimatrixGame& g) {
  std::vector<EquilibriumProfile> out;
  const double tol = 1e-12 * g.scale();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double row_dev = g.defender[1 - i][j] - g.defender[i][j];
      double col_dev = -1e300;
      for (int k = 0; k < 3; ++k)
        if (k != j) col_dev = std::max(col_dev, g.attacker[i][k] - g.attacker[i][j]);
      if (row_dev > tol || col_dev > tol) continue;
      std::array<double, 2> x{};
      std::array<double, 3> y{};
      x[i] = 1.0;
      y[j] = 1.0;
      EquilibriumProfile p = make_profile(g, x, y);
      const bool strict = row_dev < -tol && col_dev < -tol;
      p.kind = strict ? EquilibriumProfile::Kind::pure_strict
                      : EquilibriumProfile::Kind::pure_non_strict;
      out.push_back(p);
    }
  }
  return out;
}

std::vector<EquilibriumProfile> mixed_ne(const BimatrixGame& g) {
  std::vector<EquilibriumProfile> out;
  const double scale = g.scale();
  const double tol = 1e-9 * scale;

  // size-1 supports: the pure equilibria
  for (const EquilibriumProfile& p : pure_ne(g)) add_unique(out, p);

  const auto try_add = [&](double p, const std::array<double, 3>& y) {
    if (p < -1e-12 || p > 1.0 + 1e-12) return;
    double clamped = std::min(std::max(p, 0.0), 1.0);
    std::array<double, 2> x{clamped, 1.0 - clamped};
    EquilibriumProfile prof = make_profile(g, x, y);
    if (prof.certificate_gap > tol) return;
    const bool pure_x = clamped == 0.0 || clamped == 1.0;
    int support_y = 0;
    for (double v : y) support_y += v > 0.0 ? 1 : 0;
    prof.kind = (pure_x && support_y == 1) ? EquilibriumProfile::Kind::pure_non_strict
                                           : EquilibriumProfile::Kind::mixed;
    add_unique(out, prof);
  };

  // defender mixes over both rows, attacker pure on column j: requires a
  // defender tie on j; the feasible p interval keeps j attacker-optimal.
  for (int j = 0; j < 3; ++j) {
    if (!near(g.defender[0][j], g.defender[1][j], tol)) continue;
    double p_lo = 0.0, p_hi = 1.0;
    bool feasible = true;
    for (int k = 0; k < 3 && feasible; ++k) {
      if (k == j) continue;
      // need p*(B0j - B0k) + (1-p)*(B1j - B1k) >= 0
      const double at1 = g.attacker[0][j] - g.attacker[0][k];  // value at p = 1
      const double at0 = g.attacker[1][j] - g.attacker[1][k];  // value at p = 0
      const double slope = at1 - at0;
      if (std::abs(slope) <= tol) {
        if (at0 < -tol) feasible = false;
        continue;
      }
      const double root = -at0 / slope;
      if (slope > 0.0)
        p_lo = std::max(p_lo, root);
      else
        p_hi = std::min(p_hi, root);
    }
    if (!feasible || p_lo > p_hi + 1e-12) continue;
    std::array<double, 3> y{};
    y[j] = 1.0;
    try_add(p_lo, y);
    try_add(p_hi, y);
  }

  // defender pure on row i, attacker mixes over a support set: requires attacker
  // ties on the support; some y over the support must keep row i optimal.
  for (int i = 0; i < 2; ++i) {
    for (int mask = 1; mask < 8; ++mask) {
      std::vector<int> support;
      for (int j = 0; j < 3; ++j)
        if (mask & (1 << j)) support.push_back(j);
      if (support.size() < 2) continue;
      bool tied = true;
      for (size_t s = 1; s < support.size() && tied; ++s)
        tied = near(g.attacker[i][support[0]], g.attacker[i][support[s]], tol);
      if (!tied) continue;
      // support columns must be at least as good as the rest
      bool best = true;
      for (int k = 0; k < 3 && best; ++k) {
        if (mask & (1 << k)) continue;
        best = g.attacker[i][k] <= g.attacker[i][support[0]] + tol;
      }
      if (!best) continue;
      // find y on the support with (A_i - A_other) . y >= 0
      std::vector<double> c(support.size());
      for (size_t s = 0; s < support.size(); ++s)
        c[s] = g.defender[i][support[s]] - g.defender[1 - i][support[s]];
      const double c_unif =
          std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(c.size());
      const double c_max = *std::max_element(c.begin(), c.end());
      std::array<double, 3> y{};
      if (c_unif >= -tol) {
        for (int j : support) y[j] = 1.0 / static_cast<double>(support.size());
      } else if (c_max > tol) {
        // blend uniform toward the best column until the row stays optimal
        const size_t arg =
            std::distance(c.begin(), std::max_element(c.begin(), c.end()));
        const double lam = c_unif / (c_unif - c_max);
        for (size_t s = 0; s < support.size(); ++s)
          y[support[s]] = (1.0 - lam) / static_cast<double>(support.size());
        y[support[arg]] += lam;
      } else {
        continue;
      }
      std::array<double, 2> x{};
      x[i] = 1.0;
      EquilibriumProfile prof = make_profile(g, x, y);
      if (prof.certificate_gap > tol) continue;
      prof.kind = EquilibriumProfile::Kind::mixed;
      add_unique(out, prof);
    }
  }

  // both players properly mixed: attacker support of size 2 or 3
  for (int mask = 1; mask < 8; ++mask) {
    std::vector<int> support;
    for (int j = 0; j < 3; ++j)
      if (mask & (1 << j)) support.push_back(j);
    if (support.size() < 2) continue;

    // defender probability that makes the attacker indifferent on the first
    // two support columns
    const int j0 = support[0], j1 = support[1];
    const double at1 = g.attacker[0][j0] - g.attacker[0][j1];
    const double at0 = g.attacker[1][j0] - g.attacker[1][j1];
    const double slope = at1 - at0;
    if (std::abs(slope) <= tol) continue;  // singular indifference system
    const double p = -at0 / slope;
    if (p < -1e-12 || p > 1.0 + 1e-12) continue;
    const std::array<double, 3> col_payoff = attacker_payoffs_at(g, p);
    bool consistent = true;
    for (size_t s = 2; s < support.size() && consistent; ++s)
      consistent = near(col_payoff[support[s]], col_payoff[j0], tol);
    for (int k = 0; k < 3 && consistent; ++k)
      if (!(mask & (1 << k))) consistent = col_payoff[k] <= col_payoff[j0] + tol;
    if (!consistent) continue;

    // defender indifference: c . y = 0 over the support
    std::vector<double> c(support.size());
    for (size_t s = 0; s < support.size(); ++s)
      c[s] = g.defender[0][support[s]] - g.defender[1][support[s]];

    if (support.size() == 2) {
      const double den = c[0] - c[1];
      if (std::abs(den) <= tol) continue;  // singular
      const double y0 = -c[1] / den;
      if (y0 < -1e-12 || y0 > 1.0 + 1e-12) continue;
      std::array<double, 3> y{};
      y[j0] = std::min(std::max(y0, 0.0), 1.0);
      y[j1] = 1.0 - y[j0];
      try_add(p, y);
    } else {
      // full support: return the representative zero-crossings on each edge
      for (size_t a = 0; a < 3; ++a)
        for (size_t b = a + 1; b < 3; ++b) {
          const double den = c[a] - c[b];
          if (std::abs(den) <= tol) {
            if (std::abs(c[a]) <= tol) {
              std::array<double, 3> y{};
              y[support[a]] = 0.5;
              y[support[b]] = 0.5;
              try_add(p, y);
            }
            continue;
          }
          const double ya = -c[b] / den;
          if (ya < -1e-12 || ya > 1.0 + 1e-12) continue;
          std::array<double, 3> y{};
          y[support[a]] = std::min(std::max(ya, 0.0), 1.0);
          y[support[b]] = 1.0 - y[support[a]];
          try_add(p, y);
        }
      // and the centered solution when the whole simplex is indifferent
      if (std::abs(c[0]) <= tol && std::abs(c[1]) <= tol && std::abs(c[2]) <= tol) {
        std::array<double, 3> y{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
        try_add(p, y);
      }
    }
  }

  std::sort(out.begin(), out.end(),
            [](const EquilibriumProfile& a, const EquilibriumProfile& b) {
              if (a.defender[0] != b.defender[0]) return a.defender[0] < b.defender[0];
              for (int j = 0; j < 3; ++j)
                if (a.attacker[j] != b.attacker[j]) return a.attacker[j] < b.attacker[j];
              return false;
            });
  return out;
}

SecurityGamePayoffs payoffs_from_stats(double gamma_strong, double rho_strong,
                                       double gamma_weak, double rho_weak,
                                       double lambda, double kappa) {
  if (rho_strong < 0.0 || rho_strong > 1.0 || rho_weak < 0.0 || rho_weak > 1.0)
    throw DomainError("payoffs_from_stats: rho outside [0,1]");
  if (gamma_strong < 0.0 || gamma_weak < 0.0)
    throw DomainError("payoffs_from_stats: gamma must be a magnitude >= 0");
  SecurityGamePayoffs p;
  p.l_att_strong = gamma_strong * lambda;
  p.l_att_weak = gamma_weak * lambda;
  p.c_att_strong = rho_strong * kappa;
  p.c_att_weak = rho_weak * kappa;
  return p;
}

Case2Condition case2_condition(double gamma_strong, double rho_strong,
                               double gamma_weak, double rho_weak, double kappa,
                               double lambda) {
  if (rho_weak == rho_strong)
    throw DomainError("case2_condition: rho_weak == rho_strong");
  if (lambda <= 0.0) throw DomainError("case2_condition: lambda must be > 0");
  Case2Condition c;
  c.lhs = (gamma_weak - gamma_strong) / (rho_weak - rho_strong);
  c.kappa_over_lambda = kappa / lambda;
  c.holds = c.lhs > c.kappa_over_lambda;
  c.assumption_bound = rho_weak > 0.0 ? gamma_weak / rho_weak : 0.0;
  c.assumption_holds = c.assumption_bound > c.kappa_over_lambda;
  return c;
}

std::string payoffs_to_text(const SecurityGamePayoffs& p) {
  std::ostringstream os;
  os.precision(17);
  os << "# security game instance\n";
  os << "rows " << kDefenderLabels[0] << " " << kDefenderLabels[1] << "\n";
  os << "cols " << kAttackerLabels[0] << " " << kAttackerLabels[1] << " "
     << kAttackerLabels[2] << "\n";
  os << "c_mon " << p.c_mon << "\n";
  os << "c_def " << p.c_def << "\n";
  os << "l_att_weak " << p.l_att_weak << "\n";
  os << "l_att_strong " << p.l_att_strong << "\n";
  os << "c_att_weak " << p.c_att_weak << "\n";
  os << "c_att_strong " << p.c_att_strong << "\n";
  return os.str();
}

SecurityGamePayoffs payoffs_from_text(const std::string& text) {
  SecurityGamePayoffs p;
  std::istringstream is(text);
  std::string line;
  bool seen[6] = {false, false, false, false, false, false};
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "rows" || key == "cols") continue;  // labels, fixed layout
    double value = 0.0;
    if (!(ls >> value))
      throw ParseError("game record line " + std::to_string(lineno) +
                       ": expected a number after '" + key + "'");
    if (key == "c_mon") p.c_mon = value, seen[0] = true;
    else if (key == "c_def") p.c_def = value, seen[1] = true;
    else if (key == "l_att_weak") p.l_att_weak = value, seen[2] = true;
    else if (key == "l_att_strong") p.l_att_strong = value, seen[3] = true;
    else if (key == "c_att_weak") p.c_att_weak = value, seen[4] = true;
    else if (key == "c_att_strong") p.c_att_strong = value, seen[5] = true;
    else
      throw ParseError("game record line " + std::to_string(lineno) +
                       ": unknown key '" + key + "'");
  }
  for (bool s : seen)
    if (!s) throw ParseError("game record: missing one of the six payoff scalars");
  return p;
}

std::string equilibria_json(const std::vector<EquilibriumProfile>& profiles) {
  nlohmann::json arr = nlohmann::json::array();
  for (const EquilibriumProfile& p : profiles) {
    nlohmann::json j;
    j["kind"] = to_string(p.kind);
    j["defender"] = {{kDefenderLabels[0], p.defender[0]},
                     {kDefenderLabels[1], p.defender[1]}};
    j["attacker"] = {{kAttackerLabels[0], p.attacker[0]},
                     {kAttackerLabels[1], p.attacker[1]},
                     {kAttackerLabels[2], p.attacker[2]}};
    j["defender_payoff"] = p.defender_payoff;
    j["attacker_payoff"] = p.attacker_payoff;
    j["certificate_gap"] = p.certificate_gap;
    nlohmann::json joint = nlohmann::json::array();
    for (int i = 0; i < 2; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int k = 0; k < 3; ++k) row.push_back(p.defender[i] * p.attacker[k]);
      joint.push_back(row);
    }
    j["joint"] = joint;
    arr.push_back(j);
  }
  return arr.dump(2);
}

SecurityGamePayoffs sample_payoffs(GameCase target, Rng& rng) {
  SecurityGamePayoffs p;
  const double q_weak = 0.5 + 9.5 * rng.uniform();  // attacker's weak net benefit
  double d = 0.0;
  switch (target) {
    case GameCase::case1: d = q_weak * (0.05 + 0.9 * rng.uniform()); break;
    case GameCase::case2: d = -(0.5 + 19.5 * rng.uniform()); break;
    case GameCase::case3: d = 0.0; break;
  }
  const double q_strong = q_weak - d;
  p.c_att_weak = 0.2 + 5.0 * rng.uniform();
  p.l_att_weak = q_weak + p.c_att_weak;
  // strong attack must cost more, and enough that losses still order correctly
  p.c_att_strong = p.c_att_weak + std::max(d, 0.0) + 0.2 + 5.0 * rng.uniform();
  p.l_att_strong = q_strong + p.c_att_strong;
  // prevention must stay cheaper than the strong-attack loss
  const double budget = p.l_att_strong;
  p.c_mon = budget * (0.05 + 0.4 * rng.uniform());
  p.c_def = (budget - p.c_mon) * (0.1 + 0.8 * rng.uniform());
  return p;
}

double monitoring_probability_report(int samples, double threshold, Rng& rng) {
  if (samples <= 0) throw DomainError("monitoring_probability_report: samples must be > 0");
  int hits = 0;
  for (int s = 0; s < samples; ++s) {
    const SecurityGamePayoffs p = sample_payoffs(GameCase::case2, rng);
    const std::vector<EquilibriumProfile> eq = mixed_ne(build_game(p));
    double p_mon = 0.0;
    for (const EquilibriumProfile& e : eq)
      if (e.kind == EquilibriumProfile::Kind::mixed) p_mon = std::max(p_mon, e.defender[0]);
    if (p_mon >= threshold) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

}  // namespace gridsec
