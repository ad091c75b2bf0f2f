#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridsec {

// One value per time interval (kWh). Used for demands, forecasts, loads and
// battery actions alike.
using Series = std::vector<double>;

// Per-household grid draws, one row per household, each of length T.
using LoadMatrix = std::vector<Series>;

// Domain-rule violation (negative load, empty profile, zero totals, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed config / CSV / game-record input.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Security-game assumption violated; message names the inequalities.
class AssumptionError : public std::runtime_error {
 public:
  explicit AssumptionError(const std::string& what) : std::runtime_error(what) {}
};

// Quadratic tariff g(y) = c2*y^2 + c1*y + c0 applied to the aggregated load
// of one interval.
struct TariffParams {
  double c2 = 1.0;
  double c1 = 0.0;
  double c0 = 0.0;

  void validate() const {
    if (!(c2 > 0.0)) throw DomainError("tariff: c2 must be > 0");
    if (c1 < 0.0) throw DomainError("tariff: c1 must be >= 0");
    if (c0 < 0.0) throw DomainError("tariff: c0 must be >= 0");
  }
};

// The neighborhood: M households, the subset enrolled in the DSM scheme, and
// (optionally) which participant is the attacker.
struct NeighborhoodConfig {
  int households = 25;                 // M
  std::vector<int> participants;       // DSM set, ids in [0, M)
  std::optional<int> attacker_id;      // must be a participant when present

  int participant_count() const { return static_cast<int>(participants.size()); }

  bool is_participant(int id) const {
    for (int p : participants)
      if (p == id) return true;
    return false;
  }

  void validate() const {
    if (households <= 0) throw DomainError("neighborhood: households must be positive");
    for (int p : participants)
      if (p < 0 || p >= households)
        throw DomainError("neighborhood: participant id " + std::to_string(p) + " out of range");
    for (size_t i = 0; i < participants.size(); ++i)
      for (size_t j = i + 1; j < participants.size(); ++j)
        if (participants[i] == participants[j])
          throw DomainError("neighborhood: duplicate participant id");
    if (attacker_id && !is_participant(*attacker_id))
      throw DomainError("neighborhood: attacker must be a participant");
  }
};

inline void check_profile(const Series& values, int intervals, const char* what) {
  if (static_cast<int>(values.size()) != intervals)
    throw DomainError(std::string(what) + ": expected " + std::to_string(intervals) +
                      " intervals, got " + std::to_string(values.size()));
  for (double v : values)
    if (v < 0.0) throw DomainError(std::string(what) + ": negative value");
}

}  // namespace gridsec
