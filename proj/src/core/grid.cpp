#include "grid.hpp"

#include <algorithm>
#include <numeric>

namespace gridsec {

double unit_cost(double aggregated_load, const TariffParams& tariff) {
  if (aggregated_load < 0.0) throw DomainError("unit_cost: negative aggregated load");
  return tariff.c2 * aggregated_load * aggregated_load + tariff.c1 * aggregated_load +
         tariff.c0;
}

Series aggregate_load(const LoadMatrix& loads) {
  if (loads.empty()) return {};
  const size_t intervals = loads.front().size();
  Series total(intervals, 0.0);
  for (const Series& row : loads) {
    if (row.size() != intervals)
      throw DomainError("aggregate_load: ragged load matrix");
    for (size_t t = 0; t < intervals; ++t) total[t] += row[t];
  }
  return total;
}

double total_cost(const Series& aggregated, const TariffParams& tariff) {
  double cost = 0.0;
  for (double load : aggregated) cost += unit_cost(load, tariff);
  return cost;
}

double par(const Series& aggregated) {
  if (aggregated.empty()) throw DomainError("par: empty load vector");
  double peak = 0.0;
  double sum = 0.0;
  for (double v : aggregated) {
    if (v < 0.0) throw DomainError("par: negative load");
    peak = std::max(peak, v);
    sum += v;
  }
  if (sum <= 0.0) throw DomainError("par: zero total load");
  return static_cast<double>(aggregated.size()) * peak / sum;
}

double bill(int household_id, const LoadMatrix& loads, const TariffParams& tariff) {
  if (household_id < 0 || household_id >= static_cast<int>(loads.size()))
    throw DomainError("bill: household id out of range");
  const Series total = aggregate_load(loads);
  const double grand_total = std::accumulate(total.begin(), total.end(), 0.0);
  if (grand_total <= 0.0) throw DomainError("bill: zero grid total load");
  const Series& own = loads[household_id];
  const double own_total = std::accumulate(own.begin(), own.end(), 0.0);
  if (own_total < 0.0) throw DomainError("bill: negative household total");
  return own_total / grand_total * total_cost(total, tariff);
}

std::vector<double> all_bills(const LoadMatrix& loads, const TariffParams& tariff) {
  const Series total = aggregate_load(loads);
  const double grand_total = std::accumulate(total.begin(), total.end(), 0.0);
  if (grand_total <= 0.0) throw DomainError("bill: zero grid total load");
  const double cost = total_cost(total, tariff);
  std::vector<double> bills(loads.size(), 0.0);
  for (size_t m = 0; m < loads.size(); ++m) {
    const double own_total =
        std::accumulate(loads[m].begin(), loads[m].end(), 0.0);
    bills[m] = own_total / grand_total * cost;
  }
  return bills;
}

}  // namespace gridsec
