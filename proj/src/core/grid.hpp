#pragma once

#include "types.hpp"

namespace gridsec {

// Cost of one interval at aggregated load y: c2*y^2 + c1*y + c0.
double unit_cost(double aggregated_load, const TariffParams& tariff);

// Column sums of an M x T load matrix: the grid total load per interval.
Series aggregate_load(const LoadMatrix& loads);

// Total daily grid cost sum_t g(L_t).
double total_cost(const Series& aggregated, const TariffParams& tariff);

// Peak-to-average ratio T * max(L) / sum(L). Requires a positive total.
double par(const Series& aggregated);

// A household's bill: its energy share of the total daily cost,
// Omega_n * sum_t g(L_t) with Omega_n = sum_t l_n^t / sum_t L^t.
// Returned as a positive currency amount.
double bill(int household_id, const LoadMatrix& loads, const TariffParams& tariff);

// All bills at once (single pass over the matrix).
std::vector<double> all_bills(const LoadMatrix& loads, const TariffParams& tariff);

}  // namespace gridsec
