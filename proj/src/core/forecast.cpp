#include "forecast.hpp"

#include <algorithm>
#include <cmath>

namespace gridsec {

Series smooth_errors(const Series& raw) {
  const size_t n = raw.size();
  Series smoothed(n, 0.0);
  if (n == 0) return smoothed;
  for (size_t i = 0; i < n; ++i) {
    const double prev = raw[(i + n - 1) % n];
    const double next = raw[(i + 1) % n];
    smoothed[i] = (prev + raw[i] + next) / 3.0;
  }
  return smoothed;
}

Series simulate_forecast(const Series& actual, const ForecastErrorParams& params,
                         Rng& rng) {
  params.validate();
  check_profile(actual, static_cast<int>(actual.size()), "actual demand");
  Series raw(actual.size());
  for (size_t i = 0; i < actual.size(); ++i)
    raw[i] = rng.normal(0.0, params.relative_sigma * actual[i]);
  const Series smoothed = smooth_errors(raw);
  Series forecast(actual.size());
  for (size_t i = 0; i < actual.size(); ++i)
    forecast[i] = std::max(0.0, actual[i] + smoothed[i]);
  return forecast;
}

double mape(const Series& forecast, const Series& actual) {
  if (forecast.size() != actual.size())
    throw DomainError("mape: length mismatch");
  double sum = 0.0;
  size_t counted = 0;
  for (size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] == 0.0) continue;
    sum += std::abs(forecast[i] - actual[i]) / actual[i];
    ++counted;
  }
  if (counted == 0) throw DomainError("mape: no interval with nonzero actual demand");
  return sum / static_cast<double>(counted);
}

}  // namespace gridsec
