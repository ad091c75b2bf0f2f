#pragma once

#include "rng.hpp"
#include "types.hpp"

namespace gridsec {

// Parameters of the simulated forecasting error. Raw per-interval errors are
// zero-mean gaussians proportional to the interval's actual demand; smoothing
// the raw errors over a 3-interval window keeps the profile realistic. The
// default sigma is calibrated so a year of household forecasts lands near the
// 8% mean absolute relative error reported for real forecasters.
struct ForecastErrorParams {
  double relative_sigma = 0.16;
  double target_mape = 0.08;

  void validate() const {
    if (!(relative_sigma > 0.0)) throw DomainError("forecast: relative_sigma must be > 0");
    if (!(target_mape > 0.0 && target_mape < 1.0))
      throw DomainError("forecast: target_mape outside (0,1)");
  }
};

// Three-point moving average with circular wrap at the day boundary.
Series smooth_errors(const Series& raw);

// forecast_i = max(0, actual_i + E_i) with E the smoothed proportional errors.
Series simulate_forecast(const Series& actual, const ForecastErrorParams& params,
                         Rng& rng);

// Mean absolute relative error, skipping intervals with zero actual demand.
double mape(const Series& forecast, const Series& actual);

}  // namespace gridsec
