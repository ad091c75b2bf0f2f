#include "demand.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace gridsec {

namespace {

double template_value(const SyntheticDemandParams& p, double hour, int intervals) {
  // positions scale with the interval count so other T keep the same shape
  const double scale = static_cast<double>(intervals) / 24.0;
  const double morning = p.morning_hour * scale;
  const double evening = p.evening_hour * scale;
  const double wm = p.morning_width * scale;
  const double we = p.evening_width * scale;
  double v = p.base_load;
  // circular distance keeps the evening bump smooth across midnight
  const auto bump = [&](double center, double width, double amp) {
    double d = std::abs(hour - center);
    d = std::min(d, intervals - d);
    return amp * std::exp(-0.5 * (d / width) * (d / width));
  };
  v += bump(morning, wm, p.morning_peak);
  v += bump(evening, we, p.evening_peak);
  return v;
}

}  // namespace

std::vector<std::vector<Series>> synthesize_demands(int households, int days,
                                                    int intervals,
                                                    const SyntheticDemandParams& params,
                                                    uint64_t seed) {
  params.validate();
  if (households <= 0 || days <= 0 || intervals <= 0)
    throw DomainError("synthesize_demands: dimensions must be positive");

  // static household traits
  std::vector<double> scale(households);
  std::vector<int> offset(households);
  for (int h = 0; h < households; ++h) {
    Rng rng(substream_seed(seed, Stream::household_shape, 0, h));
    scale[h] = std::exp(rng.normal(0.0, params.household_jitter));
    const int span = 2 * params.shape_offset_range + 1;
    offset[h] = static_cast<int>(rng.uniform_below(span)) - params.shape_offset_range;
  }

  std::vector<std::vector<Series>> demands(days);
  for (int day = 0; day < days; ++day) {
    demands[day].assign(households, Series(intervals, 0.0));
    for (int h = 0; h < households; ++h) {
      Rng rng(substream_seed(seed, Stream::demand, day, h));
      for (int t = 0; t < intervals; ++t) {
        const double hour =
            static_cast<double>(((t - offset[h]) % intervals + intervals) % intervals);
        double v = scale[h] * template_value(params, hour, intervals);
        v *= std::exp(rng.normal(0.0, params.day_noise));
        demands[day][h][t] = v;
      }
    }
  }
  return demands;
}

std::string demands_to_csv(const std::vector<std::vector<Series>>& demands) {
  std::string out = "household,day,interval,kwh\n";
  char buf[96];
  for (size_t day = 0; day < demands.size(); ++day)
    for (size_t h = 0; h < demands[day].size(); ++h)
      for (size_t t = 0; t < demands[day][h].size(); ++t) {
        std::snprintf(buf, sizeof(buf), "%zu,%zu,%zu,%.9g\n", h, day, t,
                      demands[day][h][t]);
        out += buf;
      }
  return out;
}

std::vector<std::vector<Series>> demands_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw ParseError("demand CSV: empty file");
  // tolerate an optional UTF-8 BOM and trailing CR
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "household,day,interval,kwh")
    throw ParseError("demand CSV: expected header 'household,day,interval,kwh'");

  std::map<std::pair<long, long>, std::map<long, double>> cells;
  long lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    long h = 0, d = 0, t = 0;
    double kwh = 0.0;
    char extra = 0;
    const int matched =
        std::sscanf(line.c_str(), "%ld,%ld,%ld,%lf%c", &h, &d, &t, &kwh, &extra);
    if (matched != 4)
      throw ParseError("demand CSV row " + std::to_string(lineno) + ": malformed line");
    if (h < 0 || d < 0 || t < 0)
      throw ParseError("demand CSV row " + std::to_string(lineno) + ": negative index");
    if (kwh < 0.0)
      throw DomainError("demand CSV row " + std::to_string(lineno) + ": negative kwh");
    if (!cells[{d, h}].emplace(t, kwh).second)
      throw ParseError("demand CSV row " + std::to_string(lineno) +
                       ": duplicate (household, day, interval)");
  }
  if (cells.empty()) throw ParseError("demand CSV: no data rows");

  long days = 0, households = 0;
  for (const auto& [key, _] : cells) {
    days = std::max(days, key.first + 1);
    households = std::max(households, key.second + 1);
  }
  long intervals = -1;
  std::vector<std::vector<Series>> out(days);
  for (long d = 0; d < days; ++d) {
    out[d].resize(households);
    for (long h = 0; h < households; ++h) {
      const auto it = cells.find({d, h});
      if (it == cells.end())
        throw ParseError("demand CSV: missing day " + std::to_string(d) +
                         " for household " + std::to_string(h));
      const auto& series = it->second;
      if (intervals < 0) intervals = static_cast<long>(series.size());
      if (static_cast<long>(series.size()) != intervals)
        throw ParseError("demand CSV: household " + std::to_string(h) + " day " +
                         std::to_string(d) + " has " + std::to_string(series.size()) +
                         " intervals, expected " + std::to_string(intervals));
      Series& profile = out[d][h];
      profile.resize(intervals, 0.0);
      for (const auto& [t, kwh] : series) {
        if (t >= intervals)
          throw ParseError("demand CSV: interval index " + std::to_string(t) +
                           " out of range for household " + std::to_string(h));
        profile[t] = kwh;
      }
    }
  }
  return out;
}

std::vector<std::vector<Series>> load_demands_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open demand CSV: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return demands_from_csv(ss.str());
}

}  // namespace gridsec
