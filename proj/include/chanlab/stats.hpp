#pragma once

#include <span>
#include <vector>

namespace chanlab {

/// Linearly interpolated sample quantile (the "type 7" rule), q in [0, 1].
double quantile(std::span<const double> values, double q);

double median(std::span<const double> values);
double mean(std::span<const double> values);

struct OrderSummary {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

OrderSummary summarize(std::span<const double> values);

}  // namespace chanlab
