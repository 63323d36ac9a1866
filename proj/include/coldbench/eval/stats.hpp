#pragma once

#include <span>

namespace coldbench::eval {

double mean(std::span<const double> xs);
/// Sample variance (n - 1 denominator); 0 for fewer than two values.
double variance(std::span<const double> xs);
/// Standard error of the mean; 0 for fewer than two values.
double standard_error(std::span<const double> xs);

struct TTest {
  double t = 0.0;
  double df = 0.0;
  double p_value = 1.0;
};

/// Two-sided Welch two-sample t-test. Needs at least two values per sample.
TTest welch_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace coldbench::eval
