#pragma once

#include <cstdint>
#include <vector>

namespace hyperwalk {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double r2 = 0.0;
  double ci_low = 0.0;   // two-sided interval on the slope at `confidence`
  double ci_high = 0.0;
  double confidence = 0.95;
  int points = 0;
};

/// Ordinary least squares y = a + b x with a Student-t interval on b.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y, double confidence = 0.95);

double mean(const std::vector<double>& v);
/// Standard error of the mean.
double standard_error(const std::vector<double>& v);
/// Linear-interpolation quantile of a sample (q in [0, 1]).
double quantile(std::vector<double> v, double q);

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Goodness of fit of observed counts against cell probabilities. Any mass
/// missing from `probs` forms one extra cell; cells with expected count < 5 are
/// pooled into their neighbour.
ChiSquare chi_square_test(const std::vector<std::uint64_t>& observed, const std::vector<double>& probs);

/// Upper standard normal quantile z with P(Z > z) = tail.
double normal_upper_quantile(double tail);

}  // namespace hyperwalk
