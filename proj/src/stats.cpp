#include "hyperwalk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace hyperwalk {

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y, double confidence) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_line: size mismatch");
  if (x.size() < 2) throw std::invalid_argument("fit_line: need at least two points");
  const auto n = static_cast<double>(x.size());
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: abscissae are all equal");
  LinearFit fit;
  fit.points = static_cast<int>(x.size());
  fit.confidence = confidence;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double e = y[k] - fit.intercept - fit.slope * x[k];
    rss += e * e;
  }
  fit.r2 = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  if (x.size() > 2) {
    fit.slope_se = std::sqrt(rss / (n - 2.0) / sxx);
    const boost::math::students_t t(n - 2.0);
    const double q = boost::math::quantile(boost::math::complement(t, (1.0 - confidence) / 2.0));
    fit.ci_low = fit.slope - q * fit.slope_se;
    fit.ci_high = fit.slope + q * fit.slope_se;
  } else {
    fit.ci_low = fit.ci_high = fit.slope;
  }
  return fit;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double a : v) s += a;
  return s / static_cast<double>(v.size());
}

double standard_error(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double a : v) s += (a - m) * (a - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw std::invalid_argument("quantile: empty sample");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q outside [0, 1]");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

ChiSquare chi_square_test(const std::vector<std::uint64_t>& observed, const std::vector<double>& probs) {
  if (observed.size() < probs.size() || observed.size() > probs.size() + 1) {
    throw std::invalid_argument("chi_square_test: need one count per cell (plus optionally the rest cell)");
  }
  double total = 0.0;
  for (auto o : observed) total += static_cast<double>(o);
  if (total == 0.0) throw std::invalid_argument("chi_square_test: no observations");
  std::vector<double> exp_cells;
  std::vector<double> obs_cells;
  double rest = 1.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    exp_cells.push_back(probs[k] * total);
    obs_cells.push_back(static_cast<double>(observed[k]));
    rest -= probs[k];
  }
  const double rest_obs = observed.size() > probs.size() ? static_cast<double>(observed.back()) : 0.0;
  if (rest * total > 1e-9 || rest_obs > 0.0) {
    exp_cells.push_back(std::max(rest, 0.0) * total);
    obs_cells.push_back(rest_obs);
  }
  // pool small cells into the following one (the last into the previous)
  std::vector<double> e2, o2;
  double ea = 0.0, oa = 0.0;
  for (std::size_t k = 0; k < exp_cells.size(); ++k) {
    ea += exp_cells[k];
    oa += obs_cells[k];
    if (ea >= 5.0) {
      e2.push_back(ea);
      o2.push_back(oa);
      ea = oa = 0.0;
    }
  }
  if (ea > 0.0 || oa > 0.0) {
    if (e2.empty()) {
      e2.push_back(ea);
      o2.push_back(oa);
    } else {
      e2.back() += ea;
      o2.back() += oa;
    }
  }
  ChiSquare out;
  out.dof = static_cast<int>(e2.size()) - 1;
  for (std::size_t k = 0; k < e2.size(); ++k) {
    if (e2[k] <= 0.0) {
      if (o2[k] > 0.0) out.statistic = std::numeric_limits<double>::infinity();
      continue;
    }
    out.statistic += (o2[k] - e2[k]) * (o2[k] - e2[k]) / e2[k];
  }
  if (out.dof < 1) {
    out.p_value = 1.0;
  } else if (!std::isfinite(out.statistic)) {
    out.p_value = 0.0;
  } else {
    const boost::math::chi_squared dist(out.dof);
    out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  }
  return out;
}

double normal_upper_quantile(double tail) {
  const boost::math::normal dist;
  return boost::math::quantile(boost::math::complement(dist, tail));
}

}  // namespace hyperwalk
