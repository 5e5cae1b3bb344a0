#include "hyperwalk/boltzmann.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace hyperwalk {

namespace {

void check_q(double q) {
  if (!(q >= 0.0) || q > kCriticalQ) {
    throw std::domain_error("q = " + std::to_string(q) + " outside [0, 2/27]");
  }
}

// log of (2k)! / (k! (k+2)!), exact product for small k.
double log_central_ratio(int k) {
  if (k <= 60) {
    double c = 0.5;
    for (int s = 0; s < k; ++s) c *= (2.0 * s + 2.0) * (2.0 * s + 1.0) / ((s + 1.0) * (s + 3.0));
    return std::log(c);
  }
  return std::lgamma(2.0 * k + 1.0) - std::lgamma(k + 1.0) - std::lgamma(k + 3.0);
}

}  // namespace

BoltzmannParams BoltzmannParams::from_q(double q) { return BoltzmannParams{q, solve_theta(q)}; }

double solve_theta(double q) {
  check_q(q);
  if (q == 0.0) return 0.0;
  double lo = 0.0;
  double hi = 1.0 / 6.0;
  if (q == kCriticalQ) return hi;
  // f is strictly increasing on [0, 1/6].
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f = mid * (1.0 - 2.0 * mid) * (1.0 - 2.0 * mid);
    if (f < q) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double flo = lo * (1.0 - 2.0 * lo) * (1.0 - 2.0 * lo);
  const double fhi = hi * (1.0 - 2.0 * hi) * (1.0 - 2.0 * hi);
  return std::abs(flo - q) <= std::abs(fhi - q) ? lo : hi;
}

double log_partition_Z(int m, double q) { return log_partition_Z_theta(m, solve_theta(q)); }

double log_partition_Z_theta(int m, double theta) {
  if (m < 2) throw std::domain_error("partition_Z: m must be at least 2");
  const int k = m - 2;
  const double lead = (1.0 - 6.0 * theta) * k + 2.0 - 6.0 * theta;
  return std::log(lead) + log_central_ratio(k) - (2.0 * k + 2.0) * std::log1p(-2.0 * theta);
}

double partition_Z(int m, double q) { return std::exp(log_partition_Z(m, q)); }

BigCount phi_count(int n, int m, int cap) {
  if (n < 0 || m < 2) throw std::invalid_argument("phi_count: need n >= 0 and m >= 2");
  if (n + m > cap) throw std::invalid_argument("phi_count: n + m exceeds the cap " + std::to_string(cap));
  // table[n][m], filled by increasing n + m; within a sum, phi(n, m) needs phi(n-1, m+1).
  std::vector<std::vector<BigCount>> table(static_cast<std::size_t>(cap + 1),
                                           std::vector<BigCount>(static_cast<std::size_t>(cap + 1)));
  auto at = [&](int a, int b) -> BigCount& { return table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; };
  for (int s = 2; s <= n + m; ++s) {
    for (int a = 0; a <= s - 2; ++a) {
      const int b = s - a;
      BigCount value = 0;
      if (b == 2 && a == 0) value = 1;
      if (a >= 1) value += at(a - 1, b + 1);
      for (int j = 1; j <= b - 2; ++j) {
        for (int a1 = 0; a1 <= a; ++a1) value += at(a1, j + 1) * at(a - a1, b - j);
      }
      at(a, b) = std::move(value);
    }
  }
  return at(n, m);
}

FreeSampler::FreeSampler(double q) : params_(BoltzmannParams::from_q(q)) {}

double FreeSampler::log_Z(int m) {
  if (m < 2) throw std::domain_error("FreeSampler: perimeter must be at least 2");
  while (static_cast<int>(log_z_.size()) <= m) {
    const int next = static_cast<int>(log_z_.size());
    log_z_.push_back(next < 2 ? 0.0 : log_partition_Z_theta(next, params_.theta));
  }
  return log_z_[static_cast<std::size_t>(m)];
}

std::vector<double> FreeSampler::step_law(int p) {
  const double lzp = log_Z(p);
  const double internal = params_.q > 0.0 ? params_.q * std::exp(log_Z(p + 1) - lzp) : 0.0;
  if (p == 2) return {internal, std::exp(-lzp)};
  std::vector<double> law(static_cast<std::size_t>(p - 1));
  law[0] = internal;
  for (int j = 1; j <= p - 2; ++j) law[static_cast<std::size_t>(j)] = std::exp(log_Z(j + 1) + log_Z(p - j) - lzp);
  return law;
}

int FreeSampler::fill_hole(HalfEdgeMap& map, HalfEdgeId start, int perimeter, Rng& rng) {
  std::vector<std::pair<HalfEdgeId, int>> stack{{start, perimeter}};
  int created = 0;
  while (!stack.empty()) {
    const auto [h, p] = stack.back();
    stack.pop_back();
    const auto law = step_law(p);
    const double u = rng.uniform();
    std::size_t choice = law.size() - 1;
    double acc = 0.0;
    for (std::size_t k = 0; k < law.size(); ++k) {
      acc += law[k];
      if (u < acc) {
        choice = k;
        break;
      }
    }
    if (choice == 0) {
      stack.emplace_back(map.hole_add_vertex(h), p + 1);
      ++created;
    } else if (p == 2) {
      map.close_digon(h);
    } else {
      const int j = static_cast<int>(choice);
      const auto [first, second] = map.hole_connect(h, j);
      stack.emplace_back(second, p - j);
      stack.emplace_back(first, j + 1);
    }
  }
  return created;
}

HalfEdgeMap FreeSampler::sample(int m, Rng& rng, FreeSampleStats* stats) {
  HalfEdgeMap map = HalfEdgeMap::open_polygon(m);
  const int n = fill_hole(map, map.root(), m, rng);
  if (stats != nullptr) *stats = FreeSampleStats{n, static_cast<int>(map.face_count()), m};
  return map;
}

}  // namespace hyperwalk
