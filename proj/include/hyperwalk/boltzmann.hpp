#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hyperwalk/map.hpp"
#include "hyperwalk/rng.hpp"

namespace hyperwalk {

inline constexpr double kCriticalQ = 2.0 / 27.0;

struct BoltzmannParams {
  double q = 0.0;
  double theta = 0.0;

  static BoltzmannParams from_q(double q);
};

struct FreeSampleStats {
  int internal_vertex_count = 0;
  int face_count = 0;
  int perimeter = 0;
};

/// Root of theta * (1 - 2 theta)^2 = q on [0, 1/6]. Throws std::domain_error outside [0, 2/27].
double solve_theta(double q);

/// log Z_m(q) from the closed form; m >= 2.
double log_partition_Z(int m, double q);
/// Same, with theta = solve_theta(q) already known.
double log_partition_Z_theta(int m, double theta);
/// Z_m(q); overflows to +inf only for very large m (use log_partition_Z there).
double partition_Z(int m, double q);

using BigCount = boost::multiprecision::cpp_int;

/// Number of triangulations of an m-gon (no self-loops, multiple edges allowed)
/// with n internal vertices, by root-edge decomposition. Requires n + m <= cap.
BigCount phi_count(int n, int m, int cap = 10);

/// Boltzmann sampler for free triangulations at a fixed q. Z values are cached.
class FreeSampler {
 public:
  explicit FreeSampler(double q);

  [[nodiscard]] const BoltzmannParams& params() const { return params_; }
  [[nodiscard]] double log_Z(int m);

  /// One-step decomposition law at perimeter p: entry 0 is "new internal
  /// vertex", entry j (1 <= j <= p-2) is "connect to the j-th vertex after the
  /// head". For p = 2 the entries are {new internal vertex, close}.
  [[nodiscard]] std::vector<double> step_law(int p);

  /// Fresh triangulation of an m-gon.
  HalfEdgeMap sample(int m, Rng& rng, FreeSampleStats* stats = nullptr);

  /// Fills the hole whose first half-edge is `start` in place. Returns the
  /// number of internal vertices created.
  int fill_hole(HalfEdgeMap& map, HalfEdgeId start, int perimeter, Rng& rng);

 private:
  BoltzmannParams params_;
  std::vector<double> log_z_;
};

}  // namespace hyperwalk
