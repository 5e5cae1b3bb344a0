#include "hyperwalk/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "hyperwalk/stats.hpp"
#include "hyperwalk/trap.hpp"
#include "hyperwalk/walk.hpp"

namespace hyperwalk {

namespace {

using nlohmann::json;

// Runs body(r) for r in [0, n) across OpenMP threads; the first exception is rethrown.
template <class Body>
void parallel_replicas(int n, Body&& body) {
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r < n; ++r) {
    try {
      body(r);
    } catch (...) {
#pragma omp critical(hyperwalk_replica_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::shared_ptr<const StepLaw> law_for(const ExperimentConfig& c) {
  return std::make_shared<const StepLaw>(make_step_law(c.alpha));
}

json summary_base(const ExperimentConfig& c, const std::string& experiment) {
  return json{{"schema", "hyperwalk-summary/1"},
              {"experiment", experiment},
              {"seed", c.seed},
              {"config_hash", c.hash()},
              {"config", c.to_json()}};
}

json fit_json(const LinearFit& f) {
  return json{{"slope", f.slope},   {"intercept", f.intercept}, {"slope_se", f.slope_se}, {"r2", f.r2},
              {"ci_low", f.ci_low}, {"ci_high", f.ci_high},     {"confidence", f.confidence}, {"points", f.points}};
}

ResultRow row(const std::string& experiment, const std::string& quantity, std::uint64_t seed, int replica, double x,
              double value, double se = 0.0, int exact = -1, std::uint64_t cost = 0) {
  return ResultRow{experiment, quantity, seed, replica, x, value, se, exact, cost};
}

std::vector<ResultRow> flatten(std::vector<std::vector<ResultRow>>& parts) {
  std::vector<ResultRow> out;
  for (auto& p : parts) {
    for (auto& r : p) out.push_back(std::move(r));
  }
  sort_rows(out);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// configuration

json ExperimentConfig::to_json() const {
  return json{{"alpha", alpha},
              {"seed", seed},
              {"replicas", replicas},
              {"n_max", n_max},
              {"stride", stride},
              {"budget_vertices", budget_vertices},
              {"budget_peels", budget_peels},
              {"certify_peels", certify_peels},
              {"exact_n_max", exact_n_max},
              {"exact_maps", exact_maps},
              {"mc_n", mc_n},
              {"mc_walks", mc_walks},
              {"mc_min_hits", mc_min_hits},
              {"r_max", r_max},
              {"boundary_j", boundary_j},
              {"ball_boundary_r", ball_boundary_r},
              {"tail_steps", tail_steps},
              {"tail_min_count", tail_min_count},
              {"trap_orders", trap_orders},
              {"interval_orders", interval_orders}};
}

void ExperimentConfig::merge_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  const json known = to_json();
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  auto take = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  take("alpha", alpha);
  take("seed", seed);
  take("replicas", replicas);
  take("n_max", n_max);
  take("stride", stride);
  take("budget_vertices", budget_vertices);
  take("budget_peels", budget_peels);
  take("certify_peels", certify_peels);
  take("exact_n_max", exact_n_max);
  take("exact_maps", exact_maps);
  take("mc_n", mc_n);
  take("mc_walks", mc_walks);
  take("mc_min_hits", mc_min_hits);
  take("r_max", r_max);
  take("boundary_j", boundary_j);
  take("ball_boundary_r", ball_boundary_r);
  take("tail_steps", tail_steps);
  take("tail_min_count", tail_min_count);
  take("trap_orders", trap_orders);
  take("interval_orders", interval_orders);
}

std::string ExperimentConfig::hash() const {
  const std::string text = to_json().dump();
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_label(text)));
  return buf;
}

// ---------------------------------------------------------------------------
// CSV

void sort_rows(std::vector<ResultRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.experiment, a.quantity, a.replica, a.x, a.value, a.seed) <
           std::tie(b.experiment, b.quantity, b.replica, b.x, b.value, b.seed);
  });
}

void write_csv(std::ostream& out, const ExperimentConfig& config, const std::string& experiment,
               std::vector<ResultRow> rows) {
  sort_rows(rows);
  out << "# schema=" << kCsvSchema << " experiment=" << experiment << " config_hash=" << config.hash()
      << " seed=" << config.seed << "\n";
  out << "experiment,quantity,seed,replica,x,value,stderr,exact,cost\n";
  for (const auto& r : rows) {
    out << r.experiment << ',' << r.quantity << ',' << r.seed << ',' << r.replica << ',' << format_double(r.x) << ','
        << format_double(r.value) << ',' << format_double(r.stderr_) << ',' << r.exact << ',' << r.cost << '\n';
  }
}

std::vector<ResultRow> read_csv(std::istream& in, std::string* header) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# schema=", 0) != 0) throw std::runtime_error("read_csv: missing schema header");
  if (line.find(std::string("schema=") + kCsvSchema + " ") == std::string::npos) {
    throw std::runtime_error("read_csv: unknown schema in '" + line + "'");
  }
  if (header != nullptr) *header = line;
  if (!std::getline(in, line) || line != "experiment,quantity,seed,replica,x,value,stderr,exact,cost") {
    throw std::runtime_error("read_csv: unexpected column row");
  }
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 9) throw std::runtime_error("read_csv: expected 9 cells in '" + line + "'");
    ResultRow r;
    r.experiment = cells[0];
    r.quantity = cells[1];
    r.seed = std::stoull(cells[2]);
    r.replica = std::stoi(cells[3]);
    r.x = std::stod(cells[4]);
    r.value = std::stod(cells[5]);
    r.stderr_ = std::stod(cells[6]);
    r.exact = std::stoi(cells[7]);
    r.cost = std::stoull(cells[8]);
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// fits

TailFit fit_survival_tail(const std::vector<std::uint64_t>& histogram, int min_count) {
  TailFit fit;
  if (histogram.empty()) return fit;
  fit.mode = static_cast<int>(std::max_element(histogram.begin(), histogram.end()) - histogram.begin());
  std::vector<std::uint64_t> at_least(histogram.size() + 1, 0);
  for (std::size_t k = histogram.size(); k-- > 0;) at_least[k] = at_least[k + 1] + histogram[k];
  const auto total = static_cast<double>(at_least[0]);
  std::vector<double> xs, ys;
  for (std::size_t k = static_cast<std::size_t>(fit.mode) + 1; k < histogram.size(); ++k) {
    if (at_least[k] < static_cast<std::uint64_t>(min_count)) break;
    xs.push_back(static_cast<double>(k));
    ys.push_back(std::log(static_cast<double>(at_least[k]) / total));
    fit.k_max = static_cast<int>(k);
  }
  fit.points = static_cast<int>(xs.size());
  if (xs.size() < 3) return fit;
  const LinearFit line = fit_line(xs, ys);
  fit.slope = line.slope;
  fit.r2 = line.r2;
  fit.ok = true;
  return fit;
}

VolumeStability volume_stability(const std::vector<double>& mean_log_ball) {
  VolumeStability s;
  if (mean_log_ball.size() < 9) return s;
  s.early_slope = fit_line({3, 4, 5}, {mean_log_ball[3], mean_log_ball[4], mean_log_ball[5]}).slope;
  s.late_slope = fit_line({6, 7, 8}, {mean_log_ball[6], mean_log_ball[7], mean_log_ball[8]}).slope;
  s.stable = s.early_slope > 0.0 && s.late_slope > 0.0 &&
             std::abs(s.early_slope - s.late_slope) <= 0.5 * std::max(s.early_slope, s.late_slope);
  return s;
}

// ---------------------------------------------------------------------------
// experiments

RunResult run_speed(const ExperimentConfig& c) {
  const std::string exp = "speed";
  if (c.n_max < 0 || c.stride < 1 || c.replicas < 1) throw std::invalid_argument("speed: need n_max >= 0, stride >= 1, replicas >= 1");
  const auto law = law_for(c);
  std::vector<std::vector<ResultRow>> parts(static_cast<std::size_t>(c.replicas));
  parallel_replicas(c.replicas, [&](int r) {
    auto& out = parts[static_cast<std::size_t>(r)];
    const std::uint64_t s = replica_seed(c.seed, exp, static_cast<std::uint64_t>(r));
    WalkState walk(law, s, c.budget());
    bool paused = false;
    for (int n = 0;; ++n) {
      if (n % c.stride == 0 || n == c.n_max) {
        const auto cert = distance_to_boundary(walk, c.certify_peels);
        out.push_back(row(exp, "dist_lower", s, r, n, cert.lower, 0.0, cert.exact ? 1 : 0, cert.revelation_cost));
        out.push_back(row(exp, "dist_upper", s, r, n, cert.upper, 0.0, cert.exact ? 1 : 0, cert.revelation_cost));
        const auto home = distance_to_start(walk);
        out.push_back(row(exp, "root_lower", s, r, n, home.lower, 0.0, home.exact ? 1 : 0));
        out.push_back(row(exp, "root_upper", s, r, n, home.upper, 0.0, home.exact ? 1 : 0));
      }
      if (n == c.n_max) break;
      if (walk.step() == StepStatus::Paused) {
        paused = true;
        break;
      }
    }
    const auto steps = static_cast<double>(walk.step_index());
    out.push_back(row(exp, "boundary_visits", s, r, steps, static_cast<double>(walk.boundary_visits())));
    out.push_back(row(exp, "last_boundary_visit", s, r, steps, static_cast<double>(walk.last_boundary_visit())));
    out.push_back(row(exp, "paused", s, r, steps, paused ? 1.0 : 0.0));
    out.push_back(row(exp, "peels", s, r, steps, static_cast<double>(walk.lazy().peel_count()), 0.0, -1,
                      walk.lazy().peel_count()));
  });
  RunResult result{exp, flatten(parts), summary_base(c, exp)};

  std::vector<double> xs, ys, lower_ratio, upper_ratio, last_visit, visits;
  std::vector<char> finished(static_cast<std::size_t>(c.replicas), 1);
  for (const auto& r : result.rows) {
    if (r.quantity == "paused" && r.value != 0.0) finished[static_cast<std::size_t>(r.replica)] = 0;
  }
  for (const auto& r : result.rows) {
    if (!finished[static_cast<std::size_t>(r.replica)]) continue;
    if (r.quantity == "dist_lower" && r.x > 0) {
      xs.push_back(r.x);
      ys.push_back(r.value);
    }
    if (c.n_max > 0 && r.x == c.n_max && r.quantity == "dist_lower") lower_ratio.push_back(r.value / c.n_max);
    if (c.n_max > 0 && r.x == c.n_max && r.quantity == "dist_upper") upper_ratio.push_back(r.value / c.n_max);
    if (r.quantity == "last_boundary_visit") last_visit.push_back(r.value);
    if (r.quantity == "boundary_visits") visits.push_back(r.value);
  }
  auto& sm = result.summary;
  sm["replicas_finished"] = lower_ratio.size();
  sm["replicas_paused"] = static_cast<std::size_t>(c.replicas) - last_visit.size();
  if (xs.size() >= 3) {
    // two-sided 98% interval: its lower end is the one-sided 99% bound
    const auto fit = fit_line(xs, ys, 0.98);
    sm["lower_fit"] = fit_json(fit);
    sm["slope_positive_99"] = fit.ci_low > 0.0;
  }
  if (!lower_ratio.empty()) {
    sm["lower_over_n_q01"] = quantile(lower_ratio, 0.01);
    sm["lower_over_n_median"] = quantile(lower_ratio, 0.5);
    sm["upper_over_n_q01"] = quantile(upper_ratio, 0.01);
    sm["upper_over_n_median"] = quantile(upper_ratio, 0.5);
  }
  if (!last_visit.empty()) {
    sm["last_visit_median"] = quantile(last_visit, 0.5);
    sm["last_visit_max"] = *std::max_element(last_visit.begin(), last_visit.end());
    sm["visits_median"] = quantile(visits, 0.5);
    sm["visits_max"] = *std::max_element(visits.begin(), visits.end());
  }
  return result;
}

RunResult run_return_prob(const ExperimentConfig& c) {
  const std::string exp = "return-prob";
  const auto law = law_for(c);
  std::vector<std::vector<ResultRow>> parts(static_cast<std::size_t>(c.exact_maps) + 1);
  std::vector<std::vector<double>> curves(static_cast<std::size_t>(c.exact_maps));
  parallel_replicas(c.exact_maps, [&](int m) {
    const std::uint64_t s = replica_seed(c.seed, "return-exact", static_cast<std::uint64_t>(m));
    LazyHalfPlane lazy(law, s, 8, c.budget());
    auto& out = parts[static_cast<std::size_t>(m)];
    try {
      const auto curve = exact_return_curve(lazy, c.exact_n_max);
      for (std::size_t t = 0; t < curve.probability.size(); ++t) {
        out.push_back(row(exp, "exact_quenched", s, m, static_cast<double>(t), curve.probability[t], 0.0, 1, curve.peels));
      }
      curves[static_cast<std::size_t>(m)] = curve.probability;
    } catch (const BudgetExceeded&) {
      out.push_back(row(exp, "exact_dropped", s, m, c.exact_n_max, 1.0, 0.0, -1, lazy.peel_count()));
    }
  });

  // Exact curves are quenched; their average over maps estimates the annealed
  // probability that the Monte Carlo measures.
  std::vector<double> exact_mean(static_cast<std::size_t>(c.exact_n_max) + 1, 0.0);
  std::vector<double> exact_se(exact_mean.size(), 0.0);
  std::size_t used = 0;
  for (const auto& curve : curves) used += curve.empty() ? 0 : 1;
  auto& agg = parts.back();
  if (used > 0) {
    for (std::size_t t = 0; t < exact_mean.size(); ++t) {
      std::vector<double> values;
      for (const auto& curve : curves) {
        if (!curve.empty()) values.push_back(curve[t]);
      }
      exact_mean[t] = mean(values);
      exact_se[t] = standard_error(values);
      agg.push_back(row(exp, "exact_mean", c.seed, -1, static_cast<double>(t), exact_mean[t], exact_se[t], 0, used));
    }
  }
  std::uint64_t dropped = 0;
  const std::uint64_t mc_seed = replica_seed(c.seed, "return-mc", 0);
  const auto mc = return_probability_mc(c.alpha, c.mc_n, c.mc_walks, mc_seed, c.budget(), &dropped);
  for (const auto& e : mc) agg.push_back(row(exp, "mc", mc_seed, -1, e.n, e.p, e.stderr_, 0, e.walks));
  RunResult result{exp, flatten(parts), summary_base(c, exp)};

  auto& sm = result.summary;
  sm["exact_maps_used"] = used;
  sm["exact_maps_dropped"] = static_cast<std::size_t>(c.exact_maps) - used;
  sm["mc_walks_dropped"] = dropped;
  json overlap = json::array();
  double max_z = 0.0;
  for (const auto& e : mc) {
    if (used < 2 || e.n < 2 || e.n > c.exact_n_max) continue;
    const auto t = static_cast<std::size_t>(e.n);
    const double sd = std::sqrt(e.stderr_ * e.stderr_ + exact_se[t] * exact_se[t]);
    const double z = sd > 0.0 ? (e.p - exact_mean[t]) / sd : (e.p == exact_mean[t] ? 0.0 : INFINITY);
    max_z = std::max(max_z, std::abs(z));
    overlap.push_back(json{{"n", e.n}, {"mc", e.p}, {"mc_se", e.stderr_}, {"exact_mean", exact_mean[t]},
                           {"exact_se", exact_se[t]}, {"z", z}});
  }
  sm["overlap"] = overlap;
  sm["overlap_max_abs_z"] = max_z;
  sm["overlap_agrees"] = !overlap.empty() && max_z <= 3.0;

  // Exponent fit on the MC grid: the exact mean where available, MC beyond.
  std::vector<double> lx, ly;
  json points = json::array();
  for (const auto& e : mc) {
    if (e.n < 2) continue;
    double p = 0.0;
    std::string source;
    if (used >= 2 && e.n <= c.exact_n_max) {
      p = exact_mean[static_cast<std::size_t>(e.n)];
      source = "exact";
    } else if (e.hits >= static_cast<std::uint64_t>(c.mc_min_hits)) {
      p = e.p;
      source = "mc";
    } else {
      continue;
    }
    if (p <= 0.0 || p >= 1.0) continue;
    lx.push_back(std::log(e.n));
    ly.push_back(std::log(-std::log(p)));
    points.push_back(json{{"n", e.n}, {"p", p}, {"source", source}});
  }
  sm["fit_points"] = points;
  if (lx.size() >= 3) {
    const auto fit = fit_line(lx, ly);
    sm["kappa_fit"] = fit_json(fit);
    sm["kappa"] = fit.slope;
    sm["kappa_in_range"] = fit.slope >= 0.2 && fit.slope <= 0.5;
  }
  return result;
}

RunResult run_volume(const ExperimentConfig& c) {
  const std::string exp = "volume";
  const auto law = law_for(c);
  std::vector<std::vector<ResultRow>> parts(static_cast<std::size_t>(c.replicas));
  parallel_replicas(c.replicas, [&](int r) {
    const std::uint64_t s = replica_seed(c.seed, exp, static_cast<std::uint64_t>(r));
    LazyHalfPlane lazy(law, s, 8, c.budget());
    const auto report = lazy.reveal_hull({lazy.map().root_vertex()}, c.r_max);
    auto& out = parts[static_cast<std::size_t>(r)];
    for (int k = 0; k <= report.exact_radius; ++k) {
      const auto idx = static_cast<std::size_t>(k);
      out.push_back(row(exp, "ball", s, r, k, static_cast<double>(report.ball_sizes[idx]), 0.0, 1));
      out.push_back(row(exp, "hull", s, r, k, static_cast<double>(report.hull_sizes[idx]), 0.0, 1));
    }
    out.push_back(row(exp, "peels", s, r, c.r_max, static_cast<double>(report.peels), 0.0, -1, report.peels));
    out.push_back(row(exp, "complete", s, r, c.r_max, report.status == RevealStatus::Complete ? 1.0 : 0.0));
  });
  RunResult result{exp, flatten(parts), summary_base(c, exp)};

  std::vector<char> complete(static_cast<std::size_t>(c.replicas), 0);
  for (const auto& r : result.rows) {
    if (r.quantity == "complete") complete[static_cast<std::size_t>(r.replica)] = r.value != 0.0;
  }
  std::vector<std::vector<double>> logs(static_cast<std::size_t>(c.r_max) + 1);
  for (const auto& r : result.rows) {
    if (r.quantity == "ball" && complete[static_cast<std::size_t>(r.replica)]) {
      logs[static_cast<std::size_t>(r.x)].push_back(std::log(r.value));
    }
  }
  std::vector<double> mean_log, radii;
  for (std::size_t k = 0; k < logs.size(); ++k) {
    if (logs[k].empty()) break;
    mean_log.push_back(mean(logs[k]));
    radii.push_back(static_cast<double>(k));
    result.rows.push_back(row(exp, "mean_log_ball", c.seed, -1, static_cast<double>(k), mean_log.back(),
                              standard_error(logs[k]), 0, logs[k].size()));
  }
  sort_rows(result.rows);
  auto& sm = result.summary;
  sm["replicas_complete"] = std::count(complete.begin(), complete.end(), 1);
  sm["mean_log_ball"] = mean_log;
  if (mean_log.size() >= 4) {
    std::vector<double> x(radii.begin() + 1, radii.end()), y(mean_log.begin() + 1, mean_log.end());
    const auto fit = fit_line(x, y);
    sm["log_ball_fit"] = fit_json(fit);
    // per-replica growth constants: a = min, b = max of |B_r|^{1/r} over replicas at r = r_max
    std::vector<double> growth;
    for (double l : logs.back()) growth.push_back(std::exp(l / static_cast<double>(logs.size() - 1)));
    if (!growth.empty() && logs.size() > 1) {
      sm["growth_a"] = *std::min_element(growth.begin(), growth.end());
      sm["growth_b"] = *std::max_element(growth.begin(), growth.end());
    }
  }
  const auto stab = volume_stability(mean_log);
  sm["early_slope"] = stab.early_slope;
  sm["late_slope"] = stab.late_slope;
  sm["stable"] = stab.stable;
  return result;
}

RunResult run_boundary_distance(const ExperimentConfig& c) {
  const std::string exp = "boundary-dist";
  const auto law = law_for(c);
  std::vector<std::vector<ResultRow>> parts(static_cast<std::size_t>(c.replicas));
  parallel_replicas(c.replicas, [&](int r) {
    const std::uint64_t s = replica_seed(c.seed, exp, static_cast<std::uint64_t>(r));
    LazyHalfPlane lazy(law, s, 8, c.budget());
    auto& out = parts[static_cast<std::size_t>(r)];
    const VertexId v0 = lazy.map().line_vertex(0);
    for (int j : c.boundary_j) {
      if (j < 1) throw std::invalid_argument("boundary-dist: j must be positive");
      if (lazy.map().window_right() < j + 1) lazy.map().extend_right(static_cast<int>(j + 1 - lazy.map().window_right()));
      const VertexId vj = lazy.map().line_vertex(j);
      const std::uint64_t start = lazy.peel_count();
      DistanceCertificate cert = certify_distance(lazy.map(), v0, {vj});
      const Budget saved = lazy.budget();
      for (int radius = 1; !cert.exact; ++radius) {
        const std::uint64_t spent = lazy.peel_count() - start;
        if (spent >= c.certify_peels) break;
        Budget local = saved;
        local.max_peels = std::min(saved.max_peels, lazy.peel_count() + (c.certify_peels - spent));
        lazy.set_budget(local);
        const auto hull = lazy.reveal_hull({v0, vj}, radius);
        lazy.set_budget(saved);
        cert = certify_distance(lazy.map(), v0, {vj});
        if (hull.status == RevealStatus::BudgetExhausted) break;
      }
      const std::uint64_t cost = lazy.peel_count() - start;
      out.push_back(row(exp, "dist_lower", s, r, j, cert.lower, 0.0, cert.exact ? 1 : 0, cost));
      out.push_back(row(exp, "dist_upper", s, r, j, cert.upper, 0.0, cert.exact ? 1 : 0, cost));
    }
    for (int n = 1; n <= c.ball_boundary_r; ++n) {
      const auto hull = lazy.reveal_hull({v0}, n);
      if (hull.status == RevealStatus::BudgetExhausted) break;
      const auto dist = bfs_distances(lazy.map(), {v0}, n);
      std::size_t on_line = 0;
      for (auto k = lazy.map().window_left(); k <= lazy.map().window_right(); ++k) {
        on_line += dist[lazy.map().line_vertex(k).index()] >= 0 ? 1 : 0;
      }
      out.push_back(row(exp, "ball_boundary", s, r, n, static_cast<double>(on_line), 0.0, 1, hull.peels));
    }
  });
  RunResult result{exp, flatten(parts), summary_base(c, exp)};

  auto& sm = result.summary;
  json per_j = json::array();
  for (int j : c.boundary_j) {
    std::vector<double> lower, upper;
    std::size_t exact = 0;
    for (const auto& r : result.rows) {
      if (r.x != j) continue;
      if (r.quantity == "dist_lower") {
        lower.push_back(r.value / j);
        exact += r.exact == 1 ? 1 : 0;
      }
      if (r.quantity == "dist_upper") upper.push_back(r.value / j);
    }
    if (lower.empty()) continue;
    per_j.push_back(json{{"j", j},
                         {"lower_ratio_q01", quantile(lower, 0.01)},
                         {"lower_ratio_min", *std::min_element(lower.begin(), lower.end())},
                         {"lower_ratio_mean", mean(lower)},
                         {"upper_ratio_mean", mean(upper)},
                         {"exact_fraction", static_cast<double>(exact) / static_cast<double>(lower.size())}});
  }
  sm["distance_ratios"] = per_j;
  json ball = json::array();
  for (int n = 1; n <= c.ball_boundary_r; ++n) {
    std::vector<double> ratio;
    for (const auto& r : result.rows) {
      if (r.quantity == "ball_boundary" && r.x == n) ratio.push_back(r.value / n);
    }
    if (ratio.empty()) continue;
    ball.push_back(json{{"n", n}, {"ratio_q01", quantile(ratio, 0.01)}, {"ratio_mean", mean(ratio)}});
  }
  sm["ball_boundary_ratios"] = ball;
  return result;
}

RunResult run_step_tails(const ExperimentConfig& c) {
  const std::string exp = "step-tails";
  const auto law = law_for(c);
  const int reps = std::max(1, c.replicas);
  std::vector<std::vector<std::uint64_t>> hist(static_cast<std::size_t>(reps));
  std::vector<std::vector<ResultRow>> parts(static_cast<std::size_t>(reps) + 1);
  parallel_replicas(reps, [&](int r) {
    const std::uint64_t s = replica_seed(c.seed, exp, static_cast<std::uint64_t>(r));
    const std::uint64_t steps = c.tail_steps / static_cast<std::uint64_t>(reps) +
                                (static_cast<std::uint64_t>(r) < c.tail_steps % static_cast<std::uint64_t>(reps) ? 1 : 0);
    Budget b = c.budget();
    b.max_peels = steps;
    LazyHalfPlane lazy(law, s, 8, b);
    lazy.record_events(true);
    // The domain Markov property makes the events i.i.d. whichever edges are peeled.
    for (int radius = 1; lazy.peel_count() < steps; ++radius) {
      if (lazy.reveal_hull({lazy.map().root_vertex()}, radius).status == RevealStatus::BudgetExhausted) break;
    }
    auto& h = hist[static_cast<std::size_t>(r)];
    for (const auto& e : lazy.events()) {
      const auto k = static_cast<std::size_t>(e.edges_added);
      if (h.size() <= k) h.resize(k + 1, 0);
      ++h[k];
    }
    parts[static_cast<std::size_t>(r)].push_back(row(exp, "events", s, r, 0, static_cast<double>(lazy.events().size()),
                                                     0.0, -1, lazy.peel_count()));
  });
  std::vector<std::uint64_t> total;
  for (const auto& h : hist) {
    if (total.size() < h.size()) total.resize(h.size(), 0);
    for (std::size_t k = 0; k < h.size(); ++k) total[k] += h[k];
  }
  std::uint64_t count = 0;
  for (auto v : total) count += v;
  std::uint64_t remaining = count;
  for (std::size_t k = 0; k < total.size(); ++k) {
    parts.back().push_back(row(exp, "edges_added", c.seed, -1, static_cast<double>(k), static_cast<double>(total[k])));
    parts.back().push_back(row(exp, "survival", c.seed, -1, static_cast<double>(k),
                               count ? static_cast<double>(remaining) / static_cast<double>(count) : 0.0));
    remaining -= total[k];
  }
  RunResult result{exp, flatten(parts), summary_base(c, exp)};
  const auto fit = fit_survival_tail(total, c.tail_min_count);
  auto& sm = result.summary;
  sm["events"] = count;
  sm["tail_fit"] = json{{"ok", fit.ok}, {"mode", fit.mode}, {"k_max", fit.k_max}, {"slope", fit.slope},
                        {"r2", fit.r2}, {"points", fit.points}};
  sm["log_linear"] = fit.ok && fit.slope < 0.0 && fit.r2 > 0.95;
  return result;
}

RunResult run_traps(const ExperimentConfig& c) {
  const std::string exp = "traps";
  RunResult result{exp, {}, summary_base(c, exp)};
  json traps = json::array();
  for (int n : c.trap_orders) {
    const long t = static_cast<long>(n) * n * n;
    const auto p = trap_confinement_dp(n, t);
    const double c_hat = -static_cast<double>(n) * n * p.log_probability / static_cast<double>(t);
    result.rows.push_back(row(exp, "trap_log_p", c.seed, -1, n, p.log_probability, 0.0, 1));
    result.rows.push_back(row(exp, "trap_c", c.seed, -1, n, c_hat, 0.0, 1));
    traps.push_back(json{{"n", n}, {"t", t}, {"log_p", p.log_probability}, {"c", c_hat}, {"lumpable", trap_lumpable(build_trap(n))}});
  }
  json intervals = json::array();
  for (int n : c.interval_orders) {
    const long t = static_cast<long>(n) * n * n;
    const auto p = interval_confinement_dp(n, t);
    const double c_hat = -static_cast<double>(n) * n * p.log_probability / static_cast<double>(t);
    result.rows.push_back(row(exp, "interval_log_p", c.seed, -1, n, p.log_probability, 0.0, 1));
    result.rows.push_back(row(exp, "interval_c", c.seed, -1, n, c_hat, 0.0, 1));
    intervals.push_back(json{{"n", n}, {"t", t}, {"log_p", p.log_probability}, {"c", c_hat}});
  }
  sort_rows(result.rows);
  result.summary["traps"] = traps;
  result.summary["intervals"] = intervals;
  return result;
}

}  // namespace hyperwalk
