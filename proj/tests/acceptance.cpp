// Acceptance run: one PASS/FAIL line per criterion, full sizes.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hyperwalk/expansion.hpp"
#include "hyperwalk/harness.hpp"
#include "hyperwalk/stats.hpp"
#include "hyperwalk/trap.hpp"
#include "hyperwalk/walk.hpp"

using namespace hyperwalk;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double z_score(std::uint64_t hits, std::uint64_t trials, double p) {
  const double n = static_cast<double>(trials);
  return (static_cast<double>(hits) / n - p) / std::sqrt(p * (1 - p) / n);
}

Outcome criterion1() {
  std::ostringstream d;
  bool ok = true;
  for (double alpha : {0.70, 0.75, 0.80, 0.90}) {
    const auto law = make_step_law(alpha);
    const double err = law.normalization_error();
    ok = ok && std::abs(err) <= 1e-10;
    d << "alpha=" << alpha << " err=" << err << " ";
  }
  return {ok, d.str()};
}

Outcome criterion2() {
  std::ostringstream d;
  double worst_z2 = 0.0, worst_rec = 0.0;
  for (double q = 0.0; q <= 0.0741; q += 0.002) {
    worst_z2 = std::max(worst_z2, std::abs(partition_Z(2, q) - 1.0 - q * partition_Z(3, q)));
    for (int p = 3; p <= 20; ++p) {
      double rhs = q * partition_Z(p + 1, q);
      for (int j = 1; j <= p - 2; ++j) rhs += partition_Z(j + 1, q) * partition_Z(p - j, q);
      worst_rec = std::max(worst_rec, std::abs(rhs / partition_Z(p, q) - 1.0));
    }
  }
  d << "max |Z2 - 1 - qZ3| = " << worst_z2 << ", max relative one-step residual = " << worst_rec;
  bool ok = worst_z2 <= 1e-12 && worst_rec <= 1e-12;
  const double q = 0.06;
  FreeSampler sampler(q);
  Rng rng(replica_seed(1, "acceptance-sampler", 0));
  for (int m : {2, 3, 4}) {
    const int samples = 100000;
    std::vector<std::uint64_t> counts(5, 0);
    for (int k = 0; k < samples; ++k) {
      FreeSampleStats stats;
      sampler.sample(m, rng, &stats);
      ++counts[static_cast<std::size_t>(std::min(stats.internal_vertex_count, 4))];
    }
    std::vector<double> probs;
    for (int n = 0; n <= 3; ++n) {
      probs.push_back(phi_count(n, m, 12).convert_to<double>() * std::pow(q, n) / partition_Z(m, q));
    }
    const auto test = chi_square_test(counts, probs);
    ok = ok && test.p_value >= 0.01;
    d << "; m=" << m << " chi2=" << test.statistic << " dof=" << test.dof << " p=" << test.p_value;
  }
  return {ok, d.str()};
}

Outcome criterion3() {
  auto law = std::make_shared<const StepLaw>(make_step_law(0.8));
  const std::uint64_t maps = 100000;
  std::uint64_t alpha = 0, digon = 0, two_face = 0;
  for (std::uint64_t k = 0; k < maps; ++k) {
    LazyHalfPlane lazy(law, replica_seed(1, "acceptance-events", k));
    const auto first = lazy.peel_edge(lazy.map().root());
    alpha += first.kind == PeelKind::Alpha ? 1 : 0;
    digon += first.empty_digon() && first.side == Side::Right ? 1 : 0;
    if (first.kind == PeelKind::Alpha) {
      // alpha-triangle on the root, then an empty (R,1) on the edge into v_1: V = 1, F = 2
      const auto into = lazy.map().frontier_edge_into(lazy.map().line_vertex(1));
      const auto second = lazy.peel_edge(*into);
      two_face += second.empty_digon() && second.side == Side::Right ? 1 : 0;
    }
  }
  const double za = z_score(alpha, maps, event_probability(1, 1, 0.8));
  const double zb = z_score(digon, maps, event_probability(0, 1, 0.8));
  const double zq = z_score(two_face, maps, event_probability(1, 2, 0.8));
  std::ostringstream d;
  d << "alpha z=" << za << ", empty (R,1) z=" << zb << " (beta=" << law->beta << "), two-face z=" << zq
    << " (alpha*beta=" << event_probability(1, 2, 0.8) << ")";
  return {std::abs(za) <= 3 && std::abs(zb) <= 3 && std::abs(zq) <= 3, d.str()};
}

Outcome criterion4() {
  std::ostringstream d;
  const bool interval = interval_confinement_exact(2, 4) == BigRational(8, 81);
  bool lump = true;
  for (int n = 1; n <= 16; ++n) lump = lump && trap_lumpable(build_trap(n));
  Rng rng(replica_seed(1, "acceptance-graphs", 0));
  int graphs = 0, cv_fail = 0, hit_fail = 0, spec_fail = 0;
  for (int k = 0; k < 120; ++k) {
    const auto g = random_graph(rng, 3 + static_cast<int>(rng.below(10)), 3, true);
    ++graphs;
    for (int n : {1, 2, 5, 10, 20}) cv_fail += carne_varopoulos_check(g, 0, n).holds ? 0 : 1;
    const auto spectral = spectral_bound_check(g);
    spec_fail += spectral.holds && spectral.returns_hold ? 0 : 1;
    const auto h = random_graph(rng, 3 + static_cast<int>(rng.below(6)), 1);
    for (int m = 1; m <= 2; ++m) hit_fail += hitting_tail_check(h, {h.size() - 1}, m).holds ? 0 : 1;
  }
  d << "8/81 " << (interval ? "exact" : "WRONG") << ", lumpable n<=16: " << (lump ? "yes" : "no") << ", " << graphs
    << " graphs: CV failures=" << cv_fail << " hitting failures=" << hit_fail << " spectral failures=" << spec_fail;
  return {interval && lump && cv_fail == 0 && hit_fail == 0 && spec_fail == 0, d.str()};
}

Outcome criterion5() {
  Rng rng(replica_seed(1, "acceptance-expansion", 0));
  int graphs = 0, closure = 0, sinking = 0, symmetry = 0, cheeger = 0;
  double min_margin = INFINITY;
  for (int k = 0; k < 200; ++k) {
    const auto g = random_graph(rng, 5 + static_cast<int>(rng.below(10)), 3, true);  // at most 14 vertices
    const double i = 0.05 + 0.6 * rng.uniform();
    const auto oc = ocean_chain(g, i, 14);
    ++graphs;
    for (std::size_t a = 0; a < oc.report.sets.size(); ++a) {
      for (std::size_t b = a + 1; b < oc.report.sets.size(); ++b) {
        std::vector<int> u;
        std::set_union(oc.report.sets[a].vertices.begin(), oc.report.sets[a].vertices.end(),
                       oc.report.sets[b].vertices.begin(), oc.report.sets[b].vertices.end(), std::back_inserter(u));
        closure += is_core(g, u, i) ? 0 : 1;
      }
    }
    const auto smaller = enumerate_cores(g, i * rng.uniform(), 14);
    sinking += std::includes(oc.report.union_set.begin(), oc.report.union_set.end(), smaller.union_set.begin(),
                             smaller.union_set.end())
                   ? 0
                   : 1;
    if (oc.weights.size() > 0) symmetry += (oc.weights - oc.weights.transpose()).cwiseAbs().maxCoeff() <= 1e-10 ? 0 : 1;
    const double h = cheeger_bruteforce(oc.graph).value;
    min_margin = std::min(min_margin, h - i);
    cheeger += h >= i - 1e-12 ? 0 : 1;
  }
  std::ostringstream d;
  d << graphs << " graphs: union-closure failures=" << closure << " sinking failures=" << sinking
    << " asymmetric=" << symmetry << " ocean Cheeger < i: " << cheeger << " (min margin " << min_margin << ")";
  return {closure == 0 && sinking == 0 && symmetry == 0 && cheeger == 0, d.str()};
}

Outcome criterion6() {
  ExperimentConfig c;
  c.alpha = 0.8;
  c.replicas = 50;
  c.n_max = 2000;
  const auto r = run_speed(c);
  const auto& s = r.summary;
  std::ostringstream d;
  if (!s.contains("lower_over_n_q01") || !s.contains("last_visit_median")) return {false, "no finished replicas"};
  const double q01 = s["lower_over_n_q01"].get<double>();
  const double median_last = s["last_visit_median"].get<double>();
  const bool all_finished = s["replicas_paused"].get<int>() == 0;
  d << "q01(lower/n)=" << q01 << " (upper/n q01=" << s["upper_over_n_q01"].get<double>()
    << "), last visit median=" << median_last << " max=" << s["last_visit_max"].get<double>()
    << ", visits max=" << s["visits_max"].get<double>() << ", paused=" << s["replicas_paused"].get<int>();
  // "median << n_max" pinned as at most n_max / 10
  return {q01 > 0.0 && median_last <= c.n_max / 10.0 && all_finished, d.str()};
}

Outcome criterion7() {
  ExperimentConfig c;
  const auto r = run_return_prob(c);
  const auto& s = r.summary;
  std::ostringstream d;
  if (!s.contains("kappa")) return {false, "too few points for the exponent fit"};
  d << "kappa=" << s["kappa"].get<double>() << " (se " << s["kappa_fit"]["slope_se"].get<double>()
    << ", points " << s["kappa_fit"]["points"].get<int>() << "), overlap max |z|=" << s["overlap_max_abs_z"].get<double>()
    << ", exact maps used=" << s["exact_maps_used"].get<int>() << ", indicative only";
  return {s["kappa_in_range"].get<bool>() && s["overlap_agrees"].get<bool>(), d.str()};
}

Outcome criterion8() {
  std::ostringstream d;
  ExperimentConfig vc;
  vc.replicas = 50;
  vc.r_max = 8;
  vc.budget_vertices = 10'000'000;
  const auto vol = run_volume(vc);
  const bool stable = vol.summary["stable"].get<bool>();
  const double slope = vol.summary.contains("log_ball_fit") ? vol.summary["log_ball_fit"]["slope"].get<double>() : 0.0;
  d << "log|B_r| slope=" << slope << " early=" << vol.summary["early_slope"].get<double>()
    << " late=" << vol.summary["late_slope"].get<double>() << " complete=" << vol.summary["replicas_complete"].get<int>();

  ExperimentConfig bc;
  const auto bd = run_boundary_distance(bc);
  double q01 = 0.0;
  for (const auto& e : bd.summary["distance_ratios"]) {
    if (e["j"].get<int>() == 20) q01 = e["lower_ratio_q01"].get<double>();
  }
  d << "; q01(d(v0,v20)/20)=" << q01;

  ExperimentConfig tc;
  const auto tails = run_step_tails(tc);
  const auto& fit = tails.summary["tail_fit"];
  d << "; edges-added tail slope=" << fit["slope"].get<double>() << " R2=" << fit["r2"].get<double>();
  return {stable && slope > 0.0 && q01 > 0.0 && tails.summary["log_linear"].get<bool>(), d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria 1-8"};
  std::vector<int> only;
  app.add_option("criteria", only, "Criteria to run (default: all)");
  CLI11_PARSE(app, argc, argv);
  std::setvbuf(stdout, nullptr, _IONBF, 0);

  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                       criterion5, criterion6, criterion7, criterion8};
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str(), secs);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
