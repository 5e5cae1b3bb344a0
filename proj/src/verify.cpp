#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "hyperwalk/boltzmann.hpp"
#include "hyperwalk/expansion.hpp"
#include "hyperwalk/harness.hpp"
#include "hyperwalk/stats.hpp"
#include "hyperwalk/trap.hpp"
#include "hyperwalk/walk.hpp"

namespace hyperwalk {

namespace {

using nlohmann::json;

class Suite {
 public:
  Suite(std::string name, std::uint64_t seed, VerifyReport& report) : name_(std::move(name)), seed_(seed), report_(report) {}

  [[nodiscard]] std::uint64_t seed(const std::string& check) const { return replica_seed(seed_, name_ + "/" + check, 0); }

  // body returns a diagnostic line; it fails by returning false through `ok`.
  void check(const std::string& name, const std::function<bool(std::uint64_t, std::ostream&)>& body) {
    VerifyCheck c;
    c.suite = name_;
    c.name = name;
    c.seed = seed(name);
    std::ostringstream detail;
    try {
      c.passed = body(c.seed, detail);
    } catch (const std::exception& e) {
      c.passed = false;
      detail << "exception: " << e.what();
    }
    c.detail = detail.str();
    report_.checks.push_back(std::move(c));
  }

 private:
  std::string name_;
  std::uint64_t seed_;
  VerifyReport& report_;
};

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

void suite_boltzmann(Suite& s) {
  s.check("theta_endpoints", [](std::uint64_t, std::ostream& d) {
    const double t0 = solve_theta(0.0);
    const double t1 = solve_theta(kCriticalQ);
    const double t = solve_theta(0.064);
    const double forward = t * (1 - 2 * t) * (1 - 2 * t);
    d << "theta(0)=" << t0 << " theta(2/27)=" << t1 << " |forward-0.064|=" << std::abs(forward - 0.064);
    return t0 == 0.0 && near(t1, 1.0 / 6.0, 1e-14) && near(forward, 0.064, 1e-14);
  });
  s.check("z_small_values", [](std::uint64_t, std::ostream& d) {
    d << "Z2(0)=" << partition_Z(2, 0) << " Z3(0)=" << partition_Z(3, 0) << " Z2(2/27)=" << partition_Z(2, kCriticalQ);
    return near(partition_Z(2, 0), 1, 1e-15) && near(partition_Z(3, 0), 1, 1e-15) &&
           near(partition_Z(2, kCriticalQ), 9.0 / 8.0, 1e-12);
  });
  s.check("z2_identity", [](std::uint64_t, std::ostream& d) {
    double worst = 0.0;
    for (double q = 0.01; q <= 0.0741; q += 0.002) {
      worst = std::max(worst, std::abs(partition_Z(2, q) - 1.0 - q * partition_Z(3, q)));
    }
    d << "max |Z2 - 1 - qZ3| = " << worst;
    return worst < 1e-12;
  });
  s.check("one_step_recursion", [](std::uint64_t, std::ostream& d) {
    double worst = 0.0;
    for (double q : {0.01, 0.03, 0.05, 0.064, 0.07, kCriticalQ}) {
      FreeSampler sampler(q);
      for (int p = 2; p <= 30; ++p) {
        double total = 0.0;
        for (double x : sampler.step_law(p)) total += x;
        worst = std::max(worst, std::abs(total - 1.0));
      }
    }
    d << "max |sum of one-step law - 1| = " << worst;
    return worst < 1e-12;
  });
  s.check("phi_small_counts", [](std::uint64_t, std::ostream& d) {
    d << "phi(0,3)=" << phi_count(0, 3) << " phi(0,4)=" << phi_count(0, 4) << " phi(1,3)=" << phi_count(1, 3);
    return phi_count(0, 3) == 1 && phi_count(0, 4) == 2 && phi_count(0, 2) == 1;
  });
  s.check("phi_series_below_z", [](std::uint64_t, std::ostream& d) {
    const double q = 0.01;
    double partial = 0.0;
    double last_gap = INFINITY;
    bool ok = true;
    for (int n = 0; n + 3 <= 14; ++n) {
      partial += phi_count(n, 3, 14).convert_to<double>() * std::pow(q, n);
      const double gap = partition_Z(3, q) - partial;
      ok = ok && gap >= -1e-15 && gap < last_gap;
      last_gap = gap;
    }
    d << "Z3(0.01) - partial sum (n<=11) = " << last_gap;
    return ok && last_gap < 1e-10;
  });
  s.check("sampler_chi_square_m3", [](std::uint64_t seed, std::ostream& d) {
    const double q = 0.06;
    FreeSampler sampler(q);
    Rng rng(seed);
    std::vector<std::uint64_t> counts(5, 0);
    const int samples = 20000;
    for (int k = 0; k < samples; ++k) {
      FreeSampleStats st;
      sampler.sample(3, rng, &st);
      ++counts[static_cast<std::size_t>(std::min(st.internal_vertex_count, 4))];
    }
    std::vector<double> probs;
    for (int n = 0; n <= 3; ++n) probs.push_back(phi_count(n, 3).convert_to<double>() * std::pow(q, n) / partition_Z(3, q));
    const auto chi = chi_square_test(counts, probs);
    d << "chi2=" << chi.statistic << " dof=" << chi.dof << " p=" << chi.p_value;
    return chi.p_value > 0.01;
  });
}

void suite_steplaw(Suite& s) {
  s.check("normalization", [](std::uint64_t, std::ostream& d) {
    bool ok = true;
    for (double a : {0.70, 0.75, 0.80, 0.90}) {
      const auto law = make_step_law(a);
      d << "alpha=" << a << " I_max=" << law.i_max << " err=" << law.normalization_error() << "; ";
      ok = ok && std::abs(law.normalization_error()) <= 1e-10;
    }
    return ok;
  });
  s.check("geometric_decay", [](std::uint64_t, std::ostream& d) {
    const auto law = make_step_law(0.8);
    const int i = law.i_max;
    const double slope = std::log(law.p_i(i) / law.p_i(i - 1));
    // the i^{-3/2} factor contributes -1.5 log(i / (i-1)) to consecutive ratios
    const double corrected = slope + 1.5 * std::log(static_cast<double>(i) / (i - 1));
    d << "log(p_i/p_{i-1}) at I_max, corrected = " << corrected << " vs log 0.5 = " << std::log(0.5);
    return std::abs(corrected - std::log(0.5)) <= 0.05 * std::abs(std::log(0.5));
  });
  s.check("root_event_frequencies", [](std::uint64_t seed, std::ostream& d) {
    auto law = std::make_shared<const StepLaw>(make_step_law(0.8));
    const int trials = 20000;
    int alpha_steps = 0, digons = 0;
    for (int k = 0; k < trials; ++k) {
      LazyHalfPlane lazy(law, replica_seed(seed, "root", static_cast<std::uint64_t>(k)));
      const auto e = lazy.peel_edge(lazy.map().root());
      alpha_steps += e.kind == PeelKind::Alpha ? 1 : 0;
      digons += e.empty_digon() && e.side == Side::Right ? 1 : 0;
    }
    const double fa = static_cast<double>(alpha_steps) / trials;
    const double fb = static_cast<double>(digons) / trials;
    const double beta = law->beta;
    const double za = (fa - 0.8) / std::sqrt(0.8 * 0.2 / trials);
    const double zb = (fb - beta) / std::sqrt(beta * (1 - beta) / trials);
    d << "alpha freq=" << fa << " (z=" << za << ") empty (R,1) freq=" << fb << " (z=" << zb << ")";
    return std::abs(za) <= 3 && std::abs(zb) <= 3;
  });
}

void suite_maps(Suite& s) {
  s.check("segment_counts", [](std::uint64_t, std::ostream& d) {
    const auto m1 = HalfEdgeMap::half_plane_segment(1);
    const auto m3 = HalfEdgeMap::half_plane_segment(3);
    d << "w1: V=" << m1.vertex_count() << " E=" << m1.edge_count() << "; w3: V=" << m3.vertex_count()
      << " E=" << m3.edge_count();
    return m1.vertex_count() == 2 && m1.edge_count() == 1 && m1.face_count() == 0 && m3.vertex_count() == 4 &&
           m3.edge_count() == 3 && m3.check_integrity().ok();
  });
  s.check("alpha_triangle", [](std::uint64_t, std::ostream& d) {
    auto m = HalfEdgeMap::half_plane_segment(3);
    const auto before = m.boundary_path().size();
    m.attach_alpha_triangle(m.root());
    d << "V=" << m.vertex_count() << " E=" << m.edge_count() << " F=" << m.face_count();
    return m.vertex_count() == 5 && m.edge_count() == 5 && m.face_count() == 1 &&
           m.boundary_path().size() == before + 1 && m.check_integrity().ok();
  });
  s.check("integrity_after_hulls", [](std::uint64_t seed, std::ostream& d) {
    auto law = std::make_shared<const StepLaw>(make_step_law(0.8));
    for (int k = 0; k < 10; ++k) {
      LazyHalfPlane lazy(law, replica_seed(seed, "hull", static_cast<std::uint64_t>(k)));
      lazy.reveal_hull({lazy.map().root_vertex()}, 3);
      const auto report = lazy.map().check_integrity();
      if (!report.ok()) {
        d << "map " << k << ": " << report.to_string();
        return false;
      }
    }
    d << "10 hulls of radius 3 pass the integrity check";
    return true;
  });
  s.check("serialize_round_trip", [](std::uint64_t seed, std::ostream& d) {
    auto law = std::make_shared<const StepLaw>(make_step_law(0.8));
    LazyHalfPlane lazy(law, seed);
    lazy.reveal_hull({lazy.map().root_vertex()}, 2);
    const std::string text = serialize(lazy.map());
    const HalfEdgeMap back = deserialize(text);
    d << "V=" << back.vertex_count() << " bytes=" << text.size();
    return serialize(back) == text && back.check_integrity().ok();
  });
  s.check("corruption_detected", [](std::uint64_t, std::ostream& d) {
    auto m = HalfEdgeMap::half_plane_segment(3);
    m.attach_alpha_triangle(m.root());
    m.mutable_half_edge_for_testing(HalfEdgeId(0)).twin = HalfEdgeId(2);
    const auto report = m.check_integrity();
    d << report.to_string();
    return !report.ok() && report.to_string().find("half-edge 0") != std::string::npos;
  });
}

void suite_expansion(Suite& s) {
  s.check("spectral_and_returns", [](std::uint64_t seed, std::ostream& d) {
    Rng rng(seed);
    int failures = 0;
    for (int k = 0; k < 40; ++k) {
      const auto g = random_graph(rng, 4 + static_cast<int>(rng.below(9)), 3, true);
      const auto rep = spectral_bound_check(g);
      failures += rep.holds && rep.returns_hold ? 0 : 1;
    }
    d << failures << " of 40 graphs violate ||P|| <= 1 - i^2/2 or the return bound";
    return failures == 0;
  });
  s.check("carne_varopoulos", [](std::uint64_t seed, std::ostream& d) {
    Rng rng(seed);
    double worst = 0.0;
    for (int k = 0; k < 40; ++k) {
      const auto g = random_graph(rng, 4 + static_cast<int>(rng.below(9)), 3);
      for (int n : {1, 2, 5, 10, 20}) worst = std::max(worst, carne_varopoulos_check(g, 0, n).max_slack);
    }
    d << "max slack = " << worst;
    return worst <= 1.0;
  });
  s.check("hitting_tail", [](std::uint64_t seed, std::ostream& d) {
    Rng rng(seed);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const auto g = random_graph(rng, 3 + static_cast<int>(rng.below(6)), 1);
      for (int m = 1; m <= 2; ++m) {
        const auto rep = hitting_tail_check(g, {g.size() - 1}, m);
        worst = std::max(worst, rep.max_survival / rep.bound);
      }
    }
    d << "max survival / 2^-m = " << worst;
    return worst <= 1.0;
  });
  s.check("cores_and_oceans", [](std::uint64_t seed, std::ostream& d) {
    Rng rng(seed);
    int bad = 0;
    for (int k = 0; k < 30; ++k) {
      const auto g = random_graph(rng, 5 + static_cast<int>(rng.below(7)), 3, true);
      const double i = 0.05 + 0.5 * rng.uniform();
      const auto oc = ocean_chain(g, i);
      const double asym = (oc.weights - oc.weights.transpose()).cwiseAbs().maxCoeff();
      const double cheeger = cheeger_bruteforce(oc.graph).value;
      const auto smaller = enumerate_cores(g, i * rng.uniform());
      const bool sinks = std::includes(oc.report.union_set.begin(), oc.report.union_set.end(), smaller.union_set.begin(),
                                       smaller.union_set.end());
      bool unions = true;
      for (std::size_t a = 0; a < oc.report.sets.size() && a < 6; ++a) {
        for (std::size_t b = a + 1; b < oc.report.sets.size() && b < 6; ++b) {
          std::vector<int> u;
          std::set_union(oc.report.sets[a].vertices.begin(), oc.report.sets[a].vertices.end(),
                         oc.report.sets[b].vertices.begin(), oc.report.sets[b].vertices.end(), std::back_inserter(u));
          unions = unions && is_core(g, u, i);
        }
      }
      bad += asym <= 1e-10 && cheeger >= i - 1e-12 && sinks && unions ? 0 : 1;
    }
    d << bad << " of 30 graphs fail symmetry, ocean Cheeger >= i, sinking or core unions";
    return bad == 0;
  });
}

void suite_traps(Suite& s) {
  s.check("interval_8_81", [](std::uint64_t, std::ostream& d) {
    const auto exact = interval_confinement_exact(2, 4);
    d << "P = " << exact << "; float DP = " << interval_confinement_dp(2, 4).probability;
    return exact == BigRational(8, 81) && near(interval_confinement_dp(2, 4).probability, 8.0 / 81.0, 1e-15);
  });
  s.check("lumpability", [](std::uint64_t, std::ostream& d) {
    for (int n = 1; n <= 16; ++n) {
      const auto trap = build_trap(n);
      if (!trap_lumpable(trap) || !trap_map(trap).check_integrity().ok()) {
        d << "order " << n << " fails";
        return false;
      }
    }
    d << "orders 1..16 lumpable and valid triangulated 3-gons";
    return true;
  });
  s.check("order_one_halving", [](std::uint64_t, std::ostream& d) {
    double worst = 0.0;
    for (int t = 0; t <= 20; ++t) worst = std::max(worst, std::abs(trap_confinement_dp(1, t).probability - std::ldexp(1.0, -t)));
    d << "max |P - 2^-t| = " << worst;
    return worst < 1e-15;
  });
  s.check("order_two_one_step", [](std::uint64_t, std::ostream& d) {
    const double p = trap_confinement_dp(2, 1).probability;
    d << "P = " << p << " (2 of the 6 neighbours of a level-1 vertex are at level 1)";
    return near(p, 1.0 / 3.0, 1e-15);
  });
}

void suite_walk(Suite& s) {
  s.check("two_step_return", [](std::uint64_t seed, std::ostream& d) {
    auto law = std::make_shared<const StepLaw>(make_step_law(0.8));
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      LazyHalfPlane lazy(law, replica_seed(seed, "map", static_cast<std::uint64_t>(k)));
      const auto curve = exact_return_curve(lazy, 2, false);
      const HalfEdgeMap& m = lazy.map();
      const VertexId root = m.root_vertex();
      double p = 0.0;
      m.for_each_outgoing(root, [&](HalfEdgeId h) {
        const VertexId u = m.head(h);
        int back = 0;
        m.for_each_outgoing(u, [&](HalfEdgeId g) { back += m.head(g) == root ? 1 : 0; });
        p += 1.0 / m.degree(root) * back / m.degree(u);
      });
      worst = std::max(worst, std::abs(curve.probability[2] - p) + curve.probability[1]);
    }
    d << "max |DP - two-step formula| + P(X_1 = root) = " << worst;
    return worst < 1e-14;
  });
  s.check("certificate_stability", [](std::uint64_t seed, std::ostream& d) {
    auto law = std::make_shared<const StepLaw>(make_step_law(0.8));
    int checked = 0;
    for (int k = 0; k < 10; ++k) {
      WalkState w(law, replica_seed(seed, "walk", static_cast<std::uint64_t>(k)));
      for (int t = 0; t < 30; ++t) w.step();
      const auto first = distance_to_boundary(w, 50'000);
      if (!first.exact) continue;
      ++checked;
      w.lazy().reveal_hull({w.position()}, first.upper + 1);
      const auto again = certify_distance(w.map(), w.position(), [&] {
        std::vector<VertexId> line;
        for (auto i = w.map().window_left(); i <= w.map().window_right(); ++i) line.push_back(w.map().line_vertex(i));
        return line;
      }());
      if (!again.exact || again.upper != first.upper) {
        d << "state " << k << " changed from " << first.upper << " to [" << again.lower << "," << again.upper << "]";
        return false;
      }
    }
    d << checked << " exact certificates unchanged after more revelation";
    return checked > 0;
  });
  s.check("mc_n1_zero", [](std::uint64_t seed, std::ostream& d) {
    const auto est = return_probability_mc(0.8, {1}, 500, seed);
    d << "hits at n=1: " << est[0].hits;
    return est[0].hits == 0 && est[0].walks == 500;
  });
}

}  // namespace

bool VerifyReport::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed; });
}

json VerifyReport::to_json() const {
  json list = json::array();
  for (const auto& c : checks) {
    list.push_back(json{{"suite", c.suite}, {"name", c.name}, {"passed", c.passed}, {"seed", c.seed}, {"detail", c.detail}});
  }
  return json{{"passed", passed()}, {"checks", list}};
}

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names{"boltzmann", "steplaw", "maps", "expansion", "traps", "walk-oracles"};
  return names;
}

VerifyReport run_verify(const std::string& suite, std::uint64_t seed) {
  const auto& names = verify_suites();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end()) {
    throw std::invalid_argument("unknown suite '" + suite + "'");
  }
  VerifyReport report;
  for (const auto& name : names) {
    if (suite != "all" && suite != name) continue;
    Suite s(name, seed, report);
    if (name == "boltzmann") suite_boltzmann(s);
    if (name == "steplaw") suite_steplaw(s);
    if (name == "maps") suite_maps(s);
    if (name == "expansion") suite_expansion(s);
    if (name == "traps") suite_traps(s);
    if (name == "walk-oracles") suite_walk(s);
  }
  return report;
}

}  // namespace hyperwalk
