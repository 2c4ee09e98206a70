#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "support.hpp"

using namespace lgvar;
using testing_support::Gen;
using testing_support::P;
using testing_support::share;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

SearchBudget acceptance_budget() { return {}; }

std::vector<oracles::IPt> to_ints(const std::vector<Point2>& pts) {
  std::vector<oracles::IPt> out;
  for (const auto& p : pts) out.push_back({std::lround(p.x.to_double()), std::lround(p.y.to_double())});
  return out;
}

void ac1(Outcome& o) {
  Gen g(1001);
  const auto t0 = Clock::now();
  int agree = 0;
  for (int i = 0; i < 200; ++i) {
    const PointList s(testing_support::random_list(g, 1 + g.index(8)));
    const int ours = static_cast<int>(variation_factor(s).value);
    const int oracle = oracles::brute_force_vf(to_ints(s.points()));
    o.require(ours == oracle, "list " + std::to_string(i) + ": vf " + std::to_string(ours) + " vs oracle " +
                                  std::to_string(oracle));
    agree += ours == oracle ? 1 : 0;
  }
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 30.0, "runtime " + std::to_string(elapsed) + " s");
  o.detail << agree << "/200 lists agree with the brute-force oracle in " << elapsed << " s";
}

void ac2(Outcome& o) {
  Gen g(1002);
  for (int i = 0; i < 500; ++i) {
    const PointList s(testing_support::random_list(g, 1 + g.index(8)));
    const std::size_t vf = variation_factor(s).value;
    o.require(vf >= 1 && vf <= std::max<std::size_t>(1, s.segment_count()), "1 <= vf <= n");
  }
  for (int i = 0; i < 500; ++i) {
    const auto pts = testing_support::random_list(g, 2 + g.index(7));
    std::vector<Point2> sub;
    for (const auto& p : pts) {
      if (g.coin()) sub.push_back(p);
    }
    if (sub.empty()) sub.push_back(pts[g.index(pts.size())]);
    o.require(variation_factor(PointList(sub)).value <= variation_factor(PointList(pts)).value, "sublist monotonicity");
  }
  o.require(variation_factor(PointList({P(3, -2)})).value == 1, "vf([x0]) = 1");
  o.detail << "500 range checks, 500 sublist pairs, singleton list";
}

void ac3(Outcome& o) {
  const Line x_eq_0(P(0, 0), P(0, 1));
  const std::size_t a = crossing_count(PointList({P(-1, 0), P(1, 0)}), x_eq_0);
  const std::size_t b = crossing_count(PointList({P(0, 0), P(1, 0)}), x_eq_0);
  const std::size_t c = crossing_count(PointList({P(-1, 0), P(0, 0), P(1, 0)}), x_eq_0);
  o.require(a == 1 && b == 1 && c == 1, "crossing counts");
  o.detail << "(" << a << ", " << b << ", " << c << ")";
}

void ac4(Outcome& o) {
  Gen g(1004);
  int exact = 0;
  for (int i = 0; i < 100; ++i) {
    const auto seg = share(LinearGraph::from_segments({Segment(g.point(-5, 5), g.point(6, 9))}));
    const FuncModel f = testing_support::random_pwl(g, seg, 6);
    const double classical = segment_variation(f, seg->segment(0));
    const LowerBound r = var_lower(f, *seg, acceptance_budget(), static_cast<std::uint64_t>(i));
    const bool ok = r.value == classical && variation_factor(r.witness).value == 1;
    o.require(ok, "function " + std::to_string(i));
    exact += ok ? 1 : 0;
  }
  o.detail << exact << "/100 single-segment PWLs with var_lower == segment_variation bit for bit, witness vf 1";
}

void ac5(Outcome& o) {
  Gen g(1005);
  int violations = 0;
  double upper_ratio = 0.0;  // (sup + var_upper) / (9 m lg)
  double lower_ratio = 0.0;  // lg / (m (sup + var_lower))
  for (int i = 0; i < 50; ++i) {
    const auto graph = share(testing_support::random_graph(g, 1 + g.index(6)));
    const FuncModel f = testing_support::random_pwl(g, graph);
    const NormReport r = lg_norm(f, *graph, acceptance_budget(), static_cast<std::uint64_t>(i));
    const double m = static_cast<double>(graph->edge_count());
    const double max_var = *std::max_element(r.segment_variations.begin(), r.segment_variations.end());
    const bool ok = max_var <= r.var_lower && r.var_lower <= r.var_upper &&
                    r.var_upper == r.variation_sum + 8.0 * (m - 1.0) * r.sup && r.sup + r.var_upper <= 9.0 * m * r.lg &&
                    r.lg <= m * (r.sup + r.var_lower);
    violations += ok ? 0 : 1;
    o.require(ok, "fixture " + std::to_string(i));
    if (r.lg > 0.0) {
      upper_ratio = std::max(upper_ratio, (r.sup + r.var_upper) / (9.0 * m * r.lg));
      lower_ratio = std::max(lower_ratio, r.lg / (m * (r.sup + r.var_lower)));
    }
  }
  o.detail << violations << " violations on 50 fixtures; tightest ratios " << upper_ratio << " (upper) and " << lower_ratio
           << " (lower)";
}

void ac6(Outcome& o) {
  Gen g(1006);
  int checked = 0;
  int violations = 0;
  while (checked < 50) {
    const auto graph = share(testing_support::random_graph(g, 2 + g.index(5)));
    const auto split = testing_support::random_split(g, *graph);
    if (!split) continue;
    const FuncModel f = testing_support::random_pwl(g, graph);
    const DecompositionReport r = check_decomposition(f, *graph, *split);
    const bool ok = r.lower_holds && r.upper_holds;
    violations += ok ? 0 : 1;
    o.require(ok, "split " + std::to_string(checked));
    ++checked;
  }
  o.detail << violations << " violations on 50 connected splits";
}

void ac7(Outcome& o) {
  Gen g(1007);
  double poly_gap = 0.0;
  int pwl_exact = 0;
  for (int i = 0; i < 50; ++i) {
    const auto graph = share(testing_support::random_graph(g, 1 + g.index(5)));
    const LinearGraph fine = testing_support::random_refinement(g, *graph, 1 + g.index(4));
    const FuncModel f = testing_support::random_pwl(g, graph);
    const FuncModel p = testing_support::random_poly(g, 3);
    const bool same = lg_value(f, fine) == lg_value(f, *graph);
    pwl_exact += same ? 1 : 0;
    o.require(same, "PWL refinement " + std::to_string(i));
    const double gap = std::fabs(lg_value(p, fine) - lg_value(p, *graph));
    o.require(gap <= 1e-8, "PolyXY refinement " + std::to_string(i));
    poly_gap = std::max(poly_gap, gap);
  }
  o.detail << pwl_exact << "/50 PWL refinements exact, max PolyXY change " << poly_gap;
}

void ac8(Outcome& o) {
  struct Case {
    const char* name;
    LinearGraph a;
    LinearGraph b;
    bool expected;
  };
  const LinearGraph path = LinearGraph::from_segments({Segment(P(0, 0), P(1, 0)), Segment(P(1, 0), P(1, 1))});
  const std::vector<Case> cases{
      {"worked pair", fixtures::worked_pair(1), fixtures::worked_pair(2), true},
      {"path vs square", path, fixtures::square(), false},
      {"cross vs segment", fixtures::cross(), fixtures::unit_segment(), false},
      {"square vs diamond", fixtures::square(), fixtures::diamond(), true},
      {"worked graph vs itself", fixtures::worked_pair(1), fixtures::worked_pair(1), true},
      {"cross vs itself", fixtures::cross(), fixtures::cross(), true},
  };
  double slowest = 0.0;
  for (const auto& c : cases) {
    const auto t0 = Clock::now();
    const auto cert = graph_homeomorphic(c.a, c.b);
    if (cert) build_homeo(*cert);
    const double elapsed = seconds_since(t0);
    slowest = std::max(slowest, elapsed);
    o.require(cert.has_value() == c.expected, c.name);
    o.require(elapsed < 1.0, std::string(c.name) + " took " + std::to_string(elapsed) + " s");
  }
  const auto worked = graph_homeomorphic(fixtures::worked_pair(1), fixtures::worked_pair(2));
  const std::size_t refined = worked ? worked->source.vertex_count() : 0;
  o.require(refined == 6 && worked->target.vertex_count() == 6, "6-vertex common refinement");
  o.detail << cases.size() << " fixtures, worked pair refined to " << refined << " vertices, slowest " << slowest << " s";
}

void ac9(Outcome& o) {
  Gen g(1009);
  double morphism = 0.0;
  double poly_gap = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto sigma = share(testing_support::random_graph(g, 1 + g.index(6)));
    const auto cert = graph_homeomorphic(*sigma, testing_support::random_redrawing(g, *sigma));
    o.require(cert.has_value(), "redrawing " + std::to_string(i) + " not recognised");
    if (!cert) continue;
    const auto h = std::make_shared<const Homeo>(build_homeo(*cert));
    const auto seed = static_cast<std::uint64_t>(i);
    const IsometryReport pwl = verify_isometry(share(testing_support::random_pwl(g, sigma)), h, nullptr, 100, seed);
    o.require(pwl.isometry_holds && pwl.lg_source == pwl.lg_target, "PWL isometry " + std::to_string(i));
    o.require(pwl.morphism_holds, "PWL morphism " + std::to_string(i));
    const IsometryReport poly = verify_isometry(share(testing_support::random_poly(g, 2)), h, nullptr, 100, seed);
    o.require(poly.isometry_holds && std::fabs(poly.lg_source - poly.lg_target) <= 1e-9, "PolyXY isometry " + std::to_string(i));
    o.require(poly.morphism_holds, "PolyXY morphism " + std::to_string(i));
    morphism = std::max({morphism, pwl.max_morphism_error, poly.max_morphism_error});
    poly_gap = std::max(poly_gap, std::fabs(poly.lg_source - poly.lg_target));
  }
  o.detail << "50 pairs, PWL lg equal bit for bit, max PolyXY lg gap " << poly_gap << ", max morphism error " << morphism;
}

void ac10(Outcome& o) {
  for (std::size_t n : {2U, 3U, 10U, 100U, 1000U, 10000U}) {
    o.require(std::fabs(divergence_demo(n).partial_sum - oracles::sine_increments(n)) <= 1e-12,
              "direct summation at n = " + std::to_string(n));
  }
  double prev = 0.0;
  for (std::size_t n = 2; n <= 2000; ++n) {
    const double v = divergence_demo(n).partial_sum;
    o.require(v > prev, "monotone at n = " + std::to_string(n));
    prev = v;
  }
  o.require(std::fabs(divergence_demo(2).partial_sum - 8.0 / (3.0 * kPi)) <= 1e-15, "n = 2 value");
  const double big = divergence_demo(10000).partial_sum;
  const double bound = 2.0 / kPi * (std::log(1e4) - 2.0);
  o.require(big >= bound, "n = 10^4 log bound");

  // The curve's polyline samples pulled back to [0, 1]: a monotone list there with vf 1
  // whose curve variation equals the partial sum, so var(g ∘ h) grows without bound.
  o.detail << "S(10^4) = " << big << " >= " << bound << "; pulled back var on [0,1]:";
  double last = 0.0;
  for (std::size_t n : {10U, 50U, 200U}) {
    const PulledBackWitness w = pulled_back_witness(n);
    std::vector<Point2> zs;
    for (const auto& z : w.z) zs.push_back({z, Rational(0)});
    const std::size_t vf = variation_factor(PointList(zs)).value;
    o.require(w.monotone && vf == 1, "pulled-back list monotone with vf 1 at n = " + std::to_string(n));
    o.require(std::fabs(w.variation - w.partial_sum) <= 1e-12 * w.partial_sum, "pulled-back variation at n = " + std::to_string(n));
    o.require(std::fabs(w.witness_cvar - w.partial_sum) <= 1e-12 * w.partial_sum, "pulled-back cvar at n = " + std::to_string(n));
    o.require(w.variation > last, "pulled-back variation increasing");
    last = w.variation;
    o.detail << " n=" << n << ": " << w.variation;
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"vf oracle equivalence", ac1},
      {"vf axioms", ac2},
      {"crossing-rule fixtures", ac3},
      {"classical agreement on a segment", ac4},
      {"norm sandwich", ac5},
      {"connected-split sandwich", ac6},
      {"representation independence", ac7},
      {"homeomorphism fixtures", ac8},
      {"transport isometry", ac9},
      {"divergence along t sin(1/t)", ac10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    failures += o.pass ? 0 : 1;
    std::printf("AC%zu %s  %s: %s [%.2f s]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.str().c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
