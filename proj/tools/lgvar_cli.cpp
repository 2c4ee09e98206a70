#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "lgvar/io.hpp"
#include "lgvar/lgvar.hpp"

using namespace lgvar;
using io::Json;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  SearchBudget budget;
  std::optional<double> tolerance;
  bool no_properize = false;

  [[nodiscard]] Tolerances tol() const {
    Tolerances t;
    if (tolerance) t.variation = t.sup = *tolerance;
    return t;
  }
};

io::LoadedGraph load_graph(const std::string& path, const Globals& g) {
  return io::graph_of(io::read_json_file(path), !g.no_properize);
}

FuncPtr load_function(const std::string& path, const io::LoadedGraph& graph) {
  return std::make_shared<const FuncModel>(io::function_of(io::read_json_file(path), graph));
}

void write_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  out << io::dump(j);
  if (!out) throw DomainError("cannot write '" + path + "'");
}

std::shared_ptr<const Homeo> homeo_or_throw(const LinearGraph& a, const LinearGraph& b) {
  const auto cert = graph_homeomorphic(a, b);
  if (!cert) throw DomainError("the graphs are not homeomorphic");
  return std::make_shared<const Homeo>(build_homeo(*cert));
}

/// Some split of σ's edges into two connected nonempty parts: a prefix of an
/// edge-by-edge ordering whose complement is connected.
std::vector<std::size_t> default_split(const LinearGraph& g) {
  const EdgeOrdering ord = edge_by_edge(g);
  for (std::size_t k = 1; k < ord.order.size(); ++k) {
    std::vector<std::size_t> rest(ord.order.begin() + static_cast<std::ptrdiff_t>(k), ord.order.end());
    if (g.components_of(rest) == 1) return {ord.order.begin(), ord.order.begin() + static_cast<std::ptrdiff_t>(k)};
  }
  throw DomainError("no split into two connected parts exists");
}

LinearGraph fixture_graph(const std::string& kind, int part, std::size_t n, const std::string& side) {
  if (kind == "cross") return fixtures::cross();
  if (kind == "lshape") return fixtures::lshape();
  if (kind == "square") return fixtures::square(Rational::parse(side));
  if (kind == "diamond") return fixtures::diamond();
  if (kind == "segment") return fixtures::unit_segment();
  if (kind == "paper41") return fixtures::worked_pair(part);
  if (kind == "sincurve-samples") return fixtures::sincurve_samples(n);
  throw DomainError("unknown fixture kind '" + kind + "'");
}

FuncModel fixture_function(const std::string& kind, const std::shared_ptr<const LinearGraph>& g) {
  if (kind == "x") return coordinate_x();
  if (kind == "y") return coordinate_y();
  if (kind == "z") return make_polyxy({{1, 0, 1.0}, {0, 1, Complex(0.0, 1.0)}});
  if (kind == "kdelta") return make_k_delta(g, 0, Rational(1, 4));
  throw DomainError("unknown fixture function '" + kind + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variation, variation factor and LG norms of functions on linear graphs"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed for randomized searches (echoed in the output)");
  app.add_option("--budget", g.budget.restarts, "Random restarts of the var_lower search");
  app.add_option("--moves", g.budget.moves, "Local moves per restart");
  app.add_option("--cap", g.budget.cap, "Maximum list length during local moves");
  app.add_option("--threads", g.budget.threads, "Worker threads for the var_lower search");
  app.add_option("--tolerance", g.tolerance, "Convergence tolerance for non-PWL variation and sup");
  app.add_flag("--no-properize", g.no_properize, "Keep graph files as given (they must already be proper)");

  std::function<Json()> action;
  std::string graph_path;
  std::string other_path;
  std::string function_path;
  std::string list_text;

  auto* properize_cmd = app.add_subcommand("properize", "Properize a graph file and print it in canonical form");
  properize_cmd->add_option("graph", graph_path)->required();
  properize_cmd->callback([&] {
    action = [&] { return io::graph_json(*load_graph(graph_path, g).graph); };
  });

  auto* vf_cmd = app.add_subcommand("vf", "Variation factor of a point list");
  vf_cmd->add_option("--list", list_text, "JSON point list, e.g. [[0,0],[1,0]]")->required();
  vf_cmd->add_option("--graph", graph_path, "Check that every point lies on this graph");
  vf_cmd->callback([&] {
    action = [&] {
      auto pts = io::points_of(io::parse_json(list_text));
      const PointList s = graph_path.empty() ? PointList(std::move(pts))
                                             : PointList::on(*load_graph(graph_path, g).graph, std::move(pts));
      return io::vf_json(s, variation_factor(s));
    };
  });

  auto* cvar_cmd = app.add_subcommand("cvar", "Curve variation of a function along a point list");
  cvar_cmd->add_option("graph", graph_path)->required();
  cvar_cmd->add_option("function", function_path)->required();
  cvar_cmd->add_option("--list", list_text, "JSON point list on the graph")->required();
  cvar_cmd->callback([&] {
    action = [&] {
      const auto graph = load_graph(graph_path, g);
      const auto f = load_function(function_path, graph);
      const PointList s = PointList::on(*graph.graph, io::points_of(io::parse_json(list_text)));
      const double c = cvar(*f, s);
      const std::size_t v = variation_factor(s).value;
      return Json{{"cvar", c}, {"vf", v}, {"ratio", c / static_cast<double>(v)}};
    };
  });

  auto* lgnorm_cmd = app.add_subcommand("lgnorm", "Sup norm, LG norm and BV norm bracket");
  lgnorm_cmd->add_option("graph", graph_path)->required();
  lgnorm_cmd->add_option("function", function_path)->required();
  lgnorm_cmd->callback([&] {
    action = [&] {
      const auto graph = load_graph(graph_path, g);
      const auto f = load_function(function_path, graph);
      Json out = io::norm_json(lg_norm(*f, *graph.graph, g.budget, g.seed, g.tol()));
      out["budget"] = io::budget_json(g.budget);
      return out;
    };
  });

  auto* bounds_cmd = app.add_subcommand("varbounds", "Lower and upper bounds for the two-dimensional variation");
  bounds_cmd->add_option("graph", graph_path)->required();
  bounds_cmd->add_option("function", function_path)->required();
  bounds_cmd->callback([&] {
    action = [&] {
      const auto graph = load_graph(graph_path, g);
      const auto f = load_function(function_path, graph);
      const NormReport r = lg_norm(*f, *graph.graph, g.budget, g.seed, g.tol());
      const double max_segment =
          r.segment_variations.empty() ? 0.0 : *std::max_element(r.segment_variations.begin(), r.segment_variations.end());
      return Json{{"max_segment_variation", max_segment},
                  {"var_lower", r.var_lower},
                  {"var_upper", r.var_upper},
                  {"ordered", max_segment <= r.var_lower && r.var_lower <= r.var_upper},
                  {"witness", io::json_of(r.witness.points())},
                  {"witness_vf", r.witness_vf},
                  {"seed", g.seed},
                  {"budget", io::budget_json(g.budget)}};
    };
  });

  std::vector<std::size_t> split;
  auto* decomp_cmd = app.add_subcommand("decomp", "Check the LG norm against a split into two connected parts");
  decomp_cmd->add_option("graph", graph_path)->required();
  decomp_cmd->add_option("function", function_path)->required();
  decomp_cmd->add_option("--split", split, "Edge indices of the first part")->delimiter(',');
  decomp_cmd->callback([&] {
    action = [&] {
      const auto graph = load_graph(graph_path, g);
      const auto f = load_function(function_path, graph);
      std::vector<std::size_t> first = split.empty() ? default_split(*graph.graph) : split;
      std::sort(first.begin(), first.end());
      first.erase(std::unique(first.begin(), first.end()), first.end());
      std::vector<std::size_t> second;
      for (std::size_t e = 0; e < graph.graph->edge_count(); ++e) {
        if (!std::binary_search(first.begin(), first.end(), e)) second.push_back(e);
      }
      return io::decomposition_json(check_decomposition(*f, *graph.graph, first, g.tol()), first, second);
    };
  });

  auto* homeo_cmd = app.add_subcommand("homeo", "Decide whether two graphs are homeomorphic");
  homeo_cmd->add_option("first", graph_path)->required();
  homeo_cmd->add_option("second", other_path)->required();
  homeo_cmd->callback([&] {
    action = [&] {
      const auto cert = graph_homeomorphic(*load_graph(graph_path, g).graph, *load_graph(other_path, g).graph);
      return cert ? io::certificate_json(*cert) : Json{{"homeomorphic", false}};
    };
  });

  std::string out_path;
  std::string function_out_path;
  auto* transport_cmd = app.add_subcommand("transport", "Transport a function to a homeomorphic graph");
  transport_cmd->add_option("source", graph_path)->required();
  transport_cmd->add_option("target", other_path)->required();
  transport_cmd->add_option("function", function_path)->required();
  transport_cmd->add_option("--out", out_path, "Write the refined target graph here");
  transport_cmd->add_option("--function-out", function_out_path, "Write the transported function here");
  transport_cmd->callback([&] {
    action = [&] {
      const auto source = load_graph(graph_path, g);
      const auto f = load_function(function_path, source);
      const auto h = homeo_or_throw(*source.graph, *load_graph(other_path, g).graph);
      const TransportResult t = transport(f, h);
      Json out{{"homeomorphic", true},
               {"refined_edges", h->target.edge_count()},
               {"edge_map", h->edge_map},
               {"lg_source", lg_value(*f, *source.graph, g.tol())},
               {"lg_target", lg_value(*t.lazy, h->target, g.tol())},
               {"materialized", t.materialized.has_value()},
               {"target", io::graph_json(h->target)}};
      if (t.materialized) out["function"] = io::function_json(*t.materialized);
      if (!out_path.empty()) write_file(out_path, io::graph_json(h->target));
      if (!function_out_path.empty()) {
        if (!t.materialized) throw DomainError("the transported function has no piecewise-linear file form");
        write_file(function_out_path, out["function"]);
      }
      return out;
    };
  });

  std::size_t samples = 100;
  auto* verify_cmd = app.add_subcommand("verify", "Check that transport is an LG isometry and an algebra map");
  verify_cmd->add_option("source", graph_path)->required();
  verify_cmd->add_option("target", other_path)->required();
  verify_cmd->add_option("function", function_path)->required();
  verify_cmd->add_option("--samples", samples, "Sample points for the algebra checks");
  verify_cmd->callback([&] {
    action = [&] {
      const auto source = load_graph(graph_path, g);
      const auto f = load_function(function_path, source);
      const auto h = homeo_or_throw(*source.graph, *load_graph(other_path, g).graph);
      Json out = io::isometry_json(verify_isometry(f, h, nullptr, samples, g.seed, g.tol()));
      out["seed"] = g.seed;
      return out;
    };
  });

  std::size_t n = 2;
  std::optional<std::size_t> pullback_n;
  bool with_points = false;
  auto* demo_cmd = app.add_subcommand("demo-divergence", "Partial sums along the sampled curve (t, t sin 1/t)");
  demo_cmd->add_option("--n", n, "Number of sample points (>= 2)");
  demo_cmd->add_flag("--with-points", with_points, "Include t_j and the sample points");
  demo_cmd->add_option("--pullback-n", pullback_n,
                       "Sample count for the pulled-back witness on [0, 1] (default min(n, 200); 0 skips it)");
  demo_cmd->callback([&] {
    action = [&] {
      Json out = io::divergence_json(divergence_demo(n), with_points);
      out["log_bound"] = 2.0 / std::numbers::pi * (std::log(static_cast<double>(n)) - 2.0);
      const std::size_t m = pullback_n.value_or(std::min<std::size_t>(n, 200));
      if (m >= 2) out["pulled_back"] = io::pulled_back_json(pulled_back_witness(m));
      return out;
    };
  });

  std::string kind;
  int part = 1;
  std::size_t sample_count = 50;
  std::string side = "1";
  std::string function_kind;
  auto* fixture_cmd = app.add_subcommand("fixture", "Emit a fixture graph (and optionally a function) in canonical form");
  fixture_cmd->add_option("kind", kind, "cross | lshape | square | diamond | segment | paper41 | sincurve-samples")
      ->required();
  fixture_cmd->add_option("--part", part, "paper41: which drawing (1 or 2)");
  fixture_cmd->add_option("--n", sample_count, "sincurve-samples: number of samples");
  fixture_cmd->add_option("--side", side, "square: side length");
  fixture_cmd->add_option("--out", out_path, "Write the graph here instead of stdout");
  fixture_cmd->add_option("--function", function_kind, "x | y | z | kdelta (bump on edge 0, delta 1/4)");
  fixture_cmd->add_option("--function-out", function_out_path, "Where to write the function");
  fixture_cmd->callback([&] {
    action = [&] {
      const auto graph =
          std::make_shared<const LinearGraph>(io::canonical(fixture_graph(kind, part, sample_count, side)));
      const Json gj = io::graph_json(*graph);
      if (!function_kind.empty()) {
        if (function_out_path.empty()) throw ParseError("--function needs --function-out");
        write_file(function_out_path, io::function_json(fixture_function(function_kind, graph)));
      }
      if (out_path.empty()) return gj;
      write_file(out_path, gj);
      Json out{{"graph", out_path}};
      if (!function_kind.empty()) out["function"] = function_out_path;
      return out;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    std::cout << io::dump(io::diagnostic("usage", e.what()));
    return 2;
  }

  try {
    std::cout << io::dump(action());
    return 0;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    std::cout << io::dump(io::diagnostic("parse", e.what()));
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    std::cout << io::dump(io::diagnostic("parse", e.what()));
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    std::cout << io::dump(io::diagnostic("domain", e.what()));
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cout << io::dump(io::diagnostic("internal", e.what()));
    return 1;
  }
}
