// Carry a k_δ bump from the L-shape onto a straight path and check the isometry.
#include <cstdio>
#include <memory>

#include "lgvar/lgvar.hpp"

int main() {
  using namespace lgvar;
  const auto lshape = std::make_shared<const LinearGraph>(fixtures::lshape());
  const LinearGraph path = LinearGraph::from_segments(
      {Segment({Rational(-1), Rational(0)}, {Rational(0), Rational(0)}),
       Segment({Rational(0), Rational(0)}, {Rational(1), Rational(0)})});

  const auto cert = graph_homeomorphic(*lshape, path);
  if (!cert) return 1;
  const auto h = std::make_shared<const Homeo>(build_homeo(*cert));

  const auto bump = std::make_shared<const FuncModel>(make_k_delta(lshape, 1, Rational(1, 4)));
  const TransportResult t = transport(bump, h);
  const IsometryReport r = verify_isometry(bump, h);

  for (const auto& e : r.edges) {
    std::printf("edge %zu -> %zu: var %.3f -> %.3f\n", e.source_edge, e.target_edge, e.source_variation,
                e.target_variation);
  }
  std::printf("LG norm %.3f -> %.3f (%s)\n", r.lg_source, r.lg_target, r.isometry_holds ? "equal" : "DIFFERENT");
  std::printf("algebra map at %zu points: max error %.1e\n", r.samples, r.max_morphism_error);
  const Point2 q{Rational(-1, 2), Rational(0)};
  std::printf("Φ(f)(-1/2, 0) = %.3f\n", evaluate(*t.lazy, q).real());
}
