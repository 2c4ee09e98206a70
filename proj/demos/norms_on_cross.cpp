// f(x, y) = y on the cross [-π, π] ∪ i[-π, π]: exact LG norm and a bracket for the BV norm.
#include <cstdio>
#include <numbers>

#include "lgvar/lgvar.hpp"

int main() {
  using namespace lgvar;
  const LinearGraph cross = fixtures::cross();
  const NormReport r = lg_norm(coordinate_y(), cross);

  std::printf("edges            %zu\n", cross.edge_count());
  std::printf("sup |f|          %.12f\n", r.sup);
  for (std::size_t e = 0; e < cross.edge_count(); ++e) {
    std::printf("  var on edge %zu  %.12f\n", e, r.segment_variations[e]);
  }
  std::printf("LG norm          %.12f  (3π = %.12f)\n", r.lg, 3 * std::numbers::pi);
  std::printf("var(f, σ) in     [%.12f, %.12f]\n", r.var_lower, r.var_upper);
  std::printf("BV norm in       [%.12f, %.12f]\n", r.bv_lower, r.bv_upper);
  std::printf("witness: %zu points, vf %zu\n", r.witness.size(), r.witness_vf);
}
