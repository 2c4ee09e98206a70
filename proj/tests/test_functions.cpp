#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "support.hpp"

using namespace lgvar;
using testing_support::Gen;
using testing_support::P;
using testing_support::Pq;
using testing_support::share;

namespace {

const Complex I(0.0, 1.0);

std::shared_ptr<const LinearGraph> unit() { return share(fixtures::unit_segment()); }

FuncModel tent(std::shared_ptr<const LinearGraph> g, Complex peak) {
  return make_pwl(std::move(g), {{{Rational(0), 0.0}, {Rational(1, 2), peak}, {Rational(1), 0.0}}});
}

// A one-edge homeomorphism between two segments with the given orientation.
std::shared_ptr<const Homeo> segment_homeo(const Segment& from, const Segment& to, Orientation o) {
  const LinearGraph s = LinearGraph::from_segments({from});
  const LinearGraph t = LinearGraph::from_segments({to});
  return std::make_shared<const Homeo>(Homeo{s, t, {AffineSegMap{from, to, o}}, {0}, {0}});
}

}  // namespace

TEST(EvaluateTest, Examples) {
  const Rational pi = Rational::from_double(std::numbers::pi);
  EXPECT_EQ(evaluate(coordinate_y(), {Rational(0), pi}), Complex(std::numbers::pi));

  const FuncModel k = make_k_delta(unit(), 0, Rational(2, 5));
  EXPECT_EQ(evaluate(k, Pq("1/2", "0")), Complex(1.0));
  EXPECT_EQ(evaluate(k, Pq("3/10", "0")), Complex(0.5));
  EXPECT_EQ(evaluate(k, Pq("1/10", "0")), Complex(0.0));

  const FuncModel f = tent(unit(), I);
  EXPECT_EQ(evaluate(f, Pq("1/4", "0")), I / 2.0);
  EXPECT_EQ(evaluate(f, Pq("1/2", "0")), I);
}

TEST(EvaluateTest, OffGraphPointRejected) {
  EXPECT_THROW(evaluate(tent(unit(), 1.0), P(0, 1)), DomainError);
  EXPECT_THROW(evaluate(make_k_delta(unit(), 0, Rational(1, 4)), P(2, 0)), DomainError);
}

TEST(EvaluateTest, PolynomialTerms) {
  const FuncModel f = make_polyxy({{2, 1, {1.0, -1.0}}, {0, 0, 3.0}});
  EXPECT_EQ(evaluate(f, P(2, 3)), Complex(3.0) + Complex(1.0, -1.0) * 12.0);
}

TEST(ConstructionTest, PwlValidation) {
  const auto g = share(fixtures::lshape());
  using K = std::vector<PwlKnot>;
  EXPECT_THROW(make_pwl(g, {K{{Rational(0), 0.0}, {Rational(1), 1.0}}}), DomainError);
  EXPECT_THROW(make_pwl(g, {K{{Rational(0), 0.0}, {Rational(1), 1.0}}, K{{Rational(0), 1.0}, {Rational(1), 1.0}}}),
               DomainError);
  EXPECT_THROW(make_pwl(g, {K{{Rational(0), 0.0}, {Rational(1, 2), 1.0}}, K{{Rational(0), 0.0}, {Rational(1), 1.0}}}),
               DomainError);
  EXPECT_THROW(make_pwl(g, {K{{Rational(0), 0.0}, {Rational(1, 2), 1.0}, {Rational(1, 2), 2.0}, {Rational(1), 0.0}},
                            K{{Rational(0), 0.0}, {Rational(1), 1.0}}}),
               DomainError);
  EXPECT_NO_THROW(make_pwl(g, {K{{Rational(0), 2.0}, {Rational(1), 1.0}}, K{{Rational(0), 2.0}, {Rational(1), 5.0}}}));
}

TEST(ConstructionTest, KDeltaRange) {
  EXPECT_THROW(make_k_delta(unit(), 0, Rational(0)), DomainError);
  EXPECT_THROW(make_k_delta(unit(), 0, Rational(1, 2)), DomainError);
  EXPECT_THROW(make_k_delta(unit(), 0, Rational(-1, 4)), DomainError);
  EXPECT_THROW(make_k_delta(unit(), 1, Rational(1, 4)), DomainError);
}

TEST(SupNormTest, Examples) {
  const LinearGraph cross = fixtures::cross();
  const double sampled = oracles::sampled_sup(
      [&](double t) {
        double best = 0.0;
        for (const auto& s : cross.segments()) {
          best = std::max(best, std::abs(evaluate(coordinate_y(), param_point(s, Rational::from_double(t)))));
        }
        return best;
      },
      200);
  EXPECT_NEAR(sup_norm(coordinate_y(), cross), sampled, 1e-12);
  EXPECT_NEAR(sup_norm(coordinate_y(), cross), std::numbers::pi, 1e-12);
  EXPECT_DOUBLE_EQ(sup_norm(constant({3.0, 4.0}), fixtures::worked_pair(1)), 5.0);
  EXPECT_DOUBLE_EQ(sup_norm(coordinate_x(), fixtures::unit_segment()), 1.0);
}

TEST(SupNormTest, InteriorMaximumOfPolynomial) {
  // 1 - (x - 1/3)^2 peaks inside the segment.
  const FuncModel f = make_polyxy({{0, 0, 1.0 - 1.0 / 9.0}, {1, 0, 2.0 / 3.0}, {2, 0, -1.0}});
  EXPECT_NEAR(sup_norm(f, fixtures::unit_segment()), 1.0, 1e-9);
}

TEST(SegmentVariationTest, Examples) {
  const Segment s(P(0, 0), P(1, 0));
  EXPECT_DOUBLE_EQ(segment_variation(coordinate_x(), s), 1.0);
  EXPECT_DOUBLE_EQ(segment_variation(tent(unit(), 1.0), s), 2.0);
  const FuncModel k = make_k_delta(unit(), 0, Rational(2, 5));
  EXPECT_DOUBLE_EQ(segment_variation(k, s), 2.0);
  const double dense = oracles::partition_variation(
      [&](double t) { return evaluate(k, param_point(s, Rational::from_double(t))); }, 1000);
  EXPECT_NEAR(dense, 2.0, 1e-12);
}

TEST(SegmentVariationTest, KDeltaOnLShape) {
  const auto l = share(fixtures::lshape());
  const FuncModel k = make_k_delta(l, 0, Rational(2, 5));
  EXPECT_EQ(evaluate(k, Pq("1/2", "0")), Complex(1.0));
  EXPECT_EQ(evaluate(k, Pq("0", "1/2")), Complex(0.0));
  EXPECT_EQ(evaluate(k, P(0, 0)), Complex(0.0));
  EXPECT_DOUBLE_EQ(segment_variation(k, l->segment(0)), 2.0);
  EXPECT_DOUBLE_EQ(segment_variation(k, l->segment(1)), 0.0);
}

TEST(SegmentVariationTest, SegmentMustLieOnGraph) {
  EXPECT_THROW(segment_variation(tent(unit(), 1.0), Segment(P(0, 0), P(2, 0))), DomainError);
  EXPECT_THROW(segment_variation(tent(unit(), 1.0), Segment(P(0, 0), P(0, 1))), DomainError);
}

TEST(SegmentVariationTest, ZeroExactlyForConstantPwl) {
  Gen g(31);
  for (int i = 0; i < 100; ++i) {
    const auto graph = share(testing_support::random_graph(g, 1 + g.index(4)));
    const bool flat = g.coin();
    const Complex c(g.integer(-3, 3), g.integer(-3, 3));
    std::vector<std::vector<PwlKnot>> knots;
    for (std::size_t e = 0; e < graph->edge_count(); ++e) {
      const Complex bump = flat ? c : c + Complex(e % 2 == 0 ? 0.5 : 0.0);
      knots.push_back({{Rational(0), c}, {Rational(1, 3), bump}, {Rational(1), c}});
    }
    const FuncModel f = make_pwl(graph, knots);
    for (std::size_t e = 0; e < graph->edge_count(); ++e) {
      const bool constant_here = flat || e % 2 == 1;
      EXPECT_EQ(segment_variation(f, graph->segment(e)) == 0.0, constant_here);
    }
  }
}

TEST(SegmentVariationTest, AdditiveUnderSplitting) {
  Gen g(32);
  for (int i = 0; i < 100; ++i) {
    const auto graph = share(testing_support::random_graph(g, 1 + g.index(4)));
    const FuncModel f = testing_support::random_pwl(g, graph);
    const FuncModel p = testing_support::random_poly(g, 3);
    const std::size_t e = g.index(graph->edge_count());
    const Segment& s = graph->segment(e);
    const Point2 mid = param_point(s, g.fraction(101));
    const Segment left(s.a(), mid);
    const Segment right(mid, s.b());

    VariationTerms whole;
    segment_terms(f, s, whole);
    VariationTerms halves;
    segment_terms(f, left, halves);
    segment_terms(f, right, halves);
    EXPECT_EQ(halves.total(), whole.total());
    EXPECT_NEAR(segment_variation(f, left) + segment_variation(f, right), segment_variation(f, s), 1e-12);
    EXPECT_NEAR(segment_variation(p, left) + segment_variation(p, right), segment_variation(p, s), 1e-8);
  }
}

TEST(SegmentVariationTest, PolynomialMatchesPartitionOracle) {
  Gen g(33);
  for (int i = 0; i < 30; ++i) {
    const FuncModel p = testing_support::random_poly(g, 3);
    const Segment s(g.point(-2, 2), g.point(3, 5));
    const double dense = oracles::partition_variation(
        [&](double t) { return evaluate(p, param_point(s, Rational::from_double(t))); }, 20000);
    EXPECT_NEAR(segment_variation(p, s), dense, 1e-6);
    EXPECT_GE(segment_variation(p, s), dense * (1 - 1e-12));
  }
}

TEST(SegmentVariationTest, ReparametrizationInvariance) {
  Gen g(34);
  for (int i = 0; i < 60; ++i) {
    const Segment from(g.point(-4, 4), g.point(5, 9));
    const Segment to(g.point(-9, -5), g.point(-4, 4));
    const auto pwl = share(testing_support::random_pwl(g, share(LinearGraph::from_segments({from}))));
    const auto poly = share(testing_support::random_poly(g, 2));
    for (Orientation o : {Orientation::Forward, Orientation::Reversed}) {
      const auto h = segment_homeo(from, to, o);
      const FuncModel moved_pwl(Transported{pwl, h});
      const FuncModel moved_poly(Transported{poly, h});
      EXPECT_EQ(segment_variation(moved_pwl, to), segment_variation(*pwl, from));
      EXPECT_NEAR(segment_variation(moved_poly, to), segment_variation(*poly, from), 1e-9);
      EXPECT_EQ(segment_variation(moved_pwl, to.reversed()), segment_variation(*pwl, from));
    }
  }
}

TEST(SupNormTest, SubmultiplicativeOnSamples) {
  Gen g(35);
  for (int i = 0; i < 30; ++i) {
    const auto graph = share(testing_support::random_graph(g, 1 + g.index(4)));
    const auto f = share(testing_support::random_pwl(g, graph));
    const auto h = share(g.coin() ? testing_support::random_pwl(g, graph) : testing_support::random_poly(g, 2));
    const double fg = sup_norm(product(f, h), *graph);
    EXPECT_LE(fg, sup_norm(*f, *graph) * sup_norm(*h, *graph) * (1 + 1e-12));
  }
}

TEST(SupNormTest, BoundsEverySample) {
  Gen g(36);
  for (int i = 0; i < 10; ++i) {
    const auto graph = share(testing_support::random_graph(g, 1 + g.index(5)));
    const FuncModel f = i % 2 == 0 ? testing_support::random_pwl(g, graph) : testing_support::random_poly(g, 3);
    const double sup = sup_norm(f, *graph);
    for (int k = 0; k < 1000; ++k) {
      const Point2 p = param_point(graph->segment(g.index(graph->edge_count())), Rational(g.integer(0, 4096), 4096));
      EXPECT_LE(std::abs(evaluate(f, p)), sup * (1 + 1e-12));
    }
  }
}

TEST(BreakpointsTest, PwlKnotsMappedToQuerySegment) {
  const FuncModel f = tent(unit(), 1.0);
  const auto bp = breakpoints_on(f, Segment(P(1, 0), Pq("1/4", "0")));
  ASSERT_TRUE(bp);
  EXPECT_EQ(*bp, (std::vector<Rational>{Rational(0), Rational(2, 3), Rational(1)}));
  EXPECT_FALSE(breakpoints_on(coordinate_x(), Segment(P(0, 0), P(1, 0))));
}
