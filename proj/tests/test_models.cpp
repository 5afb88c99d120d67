#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ratpencil/catalog.hpp"
#include "ratpencil/minimal_models.hpp"
#include "ratpencil/numeric_types.hpp"

using namespace ratpencil;

namespace {

struct PipelineRun {
  ReductionResult red;
  SharpResult sharp;
};

PipelineRun run_pipeline(const CatalogEntry& e) {
  ReductionResult red = reduction(e.fibration, e.curve_classes());
  SharpResult sharp = greedy_sharp_minimal(red.model);
  return {std::move(red), std::move(sharp)};
}

}  // namespace

TEST(Reduction, ModelAContractsFourAndGivesMinusTwoK) {
  const auto e = get(Tag::A);
  const ReductionResult r = reduction(e.fibration, e.curve_classes());
  EXPECT_EQ(r.trace.steps.size(), 4u);
  const PencilModel& y = r.model;
  EXPECT_EQ(y.surface.describe(), "plane n=8");
  EXPECT_EQ(y.pencil, -2 * y.surface.canonical());
  EXPECT_EQ(y.pencil.coords(), (std::vector<Int>{6, -2, -2, -2, -2, -2, -2, -2, -2}));
  // K_Y^2 = K_X^2 + steps.
  const SurfaceModel& x = e.fibration.surface();
  EXPECT_EQ(self_intersection(y.surface, y.surface.canonical()),
            self_intersection(x, x.canonical()) + static_cast<Int>(r.trace.steps.size()));
  EXPECT_EQ(y.ksq(), selfint_k_plus_f(e.fibration).ksq);
}

TEST(Reduction, ModelB2ContractsOnlyTheLastPoint) {
  const auto e = get(Tag::B2);
  const ReductionResult r = reduction(e.fibration, e.curve_classes());
  ASSERT_EQ(r.trace.steps.size(), 1u);
  EXPECT_EQ(r.trace.steps[0].contracted, "e11");
  EXPECT_EQ(r.trace.steps[0].pencil_intersection, 1);
}

TEST(Reduction, ModelCContractsNothing) {
  const auto e = get(Tag::C);
  const ReductionResult r = reduction(e.fibration, e.curve_classes());
  EXPECT_TRUE(r.trace.steps.empty());
  EXPECT_EQ(r.model.pencil, e.fibration.fibre_class());
}

TEST(Reduction, RejectsBadCurves) {
  const auto e = get(Tag::C);
  const SurfaceModel& m = e.fibration.surface();
  EXPECT_THROW(reduction(e.fibration, {m.zero()}), PipelineError);
  // 2 e1 has arithmetic genus -2.
  EXPECT_THROW(reduction(e.fibration, {2 * m.exceptional(1)}), PipelineError);
}

TEST(Reduction, DoubleContractionOnB2GivesMinusThreeK) {
  const auto e = get(Tag::B2);
  const SurfaceModel& x = e.fibration.surface();
  BlowDownResult r1 = blow_down(x, x.exceptional(11), {e.fibration.fibre_class()});
  BlowDownResult r2 = blow_down(r1.model, r1.model.exceptional(10), {r1.classes[0]});
  BlowDownResult r3 = blow_down(r2.model, r2.model.exceptional(9), {r2.classes[0]});
  EXPECT_EQ(r3.model.rank(), 9u);
  EXPECT_EQ(r3.classes[0], -3 * r3.model.canonical());
  EXPECT_EQ(r3.classes[0].coords(), (std::vector<Int>{9, -3, -3, -3, -3, -3, -3, -3, -3}));
}

TEST(GreedySharp, CanonicalModelsLandOnTheirTypes) {
  struct Want {
    Tag tag;
    Int d, a, b, tb;
    std::vector<Int> mults;
  };
  const std::vector<Want> want = {
      {Tag::A, 1, 2, 6, 0, std::vector<Int>(7, 2)},
      {Tag::B1, 1, 2, 7, 2, std::vector<Int>(10, 2)},
      {Tag::B2, 1, 4, 9, 0, {3, 3, 3, 3, 3, 3, 3, 2, 2}},
      {Tag::C, 1, 6, 13, 2, std::vector<Int>(9, 4)},
  };
  for (const auto& w : want) {
    const auto e = get(w.tag);
    const PipelineRun p = run_pipeline(e);
    const SharpModelData& s = p.sharp.data;
    EXPECT_EQ(s.d, w.d) << tag_name(w.tag);
    EXPECT_EQ(s.a, w.a) << tag_name(w.tag);
    EXPECT_EQ(s.b, w.b) << tag_name(w.tag);
    EXPECT_EQ(s.twice_b_check, w.tb) << tag_name(w.tag);
    EXPECT_EQ(s.mults, w.mults) << tag_name(w.tag);
    EXPECT_EQ(s.type, SharpType::general);
    EXPECT_FALSE(p.sharp.violation.has_value()) << *p.sharp.violation;
    EXPECT_TRUE(p.sharp.trace.non_decreasing());
    const Int lhs = p.red.model.ksq() + p.red.model.pencil_self_intersection() + s.N();
    EXPECT_EQ(lhs, 4 * e.fibration.genus() + 4) << tag_name(w.tag);
  }
}

TEST(GreedySharp, PlaneModels) {
  const PipelineRun c = run_pipeline(get(Tag::C));
  const PlaneCurveModel pc = canonical_p2_model(c.sharp.data);
  EXPECT_EQ(pc.degree, 13);
  EXPECT_EQ(pc.singularities(), "5^1 4^9");
  const PipelineRun a = run_pipeline(get(Tag::A));
  EXPECT_EQ(canonical_p2_model(a.sharp.data).singularities(), "2^8");
  const PipelineRun b1 = run_pipeline(get(Tag::B1));
  const PlaneCurveModel pb1 = canonical_p2_model(b1.sharp.data);
  EXPECT_EQ(pb1.degree, 7);
  EXPECT_EQ(pb1.singularities(), "3^1 2^10");
  SharpModelData d0 = make_sharp_data(0, 2, 6, {2, 2});
  EXPECT_THROW(canonical_p2_model(d0), PipelineError);
}

TEST(GreedySharp, RefusesNonReducedInput) {
  const auto e = get(Tag::A);
  PencilModel m{e.fibration.surface(), e.fibration.fibre_class(), e.curve_classes(), 2};
  EXPECT_THROW(greedy_sharp_minimal(m), PipelineError);
}

TEST(GreedySharp, IncompleteGeometry) {
  const auto e = get(Tag::C);
  PencilModel m{e.fibration.surface(), e.fibration.fibre_class(), {}, 2};
  try {
    greedy_sharp_minimal(m);
    FAIL() << "expected an error";
  } catch (const PipelineError& err) {
    EXPECT_NE(std::string(err.what()).find("incomplete geometry"), std::string::npos);
  }
}

TEST(GreedySharp, NumericalFallbackIsFlagged) {
  const auto e = get(Tag::C);
  const NumericalCurveList l = numerical_minus_one_curves(e.fibration.surface(), 1);
  EXPECT_TRUE(l.over_approximate);
  EXPECT_EQ(l.curves.size(), 10u + 45u);
}

TEST(SharpData, ClassifyType) {
  EXPECT_EQ(make_sharp_data(1, 2, 7, {}).type, SharpType::general);
  const SharpModelData sp = make_sharp_data(1, 6, 10, {});
  EXPECT_EQ(sp.type, SharpType::special);
  EXPECT_EQ(sp.m0, std::optional<Int>(2));
  for (Int b = 0; b < 20; ++b) EXPECT_EQ(make_sharp_data(0, 4, b, {}).type, SharpType::general);
}

TEST(SharpData, ViolationsNameTheRepair) {
  const auto v1 = sharp_violation(make_sharp_data(2, 6, 10, {}));
  ASSERT_TRUE(v1);
  EXPECT_NE(v1->find("(#1)"), std::string::npos);
  EXPECT_NE(v1->find("elementary transformation"), std::string::npos);
  const auto v2 = sharp_violation(make_sharp_data(1, 2, 7, {3, 2}));
  ASSERT_TRUE(v2);
  EXPECT_NE(v2->find("(#2)"), std::string::npos);
  EXPECT_FALSE(sharp_violation(make_sharp_data(1, 6, 13, std::vector<Int>(9, 4))));
}

TEST(NumericTypes, GenusTwoFiveTuples) {
  const SearchResult r = search_general(2, 1, 3);
  std::vector<std::string> got;
  for (const auto& t : r.types) got.push_back(t.tuple_string());
  const std::vector<std::string> want = {
      "(2, 0, 7, 2, 2, 2, 2, 2, 2, 2, 1)",
      "(2, 1, 10, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2)",
      "(4, 0, 9, 3, 3, 3, 3, 3, 3, 3, 2, 2, 2)",
      "(6, 1, 9, 4, 4, 4, 4, 4, 4, 4, 4, 4, 3)",
      "(8, 0, 9, 5, 5, 5, 5, 5, 5, 5, 4, 3, 3)",
  };
  EXPECT_EQ(got, want);
  EXPECT_FALSE(r.a_ceiling_hit);
  for (const auto& t : r.types) {
    EXPECT_EQ(t.twice_genus(), 4);
    EXPECT_EQ(t.ksq_formula(), t.ksq);
    EXPECT_GE(t.pencil_square(), 0);
  }
  EXPECT_TRUE(search_special(2, 1, 3).empty());
  EXPECT_TRUE(search_general(2, 4, 4).types.empty());
}

TEST(NumericTypes, SearchMatchesOracle) {
  for (Int g : {2, 3, 4}) {
    EXPECT_EQ(oracle::as_oracle(search_general(g, 1, 4 * g - 5).types), oracle::numeric_types(g, 1, 4 * g - 5))
        << "g=" << g;
  }
}

TEST(NumericTypes, SectionExistence) {
  const auto ts = search_general(2, 1, 3).types;
  std::vector<std::pair<Int, bool>> got;
  for (const auto& t : apply_exclusion(ts)) got.emplace_back(t.ksq, t.has_minus_one_section());
  EXPECT_EQ(got, (std::vector<std::pair<Int, bool>>{{1, true}, {2, false}, {2, true}, {3, false}}));
}

TEST(NumericTypes, Bounds) {
  // Every type returned satisfies the known-prefix bound with the full prefix and m = m_N.
  for (const auto& t : search_general(3, 1, 7).types) {
    if (t.mults.empty()) continue;
    std::vector<Int> prefix(t.mults.begin(), t.mults.end() - 1);
    EXPECT_LE(bound_known_prefix(3, t.a, t.twice_b_check, prefix, t.mults.back()), Rational(t.ksq)) << t.tuple_string();
    EXPECT_LE(bound_ratio(3, t.a, t.twice_b_check), Rational(t.ksq)) << t.tuple_string();
    if (t.a % 2 == 0)
      EXPECT_LE(bound_max_mult_simple(3, t.a, t.twice_b_check), Rational(t.ksq));
    else
      EXPECT_LE(bound_odd_general(3, t.a), Rational(t.ksq)) << t.tuple_string();
  }
  EXPECT_EQ(bound_max_mult_simple(2, 2, 0), Rational(1));
  EXPECT_EQ(bound_max_mult_prefix(2, 6, 2, 0, 4), bound_max_mult_simple(2, 6, 2));
  EXPECT_THROW(bound_max_mult_prefix(2, 3, 0, 0, 2), std::domain_error);
  EXPECT_EQ(max_mult_prefix_equality(6, 3).m_n, 4);
  EXPECT_EQ(bound_special_even(2, 6), std::optional<Rational>(Rational(20, 3)));
  EXPECT_FALSE(bound_special_even(20, 4).has_value());
  EXPECT_EQ(bound_genus_two_even(6, 2), Rational(3) + Rational(0) + Rational(0));
}

TEST(NumericTypes, AdmissibleDegrees) {
  EXPECT_EQ(admissible_degrees(6, 2, std::vector<Int>(9, 4)), (std::vector<Int>{0, 1, 2}));
}

TEST(Exclusion, CertificateFindsDegreeTwo) {
  const ExclusionCertificate c = excluded_type_certificate();
  EXPECT_EQ(c.min_degree, 2);
  EXPECT_EQ(c.required, 1);
  EXPECT_TRUE(c.excluded());
  EXPECT_EQ(c.min_degree_case1, 2);
  EXPECT_EQ(c.min_degree_case2, 2);
  EXPECT_EQ(c.cases_checked, 64u + 240u);
  EXPECT_EQ(apply_exclusion(search_general(2, 1, 3).types).size(), 4u);
}

TEST(ReductionSurface, PlaneAndHirzebruchExcluded) {
  const ReductionSurfaceVerdict v = exclude_p2_and_hirzebruch({2, 0}, 1);
  EXPECT_FALSE(v.plane_possible);
  EXPECT_FALSE(v.plane_degree.has_value());
  EXPECT_FALSE(v.hirzebruch_possible);
  // Genus 3 is a plane quartic: (b-3)^2 = 1.
  const ReductionSurfaceVerdict q = exclude_p2_and_hirzebruch({3, 1}, 1);
  EXPECT_EQ(q.plane_degree, std::optional<Int>(4));
  EXPECT_TRUE(q.plane_possible);
  EXPECT_EQ(q.hirzebruch_value, Rational(1));
  EXPECT_TRUE(q.hirzebruch_possible);
}

TEST(BranchNumerics, Consistency) {
  BranchNumerics n;
  n.n_I[1] = 1;
  n.n_V = 0;
  n.epsilon = 1;
  const BranchVerdict v = branch_consistency(n, 1);
  EXPECT_TRUE(v.consistent());
  EXPECT_FALSE(branch_consistency(n, 2).consistent());
  for (const auto& b : enumerate_branch_numerics(3)) EXPECT_EQ(b.ksq_formula(), 3);
  EXPECT_FALSE(enumerate_branch_numerics(3).empty());
}
