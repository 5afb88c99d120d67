#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ratpencil/catalog.hpp"
#include "ratpencil/curve_classes.hpp"

using namespace ratpencil;

namespace {

std::vector<std::vector<Int>> sorted_coords(const std::vector<DivisorClass>& cs) {
  std::vector<std::vector<Int>> out;
  for (const auto& c : cs) out.push_back(c.coords());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(EnumClasses, ClassicalCounts) {
  // Lines on cubic surfaces and (-1)-classes on degree-2 and degree-1 del Pezzo lattices.
  EXPECT_EQ(enum_classes(SurfaceModel::plane(6), minus_one_query(3)).size(), 27u);
  EXPECT_EQ(enum_classes(SurfaceModel::plane(7), minus_one_query(3)).size(), 56u);
  EXPECT_EQ(enum_classes(SurfaceModel::plane(8), minus_one_query(6)).size(), 240u);
  EXPECT_EQ(enum_classes(SurfaceModel::plane(8), minus_one_query(3)).size(), 148u);
  // Roots of E8 of degree <= 3 (degree-0 roots e_i - e_j counted with both signs).
  EXPECT_EQ(enum_classes(SurfaceModel::plane(8), minus_two_query(3)).size(), 148u);
}

TEST(EnumClasses, MatchesBoxOracle) {
  const std::vector<SurfaceModel> models = {SurfaceModel::plane(5), SurfaceModel::plane(8),
                                            SurfaceModel::hirzebruch(0, 5), SurfaceModel::hirzebruch(1, 6),
                                            SurfaceModel::hirzebruch(2, 4)};
  for (const auto& m : models)
    for (const auto& q : {minus_one_query(3), minus_two_query(2), pencil_query(3)}) {
      const auto want = oracle::box_classes(m, q.self_int, q.k_deg, q.degree_cap);
      EXPECT_EQ(sorted_coords(enum_classes(m, q)), want) << m.describe() << " C^2=" << q.self_int;
    }
}

TEST(EnumClasses, SortedAndWithinBounds) {
  const SurfaceModel m = SurfaceModel::hirzebruch(1, 5);
  const auto cs = enum_classes(m, minus_one_query(3));
  ASSERT_FALSE(cs.empty());
  EXPECT_TRUE(std::is_sorted(cs.begin(), cs.end(), DivisorClass::lex_less));
  for (const auto& c : cs) {
    EXPECT_EQ(self_intersection(m, c), -1);
    EXPECT_EQ(canonical_degree(m, c), -1);
    const Int h = intersect(m, m.reference_nef(), c);
    EXPECT_GE(h, 0);
    EXPECT_LE(h, 3);
  }
}

TEST(EnumClasses, BudgetAndCapErrors) {
  EXPECT_THROW(enum_classes(SurfaceModel::plane(8), minus_one_query(3), 10), LatticeError);
  EXPECT_THROW(enum_classes(SurfaceModel::plane(3), minus_one_query(0)), LatticeError);
}

TEST(PencilShift, FoundWhereIntegral) {
  EXPECT_FALSE(find_pencil_shift(get(Tag::A).fibration).has_value());
  const auto b1 = find_pencil_shift(get(Tag::B1).fibration);
  ASSERT_TRUE(b1.has_value());
  EXPECT_EQ(b1->shift, 2);
  const auto c = find_pencil_shift(get(Tag::C).fibration);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->shift, 4);
  const auto ec = get(Tag::C);
  const SurfaceModel& m = ec.fibration.surface();
  EXPECT_EQ(c->pencil.coords(), (m.line() - m.exceptional(1)).coords());
}

TEST(PencilShift, MinusOneIdentitiesOnB1AndC) {
  for (const auto& [tag, shift] : std::vector<std::pair<Tag, Int>>{{Tag::B1, 2}, {Tag::C, 4}}) {
    const auto e = get(tag);
    const auto ps = find_pencil_shift(e.fibration);
    ASSERT_TRUE(ps);
    const IdentityReport r = fibre_intersection_identity(e.fibration, ps->pencil, ps->shift, minus_one_query(3));
    EXPECT_TRUE(r.applicable);
    EXPECT_GT(r.checked, 0u);
    EXPECT_EQ(r.violations, 0u);
    const SurfaceModel& m = e.fibration.surface();
    for (const auto& c : enum_classes(m, minus_one_query(3)))
      EXPECT_EQ(intersect(m, e.fibration.fibre_class(), c) - intersect(m, ps->pencil, c), shift);
  }
}

TEST(PencilShift, PencilClassesOnC) {
  const auto e = get(Tag::C);
  const SurfaceModel& m = e.fibration.surface();
  const DivisorClass p = m.line() - m.exceptional(1);
  const IdentityReport r = fibre_intersection_identity(e.fibration, p, 4, pencil_query(3));
  EXPECT_EQ(r.violations, 0u);
  ASSERT_TRUE(r.min_fibre);
  EXPECT_EQ(*r.min_fibre, 8);
  EXPECT_EQ(*r.argmin_fibre, p);
  for (const auto& c : enum_classes(m, pencil_query(3)))
    EXPECT_EQ(intersect(m, e.fibration.fibre_class(), c), intersect(m, p, c) + 8);
}

TEST(PencilShift, WrongShiftIsInapplicable) {
  const auto e = get(Tag::C);
  const SurfaceModel& m = e.fibration.surface();
  EXPECT_THROW(fibre_intersection_identity(e.fibration, m.line() - m.exceptional(1), 3, pencil_query(3)), LatticeError);
}

TEST(MinusOneSection, CanonicalModels) {
  const auto ea = get(Tag::A);
  const SectionVerdict a = minus_one_section_exists(ea.fibration);
  EXPECT_TRUE(a.exists);
  const SurfaceModel& ma = ea.fibration.surface();
  std::vector<DivisorClass> want;
  for (std::size_t i = 9; i <= 12; ++i) want.push_back(ma.exceptional(i));
  EXPECT_EQ(sorted_coords(a.witnesses), sorted_coords(want));

  const SectionVerdict b1 = minus_one_section_exists(get(Tag::B1).fibration);
  EXPECT_FALSE(b1.exists);
  EXPECT_TRUE(b1.lower_bound_certified);
  EXPECT_EQ(*b1.min_fibre, 2);

  const SectionVerdict b2 = minus_one_section_exists(get(Tag::B2).fibration);
  EXPECT_TRUE(b2.exists);
  ASSERT_EQ(b2.witnesses.size(), 1u);
  EXPECT_EQ(b2.witnesses[0].coords().back(), 1);

  const SectionVerdict c = minus_one_section_exists(get(Tag::C).fibration);
  EXPECT_FALSE(c.exists);
  EXPECT_TRUE(c.lower_bound_certified);
  EXPECT_EQ(*c.min_fibre, 4);
}
