#include <gtest/gtest.h>

#include "ratpencil/catalog.hpp"
#include "ratpencil/fibres.hpp"

using namespace ratpencil;

namespace {

std::vector<std::vector<std::size_t>> path(std::size_t n) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    adj[i].push_back(i + 1);
    adj[i + 1].push_back(i);
  }
  return adj;
}

/// Star with arms of the given lengths (not counting the centre).
std::vector<std::vector<std::size_t>> star(const std::vector<std::size_t>& arms) {
  std::vector<std::vector<std::size_t>> adj(1);
  for (std::size_t len : arms) {
    std::size_t prev = 0;
    for (std::size_t k = 0; k < len; ++k) {
      adj.emplace_back();
      const std::size_t v = adj.size() - 1;
      adj[prev].push_back(v);
      adj[v].push_back(prev);
      prev = v;
    }
  }
  return adj;
}

}  // namespace

TEST(Ade, Labels) {
  EXPECT_EQ(ade_label(path(1), false), "A_1");
  EXPECT_EQ(ade_label(path(7), false), "A_7");
  EXPECT_EQ(ade_label(star({1, 1, 1}), false), "D_4");
  EXPECT_EQ(ade_label(star({1, 1, 3}), false), "D_6");
  EXPECT_EQ(ade_label(star({1, 2, 2}), false), "E_6");
  EXPECT_EQ(ade_label(star({1, 2, 3}), false), "E_7");
  EXPECT_EQ(ade_label(star({1, 2, 4}), false), "E_8");
  EXPECT_EQ(ade_label(star({2, 2, 2}), false), "~E_6");
  EXPECT_EQ(ade_label(star({1, 3, 3}), false), "~E_7");
  EXPECT_EQ(ade_label(star({1, 2, 5}), false), "~E_8");
  EXPECT_EQ(ade_label(star({1, 1, 1, 1}), false), "~D_4");
  EXPECT_EQ(ade_label(star({2, 2, 3}), false), "unclassified");
  EXPECT_EQ(ade_label(path(2), true), "unclassified");
  // Cycle of four.
  std::vector<std::vector<std::size_t>> cyc = {{1, 3}, {0, 2}, {1, 3}, {2, 0}};
  EXPECT_EQ(ade_label(cyc, false), "~A_3");
}

TEST(Ade, TwoBranchNodesGiveAffineD) {
  // Branch nodes 0 and 1 joined, each with two leaves: ~D_5 has 6 nodes.
  std::vector<std::vector<std::size_t>> adj = {{1, 2, 3}, {0, 4, 5}, {0}, {0}, {1}, {1}};
  EXPECT_EQ(ade_label(adj, false), "~D_5");
}

TEST(Fibres, ExampleDecompositionsValidate) {
  for (Tag t : {Tag::Ex4_3, Tag::Ex4_4, Tag::Ex4_5, Tag::Ex4_6}) {
    const auto e = get(t);
    for (const auto& dec : e.fibration.fibres()) {
      const FibreReport r = validate_fibre(e.fibration, dec);
      EXPECT_TRUE(r.ok) << tag_name(t) << " " << r.failure;
      EXPECT_TRUE(r.semidefinite);
      EXPECT_TRUE(r.fibre_in_radical);
      EXPECT_TRUE(dual_graph(e.fibration, dec).connected());
    }
  }
}

TEST(Fibres, BrokenSumReportsResidual) {
  const auto e = get(Tag::Ex4_6);
  FibreDecomposition dec = e.fibration.fibres()[0];
  dec.components[2].multiplicity = 1;
  const FibreReport r = validate_fibre(e.fibration, dec);
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.failure.find("does not sum to F"), std::string::npos);
  EXPECT_FALSE(r.residual.empty());
}

TEST(Fibres, WrongLabelReported) {
  const auto e = get(Tag::Ex4_5);
  FibreDecomposition dec = e.fibration.fibres()[0];
  for (auto& c : dec.components)
    if (c.name == "T8") c.self_int = -2;
  const FibreReport r = validate_fibre(e.fibration, dec);
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.failure.find("T8^2 = -3"), std::string::npos);
}

TEST(Fibres, NodeCounts) {
  const auto e6 = get(Tag::Ex4_6);
  EXPECT_EQ(dual_graph(e6.fibration, *e6.fibration.find_fibre("F1")).nodes.size(), 4u);
  const auto e5 = get(Tag::Ex4_5);
  const DualGraph g5 = dual_graph(e5.fibration, *e5.fibration.find_fibre("F0"));
  EXPECT_EQ(g5.nodes.size(), 11u);
  EXPECT_EQ(g5.edges.size(), 10u);
}

TEST(Fibres, AdeOnExampleFibres) {
  const auto e = get(Tag::Ex4_3);
  std::vector<std::string> labels;
  for (const auto& c : ade_classify(dual_graph(e.fibration, *e.fibration.find_fibre("Finf")))) labels.push_back(c.label);
  // T0 is a (-4)-curve; the (-2)-curves T1..T8 form E_8.
  EXPECT_EQ(labels, std::vector<std::string>{"E_8"});
}

TEST(Fibres, DotMarksEllipticNodes) {
  const auto e = get(Tag::Ex4_6);
  const std::string dot = to_dot(dual_graph(e.fibration, *e.fibration.find_fibre("F0")), "F0");
  EXPECT_EQ(dot.rfind("graph \"F0\" {", 0), 0u);
  EXPECT_NE(dot.find("peripheries=2"), std::string::npos);
  EXPECT_EQ(dot.back(), '\n');
}

TEST(ShiodaRank, Formula) {
  EXPECT_EQ(shioda_rank(11, {4, 4, 4}), 0);
  EXPECT_EQ(shioda_rank(13, {4, 9}), 0);
  EXPECT_EQ(shioda_rank(12, {11}), 0);
  EXPECT_EQ(shioda_rank(12, {6, 6}), 0);
  EXPECT_EQ(shioda_rank(12, {2}), 9);
  EXPECT_THROW(shioda_rank(11, {9, 9}), FibreDataError);
  EXPECT_THROW(shioda_rank(1, {}), FibreDataError);
}

TEST(Decomposition, ExampleBlocksAreUnimodular) {
  for (Tag t : {Tag::Ex4_3, Tag::Ex4_4, Tag::Ex4_5, Tag::Ex4_6}) {
    const VerifyReport r = verify(t);
    ASSERT_TRUE(r.ok) << tag_name(t) << ": " << r.first_failure;
    ASSERT_TRUE(r.determinant);
    EXPECT_EQ(std::abs(*r.determinant), 1) << tag_name(t);
    EXPECT_EQ(r.mw_rank, std::optional<Int>(0));
  }
  EXPECT_EQ(verify(Tag::Ex4_6).block_count, 4u);
}

TEST(Decomposition, NonOrthogonalBlocksRejected) {
  const auto e = get(Tag::Ex4_6);
  auto look = [&](const std::string& n) { return NamedClass{n, *e.lookup(n)}; };
  const DecompositionReport r = orthogonal_decomposition_check(
      e.fibration, {{look("F"), look("O")}, {look("T2"), look("T5")}, {look("T6"), look("T9"), look("T12")}});
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.message, "blocks not orthogonal: O.T2 = 1");
}

TEST(Complement, TrivialLatticeComplementIsSpannedByFibreComponents) {
  const auto e = get(Tag::Ex4_6);
  const SurfaceModel& m = e.fibration.surface();
  const ComplementLattice c = complement_lattice(m, {e.fibration.fibre_class(), *e.lookup("O")});
  EXPECT_EQ(c.basis.size(), 9u);
  EXPECT_EQ(c.discriminant, 1);
  std::vector<DivisorClass> thetas;
  for (const char* n : {"T5", "T8", "T11", "T6", "T9", "T12", "T7", "T10", "T13"}) thetas.push_back(*e.lookup(n));
  EXPECT_TRUE(spans_equal(m, thetas, c));
  thetas.pop_back();
  thetas.push_back(*e.lookup("T4"));
  EXPECT_FALSE(spans_equal(m, thetas, c));
  EXPECT_THROW(complement_lattice(m, {m.line(), 2 * m.line()}), LatticeError);
}

TEST(Catalog, EveryEntryVerifies) {
  for (Tag t : all_tags()) {
    const VerifyReport r = verify(t);
    EXPECT_TRUE(r.ok) << tag_name(t) << ": " << r.first_failure;
  }
}

TEST(Catalog, TagParsing) {
  EXPECT_EQ(parse_tag("4.6"), std::optional<Tag>(Tag::Ex4_6));
  EXPECT_EQ(parse_tag("Ex4_5"), std::optional<Tag>(Tag::Ex4_5));
  EXPECT_EQ(parse_tag("B2"), std::optional<Tag>(Tag::B2));
  EXPECT_FALSE(parse_tag("9.9"));
  EXPECT_THROW(get(std::string("9.9")), std::invalid_argument);
}

TEST(Catalog, ReconstructedClasses) {
  const auto e3 = get(Tag::Ex4_3);
  const SurfaceModel& m3 = e3.fibration.surface();
  EXPECT_EQ(*e3.lookup("e8"), m3.exceptional(8));
  const auto e5 = get(Tag::Ex4_5);
  const SurfaceModel& m5 = e5.fibration.surface();
  EXPECT_EQ(*e5.lookup("e8hat"), m5.exceptional(8) - m5.exceptional(11));
}

TEST(Catalog, MutatedFibreFailsAtFirstIdentity) {
  CatalogEntry e = get(Tag::B1);
  const SurfaceModel m = e.fibration.surface();
  DivisorClass bad = e.fibration.fibre_class() + m.exceptional(11);
  e.fibration = FibrationModel::unchecked(m, bad);
  const VerifyReport r = verify_entry(e);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.first_failure, "F^2 = 3, expected 0");
}
