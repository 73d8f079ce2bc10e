#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dsep_oracle.hpp"
#include "mrproxy/dag.hpp"
#include "mrproxy/errors.hpp"
#include "mrproxy/scenarios.hpp"

namespace mrproxy {
namespace {

std::vector<std::string> formatted(const Dag& dag, const std::vector<Path>& paths) {
  std::vector<std::string> out;
  for (const auto& p : paths) out.push_back(dag.format(p));
  return out;
}

Dag chain() { return Dag({{"X", true}, {"M", true}, {"Y", true}}, {{"X", "M"}, {"M", "Y"}}); }

TEST(DagConstruction, RejectsCycle) {
  EXPECT_THROW(Dag({{"a", true}, {"b", true}, {"c", true}}, {{"a", "b"}, {"b", "c"}, {"c", "a"}}),
               DagError);
}

TEST(DagConstruction, RejectsSelfLoopDuplicateEdgeAndLabel) {
  EXPECT_THROW(Dag({{"a", true}}, {{"a", "a"}}), DagError);
  EXPECT_THROW(Dag({{"a", true}, {"b", true}}, {{"a", "b"}, {"a", "b"}}), DagError);
  EXPECT_THROW(Dag({{"a", true}, {"a", false}}, {}), DagError);
}

TEST(DagConstruction, UnknownLabel) {
  EXPECT_THROW(Dag({{"a", true}}, {{"a", "zz"}}), UnknownNode);
  const Dag d = chain();
  EXPECT_THROW(d.id("Q"), UnknownNode);
  EXPECT_FALSE(d.find("Q").has_value());
  EXPECT_THROW(d_separated(d, "X", "Q"), UnknownNode);
}

TEST(DagConstruction, DescendantClosure) {
  const Dag d = canonical_dag();
  EXPECT_TRUE(d.is_descendant(d.id("Y"), d.id("G_P")));
  EXPECT_TRUE(d.is_descendant(d.id("G"), d.id("G")));
  EXPECT_FALSE(d.is_descendant(d.id("Y_P"), d.id("G")));
  EXPECT_FALSE(d.is_descendant(d.id("G_P"), d.id("Y")));
}

TEST(EnumeratePaths, ChainHasOnePath) {
  const Dag d = chain();
  const auto paths = enumerate_paths(d, "X", "Y");
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(d.format(paths[0]), "X -> M -> Y");
  EXPECT_TRUE(paths[0].is_directed());
}

TEST(EnumeratePaths, ParentToChildGenotype) {
  const Dag d = canonical_dag();
  EXPECT_EQ(formatted(d, enumerate_paths(d, "G_P", "G")),
            std::vector<std::string>{"G_P -> G"});
}

TEST(EnumeratePaths, ChildGenotypeToParentOutcome) {
  const Dag d = canonical_dag();
  EXPECT_EQ(formatted(d, enumerate_paths(d, "G", "Y_P")),
            (std::vector<std::string>{"G <- G_P -> A_P <- U_P -> Y_P", "G <- G_P -> A_P -> Y_P"}));
}

TEST(EnumeratePaths, EveryStepFollowsAnEdgeAndNoNodeRepeats) {
  const Dag d = vaccine_dag();
  for (const auto& x : d.nodes()) {
    for (const auto& y : d.nodes()) {
      if (x.label == y.label) continue;
      for (const auto& p : enumerate_paths(d, x.label, y.label)) {
        ASSERT_EQ(p.nodes.front(), d.id(x.label));
        ASSERT_EQ(p.nodes.back(), d.id(y.label));
        ASSERT_EQ(p.forward.size() + 1, p.nodes.size());
        std::set<std::uint32_t> seen;
        for (std::size_t i = 0; i < p.nodes.size(); ++i) {
          ASSERT_TRUE(seen.insert(p.nodes[i].value).second);
          if (i + 1 < p.nodes.size()) {
            const bool ok = p.forward[i] ? d.has_edge(p.nodes[i], p.nodes[i + 1])
                                         : d.has_edge(p.nodes[i + 1], p.nodes[i]);
            ASSERT_TRUE(ok) << d.format(p);
          }
        }
      }
    }
  }
}

TEST(DSeparation, CanonicalExamples) {
  const Dag d = canonical_dag();
  EXPECT_FALSE(d_separated(d, "G", "A"));
  EXPECT_TRUE(d_separated(d, "G", "Y_P", {"A_P", "U_P"}));
  // A_P is a collider on G <- G_P -> A_P <- U_P -> Y_P.
  EXPECT_FALSE(d_separated(d, "G", "Y_P", {"A_P"}));
  EXPECT_FALSE(d_separated(d, "G", "Y", {"A"}));
  EXPECT_TRUE(d_separated(d, "G", "Y", {"A", "U"}));
  EXPECT_TRUE(d_separated(d, "G", "U"));
  EXPECT_FALSE(d_separated(d, "G", "U", {"A"}));
  EXPECT_FALSE(d_separated(d, "G", "U", {"Y"}));  // descendant of collider A
}

TEST(DSeparation, EndpointInConditioningSetIsAnError) {
  const Dag d = canonical_dag();
  EXPECT_THROW(d_separated(d, "G", "A", {"G"}), Error);
}

// Random DAGs over a fixed topological order, checked against the
// moralized-ancestral-graph criterion for every pair and every conditioning
// set of size <= 2.
TEST(DSeparation, AgreesWithMoralGraphCriterionOnRandomDags) {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 4 + trial % 4;
    std::vector<Node> nodes;
    for (int i = 0; i < n; ++i) nodes.push_back({"v" + std::to_string(i), true});
    std::vector<Dag::LabelEdge> edges;
    std::bernoulli_distribution coin(0.35 + 0.05 * (trial % 5));
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (coin(rng)) edges.emplace_back(nodes[i].label, nodes[j].label);
      }
    }
    std::shuffle(nodes.begin(), nodes.end(), rng);
    const Dag d(nodes, edges);
    for (std::uint32_t x = 0; x < d.size(); ++x) {
      for (std::uint32_t y = 0; y < d.size(); ++y) {
        if (x == y) continue;
        std::vector<std::uint32_t> rest;
        for (std::uint32_t z = 0; z < d.size(); ++z) {
          if (z != x && z != y) rest.push_back(z);
        }
        std::vector<std::vector<NodeId>> sets{{}};
        for (std::size_t a = 0; a < rest.size(); ++a) {
          sets.push_back({NodeId{rest[a]}});
          for (std::size_t b = a + 1; b < rest.size(); ++b) {
            sets.push_back({NodeId{rest[a]}, NodeId{rest[b]}});
          }
        }
        for (const auto& z : sets) {
          const bool got = d_separated(d, NodeId{x}, NodeId{y}, z);
          ASSERT_EQ(got, testing::moral_d_separated(d, NodeId{x}, NodeId{y}, z))
              << "trial " << trial << " " << d.label(NodeId{x}) << " " << d.label(NodeId{y});
          ASSERT_EQ(got, d_separated(d, NodeId{y}, NodeId{x}, z));
        }
      }
    }
  }
}

TEST(CheckInstrument, CanonicalAssumptionTriples) {
  const Dag d = canonical_dag();
  const auto participants = check_instrument(d, "G", "A", "Y");
  EXPECT_TRUE(participants.valid());
  EXPECT_TRUE(participants.causal);

  const auto parents = check_instrument(d, "G_P", "A_P", "Y_P");
  EXPECT_TRUE(parents.valid());
  EXPECT_TRUE(parents.causal);

  const auto cross = check_instrument(d, "G", "A_P", "Y_P");
  EXPECT_TRUE(cross.valid());
  EXPECT_FALSE(cross.causal);
  EXPECT_TRUE(cross.exclusion_witnesses.empty());
  EXPECT_TRUE(cross.confounding_witnesses.empty());
}

TEST(CheckInstrument, MismatchedGenerationsAreInvalid) {
  const Dag d = canonical_dag();
  for (const char* i : {"G", "G_P"}) {
    EXPECT_FALSE(check_instrument(d, i, "A", "Y_P").valid()) << i;
    EXPECT_FALSE(check_instrument(d, i, "A_P", "Y").valid()) << i;
  }
  // The parental variant also instruments the participants' exposure.
  EXPECT_TRUE(check_instrument(d, "G_P", "A", "Y").valid());
}

TEST(CheckInstrument, VaccineChannelBreaksParentalInstruments) {
  const Dag d = vaccine_dag();
  const auto parents = check_instrument(d, "G_P", "A_P", "Y_P");
  EXPECT_TRUE(parents.relevance);
  EXPECT_FALSE(parents.exclusion);
  EXPECT_EQ(formatted(d, parents.exclusion_witnesses),
            std::vector<std::string>{"G_P -> B_P -> Y_P"});

  const auto cross = check_instrument(d, "G", "A_P", "Y_P");
  EXPECT_FALSE(cross.valid());
  EXPECT_FALSE(cross.unconfounded);
  EXPECT_EQ(formatted(d, cross.confounding_witnesses),
            std::vector<std::string>{"G <- G_P -> B_P -> Y_P"});

  EXPECT_TRUE(check_instrument(d, "G", "A", "Y").valid());
}

TEST(CheckInstrument, WitnessesAreOpenPathsAvoidingTheExposure) {
  const Dag d = vaccine_dag();
  for (const auto& i : d.nodes()) {
    for (const auto& e : d.nodes()) {
      for (const auto& o : d.nodes()) {
        if (i.label == e.label || e.label == o.label || i.label == o.label) continue;
        const auto r = check_instrument(d, i.label, e.label, o.label);
        for (const auto& p : r.exclusion_witnesses) {
          EXPECT_TRUE(p.is_directed());
          EXPECT_FALSE(p.contains(d.id(e.label)));
        }
        for (const auto& p : r.confounding_witnesses) {
          EXPECT_FALSE(p.is_directed());
          EXPECT_TRUE(is_open(d, p, {}));
        }
        EXPECT_EQ(r.exclusion, r.exclusion_witnesses.empty());
        EXPECT_EQ(r.unconfounded, r.confounding_witnesses.empty());
        EXPECT_EQ(r.relevance, !d_separated(d, i.label, e.label));
      }
    }
  }
}

// The parental-variant instrument and the child-variant proxy instrument are
// valid together or not at all, on the scenario graphs and on random
// supersets of the canonical graph that leave the child variant's own edges
// alone.
TEST(CheckInstrument, ParentalAndProxyValidityCoincide) {
  for (const auto& s : scenario_catalog()) {
    EXPECT_EQ(check_instrument(s.dag, "G_P", "A_P", "Y_P").valid(),
              check_instrument(s.dag, "G", "A_P", "Y_P").valid())
        << s.name;
  }

  const Dag base = canonical_dag();
  std::vector<std::string> others;
  for (const auto& n : base.nodes()) {
    if (n.label != "G") others.push_back(n.label);
  }
  others.push_back("W");
  std::vector<Node> nodes = base.nodes();
  nodes.push_back({"W", false});
  std::vector<Dag::LabelEdge> base_edges;
  for (const auto& e : base.edges()) base_edges.emplace_back(base.label(e.from), base.label(e.to));
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, others.size() - 1);
  int invalid_seen = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Dag::LabelEdge> edges = base_edges;
    for (int k = 0; k < 2; ++k) {
      const Dag::LabelEdge e{others[pick(rng)], others[pick(rng)]};
      if (e.first == e.second || std::find(edges.begin(), edges.end(), e) != edges.end()) continue;
      edges.push_back(e);
      try {
        Dag probe(nodes, edges);
      } catch (const DagError&) {
        edges.pop_back();
      }
    }
    const Dag d(nodes, edges);
    const bool parental = check_instrument(d, "G_P", "A_P", "Y_P").valid();
    EXPECT_EQ(parental, check_instrument(d, "G", "A_P", "Y_P").valid()) << trial;
    invalid_seen += parental ? 0 : 1;
  }
  EXPECT_GT(invalid_seen, 5);
}

}  // namespace
}  // namespace mrproxy
