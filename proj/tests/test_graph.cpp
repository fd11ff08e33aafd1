#include "doctest.h"
#include "tapc/error.hpp"
#include "tapc/graph.hpp"
#include "tapc/graph_io.hpp"
#include "test_support.hpp"

using namespace tapc;

namespace {
// 1-based helper so the cases read like the motif 1 -> 3, 2 -> 3, 3 -> 4.
Edge e1(int u, int v) { return {u - 1, v - 1}; }
Dag motif() { return Dag(4, {e1(1, 3), e1(2, 3), e1(3, 4)}); }
}  // namespace

TEST_CASE("acyclicity") {
  CHECK(is_acyclic(3, {}));
  const std::vector<Edge> cycle{e1(1, 2), e1(2, 3), e1(3, 1)};
  CHECK_FALSE(is_acyclic(3, cycle));
  const std::vector<Edge> m{e1(1, 3), e1(2, 3), e1(3, 4)};
  CHECK(is_acyclic(4, m));
  CHECK_THROWS_AS(Dag(3, {e1(1, 2), e1(2, 3), e1(3, 1)}), InvalidArgument);
  CHECK_THROWS_AS(Dag(2, {e1(1, 1)}), InvalidArgument);
  Dag g(2, {e1(1, 2)});
  CHECK_THROWS_AS(g.add_edge(1, 0), InvalidArgument);
}

TEST_CASE("ancestors count each node as its own ancestor") {
  const Dag g = motif();
  CHECK(ancestors(g, {3}) == NodeSet{0, 1, 2, 3});
  CHECK(ancestors(g, {0}) == NodeSet{0});
  CHECK(ancestors(g, {0, 1}) == NodeSet{0, 1});
}

TEST_CASE("d-separation textbook cases") {
  const Dag collider(3, {e1(1, 3), e1(2, 3)});
  CHECK(d_separated(collider, {0}, {1}, {}));
  CHECK_FALSE(d_separated(collider, {0}, {1}, {2}));
  const Dag chain(3, {e1(1, 2), e1(2, 3)});
  CHECK(d_separated(chain, {0}, {2}, {1}));
  CHECK_FALSE(d_separated(chain, {0}, {2}, {}));
  // conditioning on a descendant of a collider opens it
  CHECK_FALSE(d_separated(motif(), {0}, {1}, {3}));
  CHECK_THROWS_AS(d_separated(chain, {0}, {0, 2}, {}), InvalidArgument);
}

TEST_CASE("Bayes-ball agrees with path enumeration on random DAGs") {
  SplitMix64 rng(11);
  int checked = 0;
  for (int rep = 0; rep < 150; ++rep) {
    const int p = 3 + static_cast<int>(rng.below(4));
    const Dag g = testing::random_dag(p, 0.45, rng);
    for (NodeId a = 0; a < p; ++a) {
      for (NodeId b = a + 1; b < p; ++b) {
        std::vector<NodeId> rest;
        for (NodeId v = 0; v < p; ++v)
          if (v != a && v != b) rest.push_back(v);
        for (const NodeSet& c : testing::all_subsets(rest, rest.size())) {
          REQUIRE(d_separated(g, {a}, {b}, c) == testing::d_separated_by_paths(g, a, b, c));
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("v-structures") {
  CHECK(v_structures(motif()) == std::vector<VStructure>{{0, 2, 1}});
  CHECK(v_structures(Dag(3, {e1(1, 2), e1(2, 3)})).empty());
  CHECK(v_structures(Dag(3, {e1(1, 3), e1(2, 3), e1(1, 2)})).empty());
}

TEST_CASE("Markov equivalence") {
  const Dag chain(3, {e1(1, 2), e1(2, 3)});
  CHECK(markov_equivalent(chain, chain));
  CHECK(markov_equivalent(chain, Dag(3, {e1(3, 2), e1(2, 1)})));
  CHECK_FALSE(markov_equivalent(Dag(3, {e1(1, 3), e1(2, 3)}), Dag(3, {e1(3, 1), e1(2, 3)})));
}

TEST_CASE("CPDAG examples") {
  const Pdag m = cpdag_of(motif());
  CHECK(m.directed_edges() == std::vector<Edge>{e1(1, 3), e1(2, 3), e1(3, 4)});
  CHECK(m.undirected_edges().empty());
  const Pdag single = cpdag_of(Dag(2, {e1(1, 2)}));
  CHECK(single.undirected_edges() == std::vector<Edge>{e1(1, 2)});
  const Pdag chain = cpdag_of(Dag(3, {e1(1, 2), e1(2, 3)}));
  CHECK(chain.directed_edges().empty());
  CHECK(chain.undirected_edges() == std::vector<Edge>{e1(1, 2), e1(2, 3)});
}

TEST_CASE("rolling") {
  const int p = 4;
  auto node = [p](int var, int time) { return UnrolledNode{var - 1, time - 1}.flat(p); };
  Pdag g(p * 2);
  g.add_directed(node(1, 1), node(3, 2));
  g.add_directed(node(3, 1), node(4, 2));
  CHECK(roll(g, p, 2) == RolledGraph(4, {e1(1, 3), e1(3, 4)}));

  Pdag self(4);
  self.add_directed(0, 2);  // (1,1) -> (1,2) with p = 2
  CHECK(roll(self, 2, 2) == RolledGraph(2, {e1(1, 1)}));

  Pdag contemporaneous(4);
  contemporaneous.add_undirected(0, 1);
  CHECK(roll(contemporaneous, 2, 2) == RolledGraph(2, {e1(1, 2), e1(2, 1)}));

  Pdag backward(4);
  backward.add_directed(2, 1);  // (1,2) -> (2,1)
  CHECK(roll(backward, 2, 2).edge_count() == 0);
  Pdag lagged_undirected(4);
  lagged_undirected.add_undirected(0, 3);  // (1,1) - (2,2)
  CHECK(roll(lagged_undirected, 2, 2) == RolledGraph(2, {e1(1, 2)}));
  CHECK_THROWS_AS(roll(g, 3, 2), InvalidArgument);
}

TEST_CASE("graph JSON round trip") {
  Pdag g(4);
  g.add_directed(0, 2);
  g.add_undirected(1, 3);
  CHECK(pdag_from_json(to_json(g)) == g);
  CHECK(dag_from_json(to_json(motif())) == motif());
  const RolledGraph r(3, {e1(1, 1), e1(2, 3)});
  CHECK(rolled_from_json(to_json(r)) == r);
  CHECK(to_json(motif()) == R"({"directed":[[1,3],[2,3],[3,4]],"p":4,"undirected":[]})");
  CHECK_THROWS_AS(pdag_from_json(R"({"p":2,"extra":1})"), ConfigError);
  CHECK_THROWS_AS(pdag_from_json(R"({"p":2,"directed":[[1,3]]})"), ConfigError);
  CHECK_THROWS_AS(dag_from_json(R"({"p":2,"directed":[[1,2],[2,1]]})"), ConfigError);
  CHECK_THROWS_AS(pdag_from_json("not json"), ConfigError);
}

TEST_CASE("DOT output marks undirected edges") {
  Pdag g(2);
  g.add_undirected(0, 1);
  const std::string dot = to_dot(g, "G");
  CHECK(dot.find("1 -> 2 [dir=none]") != std::string::npos);
  CHECK(to_dot(motif()).find("3 -> 4") != std::string::npos);
}
