#include <doctest.h>

#include "circgcn/graph.hpp"
#include "test_support.hpp"

using namespace circgcn;
using namespace circgcn::testing;

namespace {

SimilarityMatrix const_sim(std::size_t n, double off_diag, const std::string& prefix) {
  SimilarityMatrix m;
  for (std::size_t i = 0; i < n; ++i) m.ids.push_back(prefix + std::to_string(i));
  m.values = Eigen::MatrixXd::Constant(n, n, off_diag);
  for (std::size_t i = 0; i < n; ++i) m.values(i, i) = 1.0;
  return m;
}

AssociationMatrix assoc_2x1(std::uint8_t a, std::uint8_t b) {
  auto as = AssociationMatrix::zeros({"c0", "c1"}, {"d0"});
  as.set(0, 0, a);
  as.set(1, 0, b);
  return as;
}

}  // namespace

TEST_CASE("build_graph: three-rule example") {
  auto fused = const_sim(2, 0.9, "c");
  auto dg = const_sim(1, 0.0, "d");
  auto as = assoc_2x1(1, 0);
  GraphConfig cfg;
  cfg.gamma = 0.5;
  Graph g = build_graph(fused, dg, as, cfg);
  CHECK(g.n_edges() == 2);
  CHECK(g.has_edge(0, 1));  // c0-c1 similarity edge
  CHECK(g.has_edge(0, 2));  // c0-d0 association edge
  CHECK(!g.has_edge(1, 2));
}

TEST_CASE("build_graph: gamma=1 keeps only association edges (strict >)") {
  auto fused = const_sim(3, 1.0, "c");
  auto dg = const_sim(2, 1.0, "d");
  auto as = AssociationMatrix::zeros({"c0", "c1", "c2"}, {"d0", "d1"});
  as.set(2, 1, 1);
  GraphConfig cfg;
  cfg.gamma = 1.0;
  Graph g = build_graph(fused, dg, as, cfg);
  CHECK(g.n_edges() == 1);
  CHECK(g.has_edge(2, 4));
}

TEST_CASE("build_graph: threshold tie is excluded") {
  auto fused = const_sim(2, 0.5, "c");
  auto dg = const_sim(1, 0.0, "d");
  auto as = assoc_2x1(0, 0);
  GraphConfig cfg;
  cfg.gamma = 0.5;
  Graph g = build_graph(fused, dg, as, cfg);
  CHECK(g.n_edges() == 0);  // 0.5 > 0.5 is false

  cfg.gamma = 0.49999;
  CHECK(build_graph(fused, dg, as, cfg).n_edges() == 1);
}

TEST_CASE("build_graph: empty edge set is a valid graph") {
  auto fused = const_sim(2, 0.1, "c");
  auto dg = const_sim(1, 0.0, "d");
  auto as = assoc_2x1(0, 0);
  GraphConfig cfg;
  cfg.gamma = 0.9;
  Graph g = build_graph(fused, dg, as, cfg);
  CHECK(g.n_edges() == 0);
  CHECK(g.n_nodes() == 3);
  auto st = graph_stats(g);
  CHECK(st.isolated_nodes == 3);
  CHECK(st.total_edges() == 0);
}

TEST_CASE("build_graph: flags disable edge classes") {
  auto fused = const_sim(2, 0.9, "c");
  auto dg = const_sim(2, 0.9, "d");
  auto as = AssociationMatrix::zeros({"c0", "c1"}, {"d0", "d1"});
  as.set(0, 0, 1);
  GraphConfig cfg;
  cfg.gamma = 0.5;
  auto st_all = graph_stats(build_graph(fused, dg, as, cfg));
  CHECK(st_all.cc_edges == 1);
  CHECK(st_all.dd_edges == 1);
  CHECK(st_all.cd_edges == 1);

  cfg.include_disease_edges = false;
  auto st_nodd = graph_stats(build_graph(fused, dg, as, cfg));
  CHECK(st_nodd.dd_edges == 0);
  CHECK(st_nodd.cc_edges == 1);

  cfg.include_disease_edges = true;
  cfg.include_assoc_edges = false;
  auto st_nocd = graph_stats(build_graph(fused, dg, as, cfg));
  CHECK(st_nocd.cd_edges == 0);
  CHECK(st_nocd.dd_edges == 1);
}

TEST_CASE("build_graph: dimension mismatch") {
  auto fused = const_sim(3, 0.9, "c");
  auto dg = const_sim(1, 0.0, "d");
  auto as = assoc_2x1(1, 1);
  CHECK_THROWS_AS(build_graph(fused, dg, as, GraphConfig{}), DataError);
}

TEST_CASE("graph invariants: symmetric, duplicate-free, sorted") {
  Rng rng(17);
  for (int rep = 0; rep < 30; ++rep) {
    Graph g = random_graph(rng, 2 + rng.below(8), 1 + rng.below(5), 0.4);
    for (std::size_t v = 0; v < g.n_nodes(); ++v) {
      auto nb = g.neighbors(v);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        CHECK(nb[k] != v);
        if (k > 0) CHECK(nb[k - 1] < nb[k]);  // sorted and unique
        CHECK(g.has_edge(nb[k], v));          // symmetric
      }
    }
  }
}

TEST_CASE("edge set is monotone non-increasing in gamma") {
  Rng rng(19);
  for (int rep = 0; rep < 10; ++rep) {
    std::size_t nc = 3 + rng.below(6), nd = 2 + rng.below(4);
    SimilarityMatrix fused = const_sim(nc, 0.0, "c");
    SimilarityMatrix dg = const_sim(nd, 0.0, "d");
    for (std::size_t i = 0; i < nc; ++i) {
      for (std::size_t j = i + 1; j < nc; ++j) {
        fused.values(i, j) = fused.values(j, i) = rng.uniform();
      }
    }
    for (std::size_t i = 0; i < nd; ++i) {
      for (std::size_t j = i + 1; j < nd; ++j) {
        dg.values(i, j) = dg.values(j, i) = rng.uniform();
      }
    }
    auto as = random_assoc(rng, nc, nd, 0.3);
    GraphConfig lo, hi;
    lo.gamma = rng.uniform(0.0, 0.5);
    hi.gamma = lo.gamma + rng.uniform(0.0, 1.0 - lo.gamma);
    Graph g_lo = build_graph(fused, dg, as, lo);
    Graph g_hi = build_graph(fused, dg, as, hi);
    CHECK(g_hi.n_edges() <= g_lo.n_edges());
    for (std::size_t v = 0; v < g_hi.n_nodes(); ++v) {
      for (auto u : g_hi.neighbors(v)) {
        CHECK(g_lo.has_edge(v, u));  // containment, not just counts
      }
    }
    // association edges survive any gamma
    for (std::size_t i = 0; i < nc; ++i) {
      for (std::size_t j = 0; j < nd; ++j) {
        if (as(i, j)) CHECK(g_hi.has_edge(i, nc + j));
      }
    }
  }
}

TEST_CASE("graph_stats: degree bookkeeping") {
  // 3-node example from above: degrees c0:2, c1:1, d0:1
  auto fused = const_sim(2, 0.9, "c");
  auto dg = const_sim(1, 0.0, "d");
  auto as = assoc_2x1(1, 0);
  GraphConfig cfg;
  cfg.gamma = 0.5;
  Graph g = build_graph(fused, dg, as, cfg);
  CHECK(g.degree(0) == 2);
  CHECK(g.degree(1) == 1);
  CHECK(g.degree(2) == 1);
  auto st = graph_stats(g);
  CHECK(st.total_edges() == 2);
  CHECK(st.degree_histogram[1] == 2);
  CHECK(st.degree_histogram[2] == 1);

  // star: one hub of degree k
  std::size_t k = 6;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t leaf = 1; leaf <= k; ++leaf) edges.emplace_back(0, leaf);
  Graph star = Graph::from_edges(k + 1, 0, edges);
  auto sst = graph_stats(star);
  CHECK(star.degree(0) == k);
  CHECK(sst.degree_histogram[k] == 1);
  CHECK(sst.degree_histogram[1] == k);
}

TEST_CASE("Graph::from_edges rejects bad input") {
  CHECK_THROWS_AS(Graph::from_edges(2, 0, {{0, 2}}), DataError);
  CHECK_THROWS_AS(Graph::from_edges(2, 0, {{1, 1}}), DataError);
  // duplicates collapse
  Graph g = Graph::from_edges(2, 0, {{0, 1}, {1, 0}, {0, 1}});
  CHECK(g.n_edges() == 1);
}
