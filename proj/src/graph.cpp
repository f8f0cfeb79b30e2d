#include "circgcn/graph.hpp"

#include <algorithm>

namespace circgcn {

void GraphConfig::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw UsageError("graph: gamma must be in [0,1]");
  }
}

bool Graph::has_edge(std::size_t u, std::size_t v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), static_cast<std::uint32_t>(v));
}

Graph Graph::from_edges(std::size_t n_circ, std::size_t n_disease,
                        const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  const std::size_t n = n_circ + n_disease;
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw DataError("graph edge endpoint out of range");
    if (u == v) throw DataError("self-edges are not stored");
    adj[u].push_back(static_cast<std::uint32_t>(v));
    adj[v].push_back(static_cast<std::uint32_t>(u));
  }

  Graph g;
  g.n_circ = n_circ;
  g.n_disease = n_disease;
  g.row_offsets.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    auto& row = adj[v];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    g.row_offsets[v + 1] = g.row_offsets[v] + row.size();
  }
  g.cols.reserve(g.row_offsets[n]);
  for (auto& row : adj) g.cols.insert(g.cols.end(), row.begin(), row.end());
  return g;
}

Graph build_graph(const SimilarityMatrix& fused, const SimilarityMatrix& dg,
                  const AssociationMatrix& as_train, const GraphConfig& cfg) {
  cfg.validate();
  const std::size_t nc = as_train.n_circ;
  const std::size_t nd = as_train.n_disease;
  if (fused.size() != nc || dg.size() != nd) {
    throw DataError("build_graph: similarity dimensions do not match AS");
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < nc; ++i) {
    for (std::size_t j = i + 1; j < nc; ++j) {
      if (fused.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) >
          cfg.gamma) {
        edges.emplace_back(i, j);
      }
    }
  }
  if (cfg.include_disease_edges) {
    for (std::size_t i = 0; i < nd; ++i) {
      for (std::size_t j = i + 1; j < nd; ++j) {
        if (dg.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) >
            cfg.gamma) {
          edges.emplace_back(nc + i, nc + j);
        }
      }
    }
  }
  if (cfg.include_assoc_edges) {
    for (std::size_t i = 0; i < nc; ++i) {
      for (std::size_t j = 0; j < nd; ++j) {
        if (as_train(i, j)) edges.emplace_back(i, nc + j);
      }
    }
  }
  return Graph::from_edges(nc, nd, edges);
}

GraphStats graph_stats(const Graph& g) {
  GraphStats st;
  st.n_circ = g.n_circ;
  st.n_disease = g.n_disease;
  std::size_t max_deg = 0;
  for (std::size_t v = 0; v < g.n_nodes(); ++v) {
    std::size_t d = g.degree(v);
    max_deg = std::max(max_deg, d);
    if (d == 0) ++st.isolated_nodes;
    for (auto u : g.neighbors(v)) {
      if (u <= v) continue;  // count each undirected edge once
      bool uc = g.kind(v) == NodeKind::circ;
      bool vc = g.kind(u) == NodeKind::circ;
      if (uc && vc) ++st.cc_edges;
      else if (!uc && !vc) ++st.dd_edges;
      else ++st.cd_edges;
    }
  }
  st.degree_histogram.assign(max_deg + 1, 0);
  for (std::size_t v = 0; v < g.n_nodes(); ++v) ++st.degree_histogram[g.degree(v)];
  return st;
}

}  // namespace circgcn
