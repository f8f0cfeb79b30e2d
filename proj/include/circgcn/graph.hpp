#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "circgcn/alignment.hpp"
#include "circgcn/common.hpp"
#include "circgcn/ingest.hpp"

namespace circgcn {

enum class NodeKind : std::uint8_t { circ, disease };

// Undirected heterogeneous graph in CSR form. Nodes 0..n_circ-1 are circRNAs,
// n_circ..n_circ+n_disease-1 are diseases. Column indices are sorted and
// unique per row; both directions of every edge are stored; no self-edges.
struct Graph {
  std::size_t n_circ = 0;
  std::size_t n_disease = 0;
  std::vector<std::size_t> row_offsets;  // n_nodes + 1
  std::vector<std::uint32_t> cols;

  std::size_t n_nodes() const { return n_circ + n_disease; }
  std::size_t n_edges() const { return cols.size() / 2; }
  std::size_t degree(std::size_t v) const {
    return row_offsets[v + 1] - row_offsets[v];
  }
  NodeKind kind(std::size_t v) const {
    return v < n_circ ? NodeKind::circ : NodeKind::disease;
  }
  std::span<const std::uint32_t> neighbors(std::size_t v) const {
    return {cols.data() + row_offsets[v], cols.data() + row_offsets[v + 1]};
  }
  bool has_edge(std::size_t u, std::size_t v) const;

  // Builds the CSR from an undirected edge list; symmetrizes, sorts and
  // de-duplicates, rejects self-edges and out-of-range endpoints.
  static Graph from_edges(std::size_t n_circ, std::size_t n_disease,
                          const std::vector<std::pair<std::size_t, std::size_t>>& edges);
};

struct GraphConfig {
  double gamma = 0.5;
  bool include_disease_edges = true;
  bool include_assoc_edges = true;

  void validate() const;
};

// Thresholded construction: circ-circ edge iff fused > gamma (strict),
// disease-disease edge iff dg > gamma and enabled, circ-disease edge iff
// the training association is 1 and enabled.
Graph build_graph(const SimilarityMatrix& fused, const SimilarityMatrix& dg,
                  const AssociationMatrix& as_train, const GraphConfig& cfg);

struct GraphStats {
  std::size_t n_circ = 0;
  std::size_t n_disease = 0;
  std::size_t cc_edges = 0;
  std::size_t dd_edges = 0;
  std::size_t cd_edges = 0;
  std::size_t isolated_nodes = 0;
  std::vector<std::size_t> degree_histogram;  // index = degree

  std::size_t total_edges() const { return cc_edges + dd_edges + cd_edges; }
};

GraphStats graph_stats(const Graph& g);

}  // namespace circgcn
