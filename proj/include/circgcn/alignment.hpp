#pragma once

#include <Eigen/Core>
#include <string>
#include <string_view>
#include <vector>

#include "circgcn/common.hpp"
#include "circgcn/ingest.hpp"

namespace circgcn {

// Linear-gap global alignment scoring. match > 0 keeps self-scores positive,
// which the similarity normalization divides by.
struct ScoringScheme {
  int match = 1;
  int mismatch = -1;
  int gap = -1;

  void validate() const;
};

// Dense symmetric similarity matrix with unit diagonal, entries in [0,1].
// Shared by sequence, GIP and fused similarities.
struct SimilarityMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> ids;

  std::size_t size() const { return ids.size(); }

  static SimilarityMatrix identity(std::vector<std::string> ids);
};

// Optimal global alignment score, O(|a||b|) time, two-row memory.
long long nw_score(std::string_view a, std::string_view b,
                   const ScoringScheme& s = {});

// Pairwise alignment scores normalized by the geometric mean of the
// self-scores, clamped into [0,1]. Pairs may be computed in parallel; the
// result is independent of the number of jobs.
SimilarityMatrix sequence_similarity(const SequenceSet& set,
                                     const ScoringScheme& s = {}, int jobs = 1);

}  // namespace circgcn
