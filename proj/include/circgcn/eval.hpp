#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "circgcn/alignment.hpp"
#include "circgcn/common.hpp"
#include "circgcn/gcn.hpp"
#include "circgcn/graph.hpp"
#include "circgcn/similarity.hpp"

namespace circgcn {

// Association matrix plus whatever sequences are available for its circRNAs.
// Sequences are matched by identifier; circRNAs without one are kept and
// covered by the fusion fallback.
struct Dataset {
  AssociationMatrix assoc;
  SequenceSet seqs;
};

struct FoldSplit {
  std::size_t k = 0;
  std::vector<std::vector<std::size_t>> folds;  // disjoint circRNA indices
  std::uint64_t seed = 0;
};

// Shuffle by seed, deal round-robin. Fold sizes differ by at most one.
FoldSplit kfold_split(std::size_t n_circ, std::size_t k, std::uint64_t seed);

struct Confusion {
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
};

// Counts over exactly the listed (row, col) cells; predicted positive iff
// score > threshold (strict, so a score equal to the threshold is negative).
Confusion confusion(const Eigen::MatrixXd& scores, const AssociationMatrix& labels,
                    const std::vector<std::pair<std::size_t, std::size_t>>& cells,
                    double threshold);

struct MetricsRecord {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double auc = std::numeric_limits<double>::quiet_NaN();
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
  // Number of metrics that hit the 0/0 convention and were defined as 0.
  int degenerate_metrics = 0;
};

MetricsRecord metrics_from_counts(std::size_t tp, std::size_t tn, std::size_t fp,
                                  std::size_t fn);

// Mann-Whitney AUC by rank sums with midrank tie handling, O(n log n).
// Throws on single-class input.
double auc(const std::vector<double>& scores, const std::vector<int>& labels);

enum class GipFrom { train_only, full };

struct EvalConfig {
  std::size_t k = 5;
  double threshold = 0.5;
  std::size_t n_diseases = 0;  // 0 = keep all
  GipFrom gip_from = GipFrom::train_only;
  GraphConfig graph;
  GipConfig gip;
  FusionPolicy fusion = FusionPolicy::average;
  ScoringScheme scoring;
  TrainConfig train;
  std::uint64_t seed = 42;  // master seed; folds and per-fold training derive from it
  int jobs = 1;

  void validate() const;
};

// Sequence similarity embedded into the association circRNA index space.
struct CircSequenceSim {
  SimilarityMatrix cs;            // full n_circ x n_circ; entries only where present
  std::vector<bool> has_seq;      // per assoc circRNA index
  std::size_t n_present() const;
};

CircSequenceSim circ_sequence_similarity(const AssociationMatrix& as,
                                         const SequenceSet& seqs,
                                         const ScoringScheme& scoring,
                                         int jobs = 1);

struct FoldResult {
  std::vector<std::size_t> held_out;   // circRNA indices scored in this fold
  MetricsRecord metrics;
  TrainHistory history;
  Eigen::MatrixXd heldout_scores;      // |held_out| x n_disease, row order = held_out
  GraphStats graph;
  ModelParams params;
};

// Trains and scores one fold. AS_train is assembled from training rows only;
// held-out association rows are first read when the returned scores are
// compared against them.
FoldResult run_fold(const Dataset& ds, const CircSequenceSim& seq_sim,
                    const FoldSplit& split, std::size_t fold_index,
                    const EvalConfig& cfg);

struct CvResult {
  std::vector<FoldResult> folds;
  MetricsRecord average;
  MetricsRecord stddev;
  std::size_t degenerate_folds = 0;  // folds where any metric hit 0/0
};

CvResult cross_validate(const Dataset& ds, const EvalConfig& cfg);

struct TopDiseaseSelection {
  AssociationMatrix assoc;
  std::vector<std::size_t> kept_circ;     // original circRNA indices
  std::vector<std::size_t> kept_diseases; // original disease indices
};

// Keeps the n most-associated diseases (ties break toward the earlier
// index), then drops circRNAs left without any association.
TopDiseaseSelection select_top_diseases(const AssociationMatrix& as, std::size_t n);

struct DiseaseMetrics {
  std::string disease;
  MetricsRecord avg;         // metrics averaged over folds
  bool auc_defined = false;  // false when every fold's column was single-class
};

std::vector<DiseaseMetrics> per_disease_metrics(
    const CvResult& cv, const AssociationMatrix& labels,
    const std::vector<std::size_t>& disease_indices, double threshold);

struct SweepRow {
  double gamma = 0.0;
  double accuracy = 0.0;
  double f1 = 0.0;
};

std::vector<SweepRow> gamma_sweep(const Dataset& ds, const EvalConfig& cfg,
                                  const std::vector<double>& gammas);

struct RankedPrediction {
  std::size_t rank = 0;
  std::size_t circ_index = 0;
  std::string circ_id;
  double score = 0.0;
  bool known = false;
};

// Descending by score, ties broken by ascending circRNA index. When
// exclude_known is set, circRNAs already associated with the disease are
// omitted from the ranking.
std::vector<RankedPrediction> rank_predictions(const Eigen::MatrixXd& scores,
                                               const AssociationMatrix& as_known,
                                               std::size_t disease_index,
                                               std::size_t top_k,
                                               bool exclude_known = false);

const char* to_string(GipFrom g);
GipFrom gip_from_string(const std::string& s);

}  // namespace circgcn
