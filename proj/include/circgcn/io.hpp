#pragma once

#include <string>
#include <vector>

#include "circgcn/alignment.hpp"
#include "circgcn/eval.hpp"
#include "circgcn/gcn.hpp"
#include "circgcn/graph.hpp"

namespace circgcn {

// `id,<ids...>` header, one labelled row per entry, >= 6 significant digits.
void write_similarity_csv(const SimilarityMatrix& m, const std::string& path);

// `fold,accuracy,precision,recall,f1,auc` with `average` and `stddev` rows.
void write_metrics_csv(const CvResult& cv, const std::string& path);

// `epoch,train_loss[,val_loss]`.
void write_history_csv(const TrainHistory& history, const std::string& path);

// `disease,accuracy,precision,recall,f1,auc`; undefined AUC written as NA.
void write_per_disease_csv(const std::vector<DiseaseMetrics>& rows,
                           const std::string& path);

// `gamma,accuracy,f1`.
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

// `rank,circRNA,score,known`.
void write_ranking_csv(const std::vector<RankedPrediction>& rows,
                       const std::string& path);

// `src_id,dst_id,kind` with kind in {cc,dd,cd}; each undirected edge once,
// smaller node index first.
void write_edge_list_csv(const Graph& g, const std::vector<std::string>& circ_ids,
                         const std::vector<std::string>& disease_ids,
                         const std::string& path);

std::string read_file_bytes(const std::string& path);

}  // namespace circgcn
