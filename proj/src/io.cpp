#include "circgcn/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace circgcn {

std::string format_double(double v, int significant_digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  return out;
}

std::string metric_or_na(double v) {
  return std::isnan(v) ? "NA" : format_double(v, 6);
}

}  // namespace

void write_similarity_csv(const SimilarityMatrix& m, const std::string& path) {
  auto out = open_out(path);
  out << "id";
  for (const auto& id : m.ids) out << ',' << id;
  out << '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    out << m.ids[i];
    for (std::size_t j = 0; j < m.size(); ++j) {
      out << ','
          << format_double(m.values(static_cast<Eigen::Index>(i),
                                    static_cast<Eigen::Index>(j)),
                           9);
    }
    out << '\n';
  }
}

void write_metrics_csv(const CvResult& cv, const std::string& path) {
  auto out = open_out(path);
  out << "fold,accuracy,precision,recall,f1,auc\n";
  auto row = [&](const std::string& label, const MetricsRecord& m) {
    out << label << ',' << metric_or_na(m.accuracy) << ',' << metric_or_na(m.precision)
        << ',' << metric_or_na(m.recall) << ',' << metric_or_na(m.f1) << ','
        << metric_or_na(m.auc) << '\n';
  };
  for (std::size_t f = 0; f < cv.folds.size(); ++f) {
    row(std::to_string(f + 1), cv.folds[f].metrics);
  }
  row("average", cv.average);
  row("stddev", cv.stddev);
}

void write_history_csv(const TrainHistory& history, const std::string& path) {
  auto out = open_out(path);
  bool with_val = !history.val_loss.empty();
  out << (with_val ? "epoch,train_loss,val_loss\n" : "epoch,train_loss\n");
  for (std::size_t e = 0; e < history.train_loss.size(); ++e) {
    out << e << ',' << format_double(history.train_loss[e], 9);
    if (with_val) out << ',' << format_double(history.val_loss[e], 9);
    out << '\n';
  }
}

void write_per_disease_csv(const std::vector<DiseaseMetrics>& rows,
                           const std::string& path) {
  auto out = open_out(path);
  out << "disease,accuracy,precision,recall,f1,auc\n";
  for (const auto& r : rows) {
    out << r.disease << ',' << metric_or_na(r.avg.accuracy) << ','
        << metric_or_na(r.avg.precision) << ',' << metric_or_na(r.avg.recall) << ','
        << metric_or_na(r.avg.f1) << ','
        << (r.auc_defined ? format_double(r.avg.auc, 6) : "NA") << '\n';
  }
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  auto out = open_out(path);
  out << "gamma,accuracy,f1\n";
  for (const auto& r : rows) {
    out << format_double(r.gamma, 9) << ',' << format_double(r.accuracy, 6) << ','
        << format_double(r.f1, 6) << '\n';
  }
}

void write_ranking_csv(const std::vector<RankedPrediction>& rows,
                       const std::string& path) {
  auto out = open_out(path);
  out << "rank,circRNA,score,known\n";
  for (const auto& r : rows) {
    out << r.rank << ',' << r.circ_id << ',' << format_double(r.score, 9) << ','
        << (r.known ? 1 : 0) << '\n';
  }
}

void write_edge_list_csv(const Graph& g, const std::vector<std::string>& circ_ids,
                         const std::vector<std::string>& disease_ids,
                         const std::string& path) {
  if (circ_ids.size() != g.n_circ || disease_ids.size() != g.n_disease) {
    throw DataError("write_edge_list_csv: identifier lists do not match graph");
  }
  auto name = [&](std::size_t v) -> const std::string& {
    return v < g.n_circ ? circ_ids[v] : disease_ids[v - g.n_circ];
  };
  auto out = open_out(path);
  out << "src_id,dst_id,kind\n";
  for (std::size_t v = 0; v < g.n_nodes(); ++v) {
    for (auto u : g.neighbors(v)) {
      if (u <= v) continue;
      const char* kind;
      if (g.kind(v) == NodeKind::circ && g.kind(u) == NodeKind::circ) kind = "cc";
      else if (g.kind(v) == NodeKind::disease && g.kind(u) == NodeKind::disease) kind = "dd";
      else kind = "cd";
      out << name(v) << ',' << name(u) << ',' << kind << '\n';
    }
  }
}

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace circgcn
