#include "circgcn/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

namespace circgcn {

void EvalConfig::validate() const {
  if (k < 2) throw UsageError("eval: k must be >= 2");
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw UsageError("eval: threshold must be in (0,1)");
  }
  if (jobs < 1) throw UsageError("eval: jobs must be >= 1");
  graph.validate();
  gip.validate();
  scoring.validate();
  train.validate();
}

FoldSplit kfold_split(std::size_t n_circ, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw UsageError("kfold_split: k must be >= 2");
  if (k > n_circ) throw UsageError("kfold_split: k exceeds the number of circRNAs");
  std::vector<std::size_t> order(n_circ);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);

  FoldSplit split;
  split.k = k;
  split.seed = seed;
  split.folds.assign(k, {});
  for (std::size_t i = 0; i < n_circ; ++i) split.folds[i % k].push_back(order[i]);
  return split;
}

Confusion confusion(const Eigen::MatrixXd& scores, const AssociationMatrix& labels,
                    const std::vector<std::pair<std::size_t, std::size_t>>& cells,
                    double threshold) {
  if (cells.empty()) throw DataError("confusion: empty cell list");
  Confusion c;
  for (auto [i, j] : cells) {
    if (i >= static_cast<std::size_t>(scores.rows()) || j >= labels.n_disease) {
      throw DataError("confusion: cell out of bounds");
    }
    bool pred = scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) >
                threshold;
    bool truth = labels(i, j) != 0;
    if (pred && truth) ++c.tp;
    else if (pred && !truth) ++c.fp;
    else if (!pred && truth) ++c.fn;
    else ++c.tn;
  }
  return c;
}

MetricsRecord metrics_from_counts(std::size_t tp, std::size_t tn, std::size_t fp,
                                  std::size_t fn) {
  if (tp + tn + fp + fn == 0) throw DataError("metrics_from_counts: all counts zero");
  MetricsRecord m;
  m.tp = tp;
  m.tn = tn;
  m.fp = fp;
  m.fn = fn;
  // 0/0 denominators define the metric as 0 so fold averages stay total.
  auto ratio = [&m](std::size_t num, std::size_t den) {
    if (den == 0) {
      ++m.degenerate_metrics;
      return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
  };
  m.accuracy = ratio(tp + tn, tp + tn + fp + fn);
  m.precision = ratio(tp, tp + fp);
  m.recall = ratio(tp, tp + fn);
  m.f1 = ratio(2 * tp, 2 * tp + fp + fn);
  return m;
}

double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) throw DataError("auc: length mismatch");
  const std::size_t n = scores.size();
  std::size_t n_pos = 0;
  for (int l : labels) n_pos += (l != 0);
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) throw DataError("auc: single-class input");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Midranks over tie groups; rank sum of positives gives the U statistic.
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    for (std::size_t t = i; t <= j; ++t) {
      if (labels[order[t]] != 0) rank_sum_pos += midrank;
    }
    i = j + 1;
  }
  double u = rank_sum_pos -
             0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

std::size_t CircSequenceSim::n_present() const {
  std::size_t c = 0;
  for (bool b : has_seq) c += b;
  return c;
}

CircSequenceSim circ_sequence_similarity(const AssociationMatrix& as,
                                         const SequenceSet& seqs,
                                         const ScoringScheme& scoring,
                                         int jobs) {
  CircSequenceSim out;
  out.has_seq.assign(as.n_circ, false);

  SequenceSet present;
  std::vector<std::size_t> present_index;  // assoc index per present sequence
  for (std::size_t i = 0; i < as.n_circ; ++i) {
    auto it = seqs.by_id.find(as.circ_ids[i]);
    if (it == seqs.by_id.end()) continue;
    out.has_seq[i] = true;
    present.add(as.circ_ids[i], seqs.seqs[it->second]);
    present_index.push_back(i);
  }

  out.cs.ids = as.circ_ids;
  out.cs.values = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(as.n_circ),
                                            static_cast<Eigen::Index>(as.n_circ));
  if (present.size() == 0) return out;

  SimilarityMatrix sub = sequence_similarity(present, scoring, jobs);
  for (std::size_t a = 0; a < present_index.size(); ++a) {
    for (std::size_t b = 0; b < present_index.size(); ++b) {
      out.cs.values(static_cast<Eigen::Index>(present_index[a]),
                    static_cast<Eigen::Index>(present_index[b])) =
          sub.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    }
  }
  return out;
}

namespace {

// AS restricted to training rows; held-out rows are zero and never read.
AssociationMatrix mask_rows(const AssociationMatrix& as,
                            const std::vector<std::size_t>& train_rows) {
  auto out = AssociationMatrix::zeros(as.circ_ids, as.disease_ids);
  for (auto i : train_rows) {
    for (std::size_t j = 0; j < as.n_disease; ++j) {
      out.set(i, j, as(i, j));
    }
  }
  return out;
}

MetricsRecord fold_metrics(const Eigen::MatrixXd& scores,
                           const AssociationMatrix& labels,
                           const std::vector<std::size_t>& held_out,
                           double threshold) {
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  std::vector<double> flat_scores;
  std::vector<int> flat_labels;
  cells.reserve(held_out.size() * labels.n_disease);
  for (auto i : held_out) {
    for (std::size_t j = 0; j < labels.n_disease; ++j) {
      cells.emplace_back(i, j);
      flat_scores.push_back(
          scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      flat_labels.push_back(labels(i, j));
    }
  }
  Confusion c = confusion(scores, labels, cells, threshold);
  MetricsRecord m = metrics_from_counts(c.tp, c.tn, c.fp, c.fn);
  bool has_pos = std::count(flat_labels.begin(), flat_labels.end(), 1) > 0;
  bool has_neg = std::count(flat_labels.begin(), flat_labels.end(), 0) > 0;
  if (has_pos && has_neg) {
    m.auc = auc(flat_scores, flat_labels);
  } else {
    ++m.degenerate_metrics;  // AUC stays NaN for this fold
  }
  return m;
}

}  // namespace

FoldResult run_fold(const Dataset& ds, const CircSequenceSim& seq_sim,
                    const FoldSplit& split, std::size_t fold_index,
                    const EvalConfig& cfg) {
  const AssociationMatrix& as = ds.assoc;
  const auto& held_out = split.folds.at(fold_index);

  std::vector<bool> is_held(as.n_circ, false);
  for (auto i : held_out) is_held[i] = true;
  std::vector<std::size_t> train_rows;
  train_rows.reserve(as.n_circ - held_out.size());
  for (std::size_t i = 0; i < as.n_circ; ++i) {
    if (!is_held[i]) train_rows.push_back(i);
  }
  if (train_rows.empty()) throw DataError("run_fold: no training rows left");

  AssociationMatrix as_train = mask_rows(as, train_rows);
  const AssociationMatrix& gip_basis =
      cfg.gip_from == GipFrom::full ? as : as_train;
  SimilarityMatrix cg = circ_gip(gip_basis, cfg.gip);
  SimilarityMatrix dg = disease_gip(gip_basis, cfg.gip);
  SimilarityMatrix fused =
      fuse_circ_similarity(seq_sim.cs, seq_sim.has_seq, cg, cfg.fusion);
  Graph g = build_graph(fused, dg, as_train, cfg.graph);

  TrainConfig tc = cfg.train;
  tc.seed = cfg.seed + fold_index;  // sub-seeds derive from the master seed
  auto [params, history] = train(g, as, train_rows, held_out, tc);

  Eigen::MatrixXd scores = predict(g, params, tc);

  FoldResult result;
  result.held_out = held_out;
  result.metrics = fold_metrics(scores, as, held_out, cfg.threshold);
  result.history = std::move(history);
  result.heldout_scores.resize(static_cast<Eigen::Index>(held_out.size()),
                               static_cast<Eigen::Index>(as.n_disease));
  for (std::size_t r = 0; r < held_out.size(); ++r) {
    result.heldout_scores.row(static_cast<Eigen::Index>(r)) =
        scores.row(static_cast<Eigen::Index>(held_out[r]));
  }
  result.graph = graph_stats(g);
  result.params = std::move(params);
  return result;
}

CvResult cross_validate(const Dataset& ds, const EvalConfig& cfg) {
  cfg.validate();
  const AssociationMatrix& as = ds.assoc;
  if (as.n_circ < cfg.k) {
    throw DataError("cross_validate: fewer circRNAs than folds");
  }
  std::size_t with_assoc = 0;
  for (std::size_t i = 0; i < as.n_circ; ++i) with_assoc += as.row_sum(i) > 0;
  if (with_assoc < cfg.k) {
    throw DataError("cross_validate: fewer associated circRNAs than folds");
  }

  CircSequenceSim seq_sim =
      circ_sequence_similarity(as, ds.seqs, cfg.scoring, cfg.jobs);
  FoldSplit split = kfold_split(as.n_circ, cfg.k, cfg.seed);

  CvResult cv;
  cv.folds.resize(cfg.k);
  auto run_range = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t f = lo; f < hi; ++f) {
      cv.folds[f] = run_fold(ds, seq_sim, split, f, cfg);
    }
  };
  if (cfg.jobs <= 1) {
    run_range(0, cfg.k);
  } else {
    // Folds are independent; each worker writes only its own slots.
    std::size_t n_workers = std::min<std::size_t>(cfg.jobs, cfg.k);
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(n_workers);
    std::size_t chunk = (cfg.k + n_workers - 1) / n_workers;
    for (std::size_t w = 0; w < n_workers; ++w) {
      std::size_t lo = std::min(cfg.k, w * chunk);
      std::size_t hi = std::min(cfg.k, lo + chunk);
      if (lo >= hi) continue;
      workers.emplace_back([&, w, lo, hi]() {
        try {
          run_range(lo, hi);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : workers) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  // Arithmetic mean and population standard deviation over folds.
  auto fold_value = [&](std::size_t f, int which) -> double {
    const MetricsRecord& m = cv.folds[f].metrics;
    switch (which) {
      case 0: return m.accuracy;
      case 1: return m.precision;
      case 2: return m.recall;
      case 3: return m.f1;
      default: return m.auc;
    }
  };
  auto assign = [](MetricsRecord& m, int which, double v) {
    switch (which) {
      case 0: m.accuracy = v; break;
      case 1: m.precision = v; break;
      case 2: m.recall = v; break;
      case 3: m.f1 = v; break;
      default: m.auc = v; break;
    }
  };
  for (int which = 0; which < 5; ++which) {
    std::vector<double> vals;
    for (std::size_t f = 0; f < cfg.k; ++f) {
      double v = fold_value(f, which);
      if (!std::isnan(v)) vals.push_back(v);
    }
    if (vals.empty()) continue;  // AUC undefined in every fold
    double mean = std::accumulate(vals.begin(), vals.end(), 0.0) /
                  static_cast<double>(vals.size());
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var /= static_cast<double>(vals.size());
    assign(cv.average, which, mean);
    assign(cv.stddev, which, std::sqrt(var));
  }
  for (const auto& fr : cv.folds) {
    cv.average.tp += fr.metrics.tp;
    cv.average.tn += fr.metrics.tn;
    cv.average.fp += fr.metrics.fp;
    cv.average.fn += fr.metrics.fn;
    if (fr.metrics.degenerate_metrics > 0) ++cv.degenerate_folds;
  }
  return cv;
}

TopDiseaseSelection select_top_diseases(const AssociationMatrix& as, std::size_t n) {
  if (n < 1) throw UsageError("select_top_diseases: n must be >= 1");
  if (n > as.n_disease) throw UsageError("select_top_diseases: n exceeds disease count");

  std::vector<std::size_t> order(as.n_disease);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return as.col_sum(a) > as.col_sum(b);  // ties keep first-appearance order
  });
  std::vector<std::size_t> kept(order.begin(), order.begin() + n);
  std::sort(kept.begin(), kept.end());  // preserve original column order

  TopDiseaseSelection sel;
  sel.kept_diseases = kept;
  for (std::size_t i = 0; i < as.n_circ; ++i) {
    std::size_t row_total = 0;
    for (auto j : kept) row_total += as(i, j);
    if (row_total > 0) sel.kept_circ.push_back(i);
  }
  if (sel.kept_circ.empty()) {
    throw DataError("select_top_diseases: no circRNAs left after restriction");
  }

  std::vector<std::string> circ_ids, disease_ids;
  for (auto i : sel.kept_circ) circ_ids.push_back(as.circ_ids[i]);
  for (auto j : kept) disease_ids.push_back(as.disease_ids[j]);
  sel.assoc = AssociationMatrix::zeros(std::move(circ_ids), std::move(disease_ids));
  for (std::size_t r = 0; r < sel.kept_circ.size(); ++r) {
    for (std::size_t c = 0; c < kept.size(); ++c) {
      sel.assoc.set(r, c, as(sel.kept_circ[r], kept[c]));
    }
  }
  return sel;
}

std::vector<DiseaseMetrics> per_disease_metrics(
    const CvResult& cv, const AssociationMatrix& labels,
    const std::vector<std::size_t>& disease_indices, double threshold) {
  std::vector<DiseaseMetrics> out;
  for (auto d : disease_indices) {
    if (d >= labels.n_disease) throw DataError("per_disease_metrics: bad disease index");
    DiseaseMetrics dm;
    dm.disease = labels.disease_ids[d];
    double acc = 0, prec = 0, rec = 0, f1 = 0;
    double auc_sum = 0;
    std::size_t auc_folds = 0;
    for (const auto& fold : cv.folds) {
      std::vector<double> s;
      std::vector<int> y;
      for (std::size_t r = 0; r < fold.held_out.size(); ++r) {
        std::size_t i = fold.held_out[r];
        s.push_back(fold.heldout_scores(static_cast<Eigen::Index>(r),
                                        static_cast<Eigen::Index>(d)));
        y.push_back(labels(i, d));
      }
      Confusion c{};
      for (std::size_t r = 0; r < s.size(); ++r) {
        bool pred = s[r] > threshold;
        bool truth = y[r] != 0;
        if (pred && truth) ++c.tp;
        else if (pred && !truth) ++c.fp;
        else if (!pred && truth) ++c.fn;
        else ++c.tn;
      }
      MetricsRecord m = metrics_from_counts(c.tp, c.tn, c.fp, c.fn);
      acc += m.accuracy;
      prec += m.precision;
      rec += m.recall;
      f1 += m.f1;
      bool has_pos = std::count(y.begin(), y.end(), 1) > 0;
      bool has_neg = std::count(y.begin(), y.end(), 0) > 0;
      if (has_pos && has_neg) {
        auc_sum += auc(s, y);
        ++auc_folds;
      }
      dm.avg.tp += c.tp;
      dm.avg.tn += c.tn;
      dm.avg.fp += c.fp;
      dm.avg.fn += c.fn;
    }
    const double kf = static_cast<double>(cv.folds.size());
    dm.avg.accuracy = acc / kf;
    dm.avg.precision = prec / kf;
    dm.avg.recall = rec / kf;
    dm.avg.f1 = f1 / kf;
    if (auc_folds > 0) {
      dm.avg.auc = auc_sum / static_cast<double>(auc_folds);
      dm.auc_defined = true;
    }
    out.push_back(std::move(dm));
  }
  return out;
}

std::vector<SweepRow> gamma_sweep(const Dataset& ds, const EvalConfig& cfg,
                                  const std::vector<double>& gammas) {
  if (gammas.empty()) throw UsageError("gamma_sweep: empty gamma list");
  std::vector<SweepRow> rows;
  for (double gamma : gammas) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
      throw UsageError("gamma_sweep: gamma values must be in [0,1]");
    }
    EvalConfig run_cfg = cfg;
    run_cfg.graph.gamma = gamma;
    CvResult cv = cross_validate(ds, run_cfg);
    rows.push_back({gamma, cv.average.accuracy, cv.average.f1});
  }
  return rows;
}

std::vector<RankedPrediction> rank_predictions(const Eigen::MatrixXd& scores,
                                               const AssociationMatrix& as_known,
                                               std::size_t disease_index,
                                               std::size_t top_k,
                                               bool exclude_known) {
  if (disease_index >= as_known.n_disease) {
    throw DataError("rank_predictions: disease index out of range");
  }
  if (top_k < 1) throw UsageError("rank_predictions: top_k must be >= 1");
  if (static_cast<std::size_t>(scores.rows()) != as_known.n_circ) {
    throw DataError("rank_predictions: score rows do not match circRNA count");
  }

  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < as_known.n_circ; ++i) {
    if (exclude_known && as_known(i, disease_index)) continue;
    candidates.push_back(i);
  }
  auto score_of = [&](std::size_t i) {
    return scores(static_cast<Eigen::Index>(i),
                  static_cast<Eigen::Index>(disease_index));
  };
  std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
    double sa = score_of(a), sb = score_of(b);
    if (sa != sb) return sa > sb;
    return a < b;
  });
  if (candidates.size() > top_k) candidates.resize(top_k);

  std::vector<RankedPrediction> out;
  out.reserve(candidates.size());
  for (std::size_t r = 0; r < candidates.size(); ++r) {
    std::size_t i = candidates[r];
    out.push_back({r + 1, i, as_known.circ_ids[i], score_of(i),
                   as_known(i, disease_index) != 0});
  }
  return out;
}

const char* to_string(GipFrom g) {
  return g == GipFrom::train_only ? "train_only" : "full";
}

GipFrom gip_from_string(const std::string& s) {
  if (s == "train_only") return GipFrom::train_only;
  if (s == "full") return GipFrom::full;
  throw UsageError("unknown gip_from value '" + s + "'");
}

}  // namespace circgcn
