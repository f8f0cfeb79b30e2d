#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "circgcn/alignment.hpp"
#include "circgcn/cli.hpp"
#include "circgcn/eval.hpp"
#include "circgcn/gcn.hpp"
#include "circgcn/graph.hpp"
#include "circgcn/ingest.hpp"
#include "circgcn/similarity.hpp"

namespace py = pybind11;
using namespace circgcn;

namespace {

Eigen::MatrixXd assoc_to_dense(const AssociationMatrix& as) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(as.n_circ),
                    static_cast<Eigen::Index>(as.n_disease));
  for (std::size_t i = 0; i < as.n_circ; ++i) {
    for (std::size_t j = 0; j < as.n_disease; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = as(i, j);
    }
  }
  return m;
}

AssociationMatrix assoc_from_dense(const Eigen::MatrixXd& m,
                                   std::vector<std::string> circ_ids,
                                   std::vector<std::string> disease_ids) {
  if (static_cast<std::size_t>(m.rows()) != circ_ids.size() ||
      static_cast<std::size_t>(m.cols()) != disease_ids.size()) {
    throw DataError("association matrix shape does not match identifier lists");
  }
  auto as = AssociationMatrix::zeros(std::move(circ_ids), std::move(disease_ids));
  for (std::size_t i = 0; i < as.n_circ; ++i) {
    for (std::size_t j = 0; j < as.n_disease; ++j) {
      double v = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (v != 0.0 && v != 1.0) throw DataError("association entries must be 0/1");
      as.set(i, j, v != 0.0);
    }
  }
  return as;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "circRNA-disease association prediction: similarity fusion, "
            "thresholded graph construction and a two-layer message-passing GCN";

  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::class_<SequenceSet>(m, "SequenceSet")
      .def(py::init<>())
      .def_readonly("ids", &SequenceSet::ids)
      .def_readonly("seqs", &SequenceSet::seqs)
      .def("add", &SequenceSet::add, py::arg("id"), py::arg("seq"))
      .def("__len__", &SequenceSet::size);

  py::class_<AssociationMatrix>(m, "AssociationMatrix")
      .def_readonly("n_circ", &AssociationMatrix::n_circ)
      .def_readonly("n_disease", &AssociationMatrix::n_disease)
      .def_readonly("circ_ids", &AssociationMatrix::circ_ids)
      .def_readonly("disease_ids", &AssociationMatrix::disease_ids)
      .def("to_dense", &assoc_to_dense)
      .def_static("from_dense", &assoc_from_dense, py::arg("matrix"),
                  py::arg("circ_ids"), py::arg("disease_ids"));

  py::class_<SyntheticSpec>(m, "SyntheticSpec")
      .def(py::init<>())
      .def_readwrite("n_circ", &SyntheticSpec::n_circ)
      .def_readwrite("n_disease", &SyntheticSpec::n_disease)
      .def_readwrite("n_blocks", &SyntheticSpec::n_blocks)
      .def_readwrite("intra_block_assoc_prob", &SyntheticSpec::intra_block_assoc_prob)
      .def_readwrite("noise_prob", &SyntheticSpec::noise_prob)
      .def_readwrite("seq_len", &SyntheticSpec::seq_len)
      .def_readwrite("mutation_rate", &SyntheticSpec::mutation_rate)
      .def_readwrite("seed", &SyntheticSpec::seed);

  py::class_<ScoringScheme>(m, "ScoringScheme")
      .def(py::init<>())
      .def(py::init([](int match, int mismatch, int gap) {
             return ScoringScheme{match, mismatch, gap};
           }),
           py::arg("match"), py::arg("mismatch"), py::arg("gap"))
      .def_readwrite("match", &ScoringScheme::match)
      .def_readwrite("mismatch", &ScoringScheme::mismatch)
      .def_readwrite("gap", &ScoringScheme::gap);

  py::class_<SimilarityMatrix>(m, "SimilarityMatrix")
      .def_readonly("ids", &SimilarityMatrix::ids)
      .def_readonly("values", &SimilarityMatrix::values)
      .def("__len__", &SimilarityMatrix::size);

  py::class_<GipConfig>(m, "GipConfig")
      .def(py::init<>())
      .def_readwrite("alpha_hat_c", &GipConfig::alpha_hat_c)
      .def_readwrite("alpha_hat_d", &GipConfig::alpha_hat_d);

  py::enum_<FusionPolicy>(m, "FusionPolicy")
      .value("average", FusionPolicy::average)
      .value("sequence_preferred", FusionPolicy::sequence_preferred)
      .value("gip_only", FusionPolicy::gip_only);

  py::class_<GraphConfig>(m, "GraphConfig")
      .def(py::init<>())
      .def_readwrite("gamma", &GraphConfig::gamma)
      .def_readwrite("include_disease_edges", &GraphConfig::include_disease_edges)
      .def_readwrite("include_assoc_edges", &GraphConfig::include_assoc_edges);

  py::class_<Graph>(m, "Graph")
      .def_readonly("n_circ", &Graph::n_circ)
      .def_readonly("n_disease", &Graph::n_disease)
      .def_property_readonly("n_nodes", &Graph::n_nodes)
      .def_property_readonly("n_edges", &Graph::n_edges)
      .def("degree", &Graph::degree)
      .def("has_edge", &Graph::has_edge)
      .def("neighbors", [](const Graph& g, std::size_t v) {
        auto nb = g.neighbors(v);
        return std::vector<std::uint32_t>(nb.begin(), nb.end());
      });

  py::class_<GraphStats>(m, "GraphStats")
      .def_readonly("cc_edges", &GraphStats::cc_edges)
      .def_readonly("dd_edges", &GraphStats::dd_edges)
      .def_readonly("cd_edges", &GraphStats::cd_edges)
      .def_readonly("isolated_nodes", &GraphStats::isolated_nodes)
      .def_readonly("degree_histogram", &GraphStats::degree_histogram);

  py::enum_<Aggregator>(m, "Aggregator")
      .value("sum", Aggregator::sum)
      .value("row_norm", Aggregator::row_norm);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("hidden_dim", &TrainConfig::hidden_dim)
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("self_loops", &TrainConfig::self_loops)
      .def_readwrite("aggregator", &TrainConfig::aggregator)
      .def_readwrite("adam_beta1", &TrainConfig::adam_beta1)
      .def_readwrite("adam_beta2", &TrainConfig::adam_beta2)
      .def_readwrite("adam_eps", &TrainConfig::adam_eps)
      .def_readwrite("positive_weight", &TrainConfig::positive_weight);

  py::class_<ModelParams>(m, "ModelParams")
      .def_readwrite("w1", &ModelParams::w1)
      .def_readwrite("w2", &ModelParams::w2);

  py::class_<TrainHistory>(m, "TrainHistory")
      .def_readonly("train_loss", &TrainHistory::train_loss)
      .def_readonly("val_loss", &TrainHistory::val_loss);

  py::enum_<GipFrom>(m, "GipFrom")
      .value("train_only", GipFrom::train_only)
      .value("full", GipFrom::full);

  py::class_<EvalConfig>(m, "EvalConfig")
      .def(py::init<>())
      .def_readwrite("k", &EvalConfig::k)
      .def_readwrite("threshold", &EvalConfig::threshold)
      .def_readwrite("n_diseases", &EvalConfig::n_diseases)
      .def_readwrite("gip_from", &EvalConfig::gip_from)
      .def_readwrite("graph", &EvalConfig::graph)
      .def_readwrite("gip", &EvalConfig::gip)
      .def_readwrite("fusion", &EvalConfig::fusion)
      .def_readwrite("scoring", &EvalConfig::scoring)
      .def_readwrite("train", &EvalConfig::train)
      .def_readwrite("seed", &EvalConfig::seed)
      .def_readwrite("jobs", &EvalConfig::jobs);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<>())
      .def_readwrite("assoc", &Dataset::assoc)
      .def_readwrite("seqs", &Dataset::seqs);

  py::class_<MetricsRecord>(m, "MetricsRecord")
      .def_readonly("accuracy", &MetricsRecord::accuracy)
      .def_readonly("precision", &MetricsRecord::precision)
      .def_readonly("recall", &MetricsRecord::recall)
      .def_readonly("f1", &MetricsRecord::f1)
      .def_readonly("auc", &MetricsRecord::auc)
      .def_readonly("tp", &MetricsRecord::tp)
      .def_readonly("tn", &MetricsRecord::tn)
      .def_readonly("fp", &MetricsRecord::fp)
      .def_readonly("fn", &MetricsRecord::fn);

  py::class_<FoldResult>(m, "FoldResult")
      .def_readonly("held_out", &FoldResult::held_out)
      .def_readonly("metrics", &FoldResult::metrics)
      .def_readonly("history", &FoldResult::history)
      .def_readonly("heldout_scores", &FoldResult::heldout_scores);

  py::class_<CvResult>(m, "CvResult")
      .def_readonly("folds", &CvResult::folds)
      .def_readonly("average", &CvResult::average)
      .def_readonly("stddev", &CvResult::stddev)
      .def_readonly("degenerate_folds", &CvResult::degenerate_folds);

  m.def("parse_fasta", &parse_fasta, py::arg("path"));
  m.def("parse_associations", &parse_associations, py::arg("path"));
  m.def("synth_dataset", &synth_dataset, py::arg("spec"));
  m.def("nw_score",
        [](const std::string& a, const std::string& b, const ScoringScheme& s) {
          return nw_score(a, b, s);
        },
        py::arg("a"), py::arg("b"), py::arg("scoring") = ScoringScheme{});
  m.def("sequence_similarity", &sequence_similarity, py::arg("seqs"),
        py::arg("scoring") = ScoringScheme{}, py::arg("jobs") = 1);
  m.def("circ_gip", &circ_gip, py::arg("assoc"), py::arg("config") = GipConfig{});
  m.def("disease_gip", &disease_gip, py::arg("assoc"), py::arg("config") = GipConfig{});
  m.def("fuse_circ_similarity", &fuse_circ_similarity, py::arg("cs"),
        py::arg("has_seq"), py::arg("cg"), py::arg("policy"));
  m.def("build_graph", &build_graph, py::arg("fused"), py::arg("dg"),
        py::arg("as_train"), py::arg("config") = GraphConfig{});
  m.def("graph_stats", &graph_stats, py::arg("graph"));
  m.def("init_params", &init_params, py::arg("n_nodes"), py::arg("hidden_dim"),
        py::arg("n_disease"), py::arg("seed"));
  m.def("train",
        [](const Graph& g, const AssociationMatrix& labels,
           const std::vector<std::size_t>& train_mask,
           const std::vector<std::size_t>& val_mask, const TrainConfig& cfg) {
          return train(g, labels, train_mask, val_mask, cfg);
        },
        py::arg("graph"), py::arg("labels"), py::arg("train_mask"),
        py::arg("val_mask") = std::vector<std::size_t>{},
        py::arg("config") = TrainConfig{});
  m.def("predict", &predict, py::arg("graph"), py::arg("params"), py::arg("config"));
  m.def("auc", &auc, py::arg("scores"), py::arg("labels"));
  m.def("kfold_split",
        [](std::size_t n, std::size_t k, std::uint64_t seed) {
          return kfold_split(n, k, seed).folds;
        },
        py::arg("n_circ"), py::arg("k"), py::arg("seed"));
  m.def("cross_validate", &cross_validate, py::arg("dataset"), py::arg("config"));
  m.def("rank_predictions",
        [](const Eigen::MatrixXd& scores, const AssociationMatrix& known,
           std::size_t disease_index, std::size_t top_k, bool exclude_known) {
          std::vector<std::tuple<std::size_t, std::string, double, bool>> out;
          for (const auto& r :
               rank_predictions(scores, known, disease_index, top_k, exclude_known)) {
            out.emplace_back(r.rank, r.circ_id, r.score, r.known);
          }
          return out;
        },
        py::arg("scores"), py::arg("known"), py::arg("disease_index"),
        py::arg("top_k"), py::arg("exclude_known") = false);
  m.def("run_cli",
        [](const std::vector<std::string>& args) { return run_cli(args); },
        py::arg("args"), "run a CLI subcommand in-process; returns the exit code");

#ifdef CIRCGCN_VERSION
  m.attr("__version__") = CIRCGCN_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
