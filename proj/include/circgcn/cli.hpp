#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "circgcn/eval.hpp"
#include "circgcn/ingest.hpp"

namespace circgcn {

// Fully-resolved run configuration shared by the CLI subcommands. Enum-like
// fields are kept as strings here (one validation path for flags and config
// files); to_eval_config() converts and validates.
struct RunConfig {
  std::string assoc_path;
  std::string fasta_path;
  std::string out_dir;
  int jobs = 1;

  double alpha_hat_c = 1.0;
  double alpha_hat_d = 1.0;
  std::string fusion = "average";
  int match = 1;
  int mismatch = -1;
  int gap = -1;

  double gamma = 0.5;
  bool include_disease_edges = true;
  bool include_assoc_edges = true;

  std::size_t hidden_dim = 64;
  double learning_rate = 0.01;
  std::size_t epochs = 100;
  std::uint64_t seed = 42;
  bool self_loops = true;
  std::string aggregator = "sum";
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double positive_weight = 1.0;

  std::size_t k = 5;
  double threshold = 0.5;
  std::size_t n_diseases = 0;  // 0 = all
  std::string gip_from = "train_only";

  std::vector<double> gammas = {0.01, 0.1, 0.2, 0.5, 0.8, 0.9};

  std::string disease;
  std::size_t top_k = 20;
  bool exclude_known = false;
  std::string checkpoint_in;
  std::string checkpoint_out;

  SyntheticSpec synth;

  EvalConfig to_eval_config() const;
};

// Dataset loading shared by the pipeline commands: associations are
// required, sequences optional. (Sequences absent means the fusion falls
// back to GIP everywhere.)
Dataset load_dataset(const RunConfig& rc);

int cmd_similarity(const RunConfig& rc);
int cmd_cv(const RunConfig& rc);
int cmd_sweep(const RunConfig& rc);
int cmd_rank(const RunConfig& rc);
int cmd_synth(const RunConfig& rc);

// Entry point used by both the binary and the tests. Returns the process
// exit code: 0 ok, 1 usage error, 2 data error, 3 numeric failure.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, const char* const* argv);

}  // namespace circgcn
