#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "circgcn/common.hpp"
#include "circgcn/graph.hpp"
#include "circgcn/ingest.hpp"

namespace circgcn {

enum class Aggregator { sum, row_norm };

// Weights of the two convolution layers. Layer inputs are one-hot node
// features, so w1 has one row per node; there are no bias terms.
struct ModelParams {
  Eigen::MatrixXd w1;  // n_nodes x hidden_dim
  Eigen::MatrixXd w2;  // hidden_dim x n_disease
};

struct TrainConfig {
  std::size_t hidden_dim = 64;
  double learning_rate = 0.01;
  std::size_t epochs = 100;
  std::uint64_t seed = 42;
  bool self_loops = true;
  Aggregator aggregator = Aggregator::sum;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double positive_weight = 1.0;

  void validate() const;
};

struct AdamState {
  Eigen::MatrixXd m1_w1, m2_w1, m1_w2, m2_w2;
  std::size_t t = 0;

  static AdamState zeros_like(const ModelParams& p);
};

struct TrainHistory {
  std::vector<double> train_loss;
  std::vector<double> val_loss;  // empty when no validation mask was given
};

struct ForwardResult {
  Eigen::MatrixXd h1;    // n_nodes x hidden_dim, post-ReLU
  Eigen::MatrixXd yhat;  // n_nodes x n_disease, sigmoid outputs in (0,1)
};

// Glorot-uniform initialization, reproducible for a given seed.
ModelParams init_params(std::size_t n_nodes, std::size_t hidden_dim,
                        std::size_t n_disease, std::uint64_t seed);

// One aggregation pass: out.row(v) = sum of x.row(u) over u in N(v), plus
// x.row(v) when self-loops are on; row_norm divides by the neighbor count.
// Rows are summed in ascending node order so the reduction is reproducible.
Eigen::MatrixXd aggregate(const Graph& g, const Eigen::MatrixXd& x,
                          const TrainConfig& cfg);

// Same propagation with the transposed operator (needed for gradients when
// row normalization makes the operator asymmetric).
Eigen::MatrixXd aggregate_transpose(const Graph& g, const Eigen::MatrixXd& x,
                                    const TrainConfig& cfg);

ForwardResult forward(const Graph& g, const ModelParams& params,
                      const TrainConfig& cfg);

// Mean binary cross-entropy over the masked circRNA rows against all disease
// columns; label-1 cells are weighted by positive_weight. Outputs are clamped
// away from {0,1} before the logs.
double bce_loss(const Eigen::MatrixXd& yhat, const AssociationMatrix& labels,
                const std::vector<std::size_t>& mask, double positive_weight);

// Analytic gradients of bce_loss(forward(...)) with respect to w1 and w2.
ModelParams backward(const Graph& g, const ModelParams& params,
                     const TrainConfig& cfg, const AssociationMatrix& labels,
                     const std::vector<std::size_t>& mask);

void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state,
               const TrainConfig& cfg);

// Full-batch training loop; per-epoch losses are recorded before the update.
std::pair<ModelParams, TrainHistory> train(const Graph& g,
                                           const AssociationMatrix& labels,
                                           const std::vector<std::size_t>& train_mask,
                                           const std::vector<std::size_t>& val_mask,
                                           const TrainConfig& cfg);

// circRNA-row slice of forward()'s outputs: n_circ x n_disease scores.
Eigen::MatrixXd predict(const Graph& g, const ModelParams& params,
                        const TrainConfig& cfg);

struct Checkpoint {
  ModelParams params;
  std::uint64_t seed = 0;
};

void save_checkpoint(const ModelParams& params, std::uint64_t seed,
                     const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

const char* to_string(Aggregator a);
Aggregator aggregator_from_string(const std::string& s);

}  // namespace circgcn
