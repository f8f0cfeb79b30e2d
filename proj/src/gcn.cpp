#include "circgcn/gcn.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace circgcn {

namespace {

constexpr double kProbClamp = 1e-7;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) {
    throw NumericError(std::string("non-finite values in ") + what);
  }
}

// Everything backward needs from the forward pass.
struct ForwardCache {
  Eigen::MatrixXd z1;    // pre-ReLU layer-1 activations
  Eigen::MatrixXd h1;    // ReLU(z1)
  Eigen::MatrixXd a2;    // aggregated h1
  Eigen::MatrixXd yhat;  // sigmoid(a2 * w2)
};

ForwardCache forward_cache(const Graph& g, const ModelParams& params,
                           const TrainConfig& cfg) {
  cfg.validate();
  if (static_cast<std::size_t>(params.w1.rows()) != g.n_nodes() ||
      params.w1.cols() != params.w2.rows()) {
    throw DataError("forward: parameter shapes do not match the graph");
  }
  check_finite(params.w1, "w1");
  check_finite(params.w2, "w2");

  ForwardCache c;
  // One-hot layer-0 features make the first aggregation Â·I·w1 = Â·w1.
  c.z1 = aggregate(g, params.w1, cfg);
  c.h1 = c.z1.cwiseMax(0.0);
  c.a2 = aggregate(g, c.h1, cfg);
  c.yhat = (c.a2 * params.w2).unaryExpr([](double z) { return sigmoid(z); });
  return c;
}

void check_mask(const std::vector<std::size_t>& mask, std::size_t n_circ,
                const char* what) {
  if (mask.empty()) throw DataError(std::string(what) + ": empty mask");
  for (auto v : mask) {
    if (v >= n_circ) throw DataError(std::string(what) + ": mask index out of range");
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (hidden_dim == 0) throw UsageError("train: hidden_dim must be > 0");
  if (!(learning_rate > 0.0)) throw UsageError("train: learning_rate must be > 0");
  if (!(adam_beta1 > 0.0 && adam_beta1 < 1.0) ||
      !(adam_beta2 > 0.0 && adam_beta2 < 1.0)) {
    throw UsageError("train: adam betas must lie in (0,1)");
  }
  if (!(adam_eps > 0.0)) throw UsageError("train: adam_eps must be > 0");
  if (!(positive_weight > 0.0)) throw UsageError("train: positive_weight must be > 0");
}

AdamState AdamState::zeros_like(const ModelParams& p) {
  AdamState s;
  s.m1_w1 = Eigen::MatrixXd::Zero(p.w1.rows(), p.w1.cols());
  s.m2_w1 = Eigen::MatrixXd::Zero(p.w1.rows(), p.w1.cols());
  s.m1_w2 = Eigen::MatrixXd::Zero(p.w2.rows(), p.w2.cols());
  s.m2_w2 = Eigen::MatrixXd::Zero(p.w2.rows(), p.w2.cols());
  s.t = 0;
  return s;
}

ModelParams init_params(std::size_t n_nodes, std::size_t hidden_dim,
                        std::size_t n_disease, std::uint64_t seed) {
  if (n_nodes == 0 || hidden_dim == 0 || n_disease == 0) {
    throw UsageError("init_params: dimensions must be > 0");
  }
  Rng rng(seed);
  auto glorot = [&](std::size_t fan_in, std::size_t fan_out) {
    double b = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Eigen::MatrixXd m(static_cast<Eigen::Index>(fan_in),
                      static_cast<Eigen::Index>(fan_out));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.uniform(-b, b);
    }
    return m;
  };
  ModelParams p;
  p.w1 = glorot(n_nodes, hidden_dim);
  p.w2 = glorot(hidden_dim, n_disease);
  return p;
}

Eigen::MatrixXd aggregate(const Graph& g, const Eigen::MatrixXd& x,
                          const TrainConfig& cfg) {
  if (static_cast<std::size_t>(x.rows()) != g.n_nodes()) {
    throw DataError("aggregate: row count does not match graph");
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(x.rows(), x.cols());
  for (std::size_t v = 0; v < g.n_nodes(); ++v) {
    auto row = out.row(static_cast<Eigen::Index>(v));
    auto nb = g.neighbors(v);
    std::size_t count = nb.size();
    bool self_pending = cfg.self_loops;
    // Fixed ascending-index reduction, with v merged into its sorted slot.
    for (auto u : nb) {
      if (self_pending && v < u) {
        row += x.row(static_cast<Eigen::Index>(v));
        self_pending = false;
      }
      row += x.row(static_cast<Eigen::Index>(u));
    }
    if (self_pending) row += x.row(static_cast<Eigen::Index>(v));
    if (cfg.self_loops) ++count;
    if (cfg.aggregator == Aggregator::row_norm && count > 0) {
      row /= static_cast<double>(count);
    }
  }
  return out;
}

Eigen::MatrixXd aggregate_transpose(const Graph& g, const Eigen::MatrixXd& x,
                                    const TrainConfig& cfg) {
  if (cfg.aggregator == Aggregator::sum) return aggregate(g, x, cfg);  // symmetric
  if (static_cast<std::size_t>(x.rows()) != g.n_nodes()) {
    throw DataError("aggregate_transpose: row count does not match graph");
  }
  // Row-normalized operator: entry (v,u) is 1/deg_hat(u) when u reaches v, so
  // the transpose gathers neighbors scaled by the *source* normalization.
  std::vector<double> inv_deg(g.n_nodes(), 0.0);
  for (std::size_t u = 0; u < g.n_nodes(); ++u) {
    std::size_t d = g.degree(u) + (cfg.self_loops ? 1 : 0);
    if (d > 0) inv_deg[u] = 1.0 / static_cast<double>(d);
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(x.rows(), x.cols());
  for (std::size_t v = 0; v < g.n_nodes(); ++v) {
    auto row = out.row(static_cast<Eigen::Index>(v));
    bool self_pending = cfg.self_loops;
    for (auto u : g.neighbors(v)) {
      if (self_pending && v < u) {
        row += inv_deg[v] * x.row(static_cast<Eigen::Index>(v));
        self_pending = false;
      }
      row += inv_deg[u] * x.row(static_cast<Eigen::Index>(u));
    }
    if (self_pending) row += inv_deg[v] * x.row(static_cast<Eigen::Index>(v));
  }
  return out;
}

ForwardResult forward(const Graph& g, const ModelParams& params,
                      const TrainConfig& cfg) {
  auto c = forward_cache(g, params, cfg);
  return {std::move(c.h1), std::move(c.yhat)};
}

double bce_loss(const Eigen::MatrixXd& yhat, const AssociationMatrix& labels,
                const std::vector<std::size_t>& mask, double positive_weight) {
  check_mask(mask, labels.n_circ, "bce_loss");
  if (static_cast<std::size_t>(yhat.cols()) != labels.n_disease ||
      static_cast<std::size_t>(yhat.rows()) < labels.n_circ) {
    throw DataError("bce_loss: output dimensions do not match labels");
  }
  double total = 0.0;
  for (auto i : mask) {
    for (std::size_t j = 0; j < labels.n_disease; ++j) {
      double p = yhat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      p = std::clamp(p, kProbClamp, 1.0 - kProbClamp);
      if (labels(i, j)) {
        total -= positive_weight * std::log(p);
      } else {
        total -= std::log(1.0 - p);
      }
    }
  }
  return total / (static_cast<double>(mask.size()) *
                  static_cast<double>(labels.n_disease));
}

ModelParams backward(const Graph& g, const ModelParams& params,
                     const TrainConfig& cfg, const AssociationMatrix& labels,
                     const std::vector<std::size_t>& mask) {
  check_mask(mask, labels.n_circ, "backward");
  if (labels.n_circ != g.n_circ ||
      static_cast<std::size_t>(params.w2.cols()) != labels.n_disease) {
    throw DataError("backward: label dimensions do not match the model");
  }
  auto c = forward_cache(g, params, cfg);

  const double cells = static_cast<double>(mask.size()) *
                       static_cast<double>(labels.n_disease);
  const double w = cfg.positive_weight;

  // dL/dz2, nonzero only on masked circRNA rows. Where the loss clamp is
  // active the loss is flat in z, so the gradient there is zero.
  Eigen::MatrixXd g2 = Eigen::MatrixXd::Zero(c.yhat.rows(), c.yhat.cols());
  for (auto i : mask) {
    for (std::size_t j = 0; j < labels.n_disease; ++j) {
      auto ii = static_cast<Eigen::Index>(i);
      auto jj = static_cast<Eigen::Index>(j);
      double p = c.yhat(ii, jj);
      if (p <= kProbClamp || p >= 1.0 - kProbClamp) continue;
      double y = labels(i, j) ? 1.0 : 0.0;
      g2(ii, jj) = (-w * y * (1.0 - p) + (1.0 - y) * p) / cells;
    }
  }

  ModelParams grads;
  grads.w2 = c.a2.transpose() * g2;
  Eigen::MatrixXd dh1 = aggregate_transpose(g, g2 * params.w2.transpose(), cfg);
  Eigen::MatrixXd dz1 =
      (c.z1.array() > 0.0).select(dh1, Eigen::MatrixXd::Zero(dh1.rows(), dh1.cols()));
  grads.w1 = aggregate_transpose(g, dz1, cfg);
  return grads;
}

void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state,
               const TrainConfig& cfg) {
  if (grads.w1.rows() != params.w1.rows() || grads.w1.cols() != params.w1.cols() ||
      grads.w2.rows() != params.w2.rows() || grads.w2.cols() != params.w2.cols()) {
    throw DataError("adam_step: gradient shapes do not match parameters");
  }
  if (!grads.w1.allFinite() || !grads.w2.allFinite()) {
    throw NumericError("adam_step: non-finite gradient");
  }
  state.t += 1;
  const double b1 = cfg.adam_beta1;
  const double b2 = cfg.adam_beta2;
  const double corr1 = 1.0 - std::pow(b1, static_cast<double>(state.t));
  const double corr2 = 1.0 - std::pow(b2, static_cast<double>(state.t));

  auto update = [&](Eigen::MatrixXd& p, const Eigen::MatrixXd& grad,
                    Eigen::MatrixXd& m1, Eigen::MatrixXd& m2) {
    m1 = b1 * m1 + (1.0 - b1) * grad;
    m2 = b2 * m2 + (1.0 - b2) * grad.cwiseProduct(grad);
    Eigen::ArrayXXd m_hat = m1.array() / corr1;
    Eigen::ArrayXXd v_hat = m2.array() / corr2;
    p.array() -= cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.adam_eps);
  };
  update(params.w1, grads.w1, state.m1_w1, state.m2_w1);
  update(params.w2, grads.w2, state.m1_w2, state.m2_w2);
}

std::pair<ModelParams, TrainHistory> train(const Graph& g,
                                           const AssociationMatrix& labels,
                                           const std::vector<std::size_t>& train_mask,
                                           const std::vector<std::size_t>& val_mask,
                                           const TrainConfig& cfg) {
  cfg.validate();
  check_mask(train_mask, labels.n_circ, "train");
  for (auto v : val_mask) {
    for (auto t : train_mask) {
      if (v == t) throw DataError("train: masks are not disjoint");
    }
  }

  ModelParams params = init_params(g.n_nodes(), cfg.hidden_dim, labels.n_disease,
                                   cfg.seed);
  AdamState state = AdamState::zeros_like(params);
  TrainHistory history;
  history.train_loss.reserve(cfg.epochs);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    auto fwd = forward(g, params, cfg);
    history.train_loss.push_back(
        bce_loss(fwd.yhat, labels, train_mask, cfg.positive_weight));
    if (!val_mask.empty()) {
      history.val_loss.push_back(
          bce_loss(fwd.yhat, labels, val_mask, cfg.positive_weight));
    }
    ModelParams grads = backward(g, params, cfg, labels, train_mask);
    adam_step(params, grads, state, cfg);
  }
  return {std::move(params), std::move(history)};
}

Eigen::MatrixXd predict(const Graph& g, const ModelParams& params,
                        const TrainConfig& cfg) {
  auto fwd = forward(g, params, cfg);
  return fwd.yhat.topRows(static_cast<Eigen::Index>(g.n_circ));
}

void save_checkpoint(const ModelParams& params, std::uint64_t seed,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write checkpoint '" + path + "'");
  out << params.w1.rows() << ' ' << params.w1.cols() << ' ' << params.w2.cols()
      << ' ' << seed << '\n';
  auto dump = [&](const Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (c) out << ' ';
        out << format_double(m(r, c), 17);
      }
      out << '\n';
    }
  };
  dump(params.w1);
  dump(params.w2);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open checkpoint '" + path + "'");
  std::size_t n_nodes = 0, hidden = 0, n_disease = 0;
  std::uint64_t seed = 0;
  if (!(in >> n_nodes >> hidden >> n_disease >> seed)) {
    throw DataError("checkpoint '" + path + "': bad header");
  }
  Checkpoint ck;
  ck.seed = seed;
  ck.params.w1.resize(static_cast<Eigen::Index>(n_nodes),
                      static_cast<Eigen::Index>(hidden));
  ck.params.w2.resize(static_cast<Eigen::Index>(hidden),
                      static_cast<Eigen::Index>(n_disease));
  auto slurp = [&](Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (!(in >> m(r, c))) {
          throw DataError("checkpoint '" + path + "': truncated weights");
        }
      }
    }
  };
  slurp(ck.params.w1);
  slurp(ck.params.w2);
  return ck;
}

const char* to_string(Aggregator a) {
  return a == Aggregator::sum ? "sum" : "row_norm";
}

Aggregator aggregator_from_string(const std::string& s) {
  if (s == "sum") return Aggregator::sum;
  if (s == "row_norm") return Aggregator::row_norm;
  throw UsageError("unknown aggregator '" + s + "'");
}

}  // namespace circgcn
