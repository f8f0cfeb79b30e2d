#include <doctest.h>

#include <cmath>

#include "circgcn/eval.hpp"
#include "circgcn/gcn.hpp"
#include "test_support.hpp"

using namespace circgcn;
using namespace circgcn::testing;

namespace {

ModelParams quantized_params(Rng& rng, std::size_t n_nodes, std::size_t h,
                             std::size_t d) {
  // Dyadic entries (multiples of 1/256) keep small aggregation sums exact in
  // double precision, which lets equivariance tests assert bitwise equality.
  auto fill = [&](Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        m(r, c) = (static_cast<double>(rng.below(513)) - 256.0) / 256.0;
      }
    }
  };
  ModelParams p;
  p.w1.resize(n_nodes, h);
  p.w2.resize(h, d);
  fill(p.w1);
  fill(p.w2);
  return p;
}

double max_rel_err(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double worst = 0.0;
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      double denom = std::max({std::abs(a(r, c)), std::abs(b(r, c)), 1e-4});
      worst = std::max(worst, std::abs(a(r, c) - b(r, c)) / denom);
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("init_params: deterministic, range-bounded, seed-sensitive") {
  auto a = init_params(10, 4, 3, 7);
  auto b = init_params(10, 4, 3, 7);
  CHECK(a.w1 == b.w1);
  CHECK(a.w2 == b.w2);

  double b1 = std::sqrt(6.0 / (10 + 4));
  double b2 = std::sqrt(6.0 / (4 + 3));
  CHECK(a.w1.cwiseAbs().maxCoeff() <= b1);
  CHECK(a.w2.cwiseAbs().maxCoeff() <= b2);

  auto c = init_params(10, 4, 3, 8);
  CHECK(a.w1 != c.w1);

  CHECK_THROWS_AS(init_params(0, 4, 3, 7), UsageError);
}

TEST_CASE("forward: one self-looped node propagates its own w1 row") {
  Graph g = Graph::from_edges(1, 0, {});
  TrainConfig cfg;
  cfg.self_loops = true;
  cfg.aggregator = Aggregator::sum;
  ModelParams p;
  p.w1 = Eigen::MatrixXd::Ones(1, 3);
  p.w2 = Eigen::MatrixXd::Zero(3, 2);
  auto fwd = forward(g, p, cfg);
  CHECK(fwd.h1 == Eigen::MatrixXd::Ones(1, 3));
  CHECK(fwd.yhat == Eigen::MatrixXd::Constant(1, 2, 0.5));
}

TEST_CASE("forward: empty-edge graph without self-loops outputs 0.5 exactly") {
  Graph g = Graph::from_edges(3, 1, {});
  TrainConfig cfg;
  cfg.self_loops = false;
  Rng rng(2);
  auto p = quantized_params(rng, 4, 3, 2);
  auto fwd = forward(g, p, cfg);
  CHECK(fwd.h1 == Eigen::MatrixXd::Zero(4, 3));
  CHECK(fwd.yhat == Eigen::MatrixXd::Constant(4, 2, 0.5));
}

TEST_CASE("forward: outputs strictly inside (0,1)") {
  Rng rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    Graph g = random_graph(rng, 4 + rng.below(5), 2 + rng.below(3), 0.4);
    auto p = init_params(g.n_nodes(), 4, 3, rep);
    TrainConfig cfg;
    cfg.hidden_dim = 4;
    auto fwd = forward(g, p, cfg);
    CHECK(fwd.yhat.minCoeff() > 0.0);
    CHECK(fwd.yhat.maxCoeff() < 1.0);
  }
}

TEST_CASE("aggregate matches the naive per-node neighbor sum exactly") {
  Rng rng(5);
  for (int rep = 0; rep < 40; ++rep) {
    Graph g = random_graph(rng, 2 + rng.below(8), 1 + rng.below(4), 0.35);
    Eigen::MatrixXd x(g.n_nodes(), 3);
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      for (Eigen::Index c = 0; c < x.cols(); ++c) x(r, c) = rng.uniform(-1, 1);
    }
    for (bool sl : {false, true}) {
      for (auto agg : {Aggregator::sum, Aggregator::row_norm}) {
        TrainConfig cfg;
        cfg.self_loops = sl;
        cfg.aggregator = agg;
        Eigen::MatrixXd got = aggregate(g, x, cfg);
        Eigen::MatrixXd want = naive_aggregate(g, x, cfg);
        CHECK(got == want);
      }
    }
  }
}

TEST_CASE("aggregate_transpose is the transpose operator") {
  // Compare against the dense operator built explicitly.
  Rng rng(6);
  for (int rep = 0; rep < 20; ++rep) {
    Graph g = random_graph(rng, 3 + rng.below(5), 1 + rng.below(4), 0.4);
    std::size_t n = g.n_nodes();
    for (bool sl : {false, true}) {
      for (auto agg : {Aggregator::sum, Aggregator::row_norm}) {
        TrainConfig cfg;
        cfg.self_loops = sl;
        cfg.aggregator = agg;
        Eigen::MatrixXd op = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t v = 0; v < n; ++v) {
          Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, 1);
          e(static_cast<Eigen::Index>(v), 0) = 1.0;
          op.col(static_cast<Eigen::Index>(v)) = aggregate(g, e, cfg);
        }
        Eigen::MatrixXd x(n, 2);
        for (Eigen::Index r = 0; r < x.rows(); ++r) {
          for (Eigen::Index c = 0; c < x.cols(); ++c) x(r, c) = rng.uniform(-1, 1);
        }
        Eigen::MatrixXd got = aggregate_transpose(g, x, cfg);
        Eigen::MatrixXd want = op.transpose() * x;
        CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }
}

TEST_CASE("bce_loss: closed forms") {
  auto labels = AssociationMatrix::zeros({"c0", "c1"}, {"d0", "d1"});
  labels.set(0, 0, 1);
  labels.set(1, 1, 1);
  Eigen::MatrixXd half = Eigen::MatrixXd::Constant(2, 2, 0.5);
  std::vector<std::size_t> mask{0, 1};
  CHECK(bce_loss(half, labels, mask, 1.0) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));

  Eigen::MatrixXd perfect(2, 2);
  perfect << 1, 0, 0, 1;
  CHECK(bce_loss(perfect, labels, mask, 1.0) < 1e-6);

  CHECK_THROWS_AS(bce_loss(half, labels, {}, 1.0), DataError);
}

TEST_CASE("bce_loss: positive_weight scales only label-1 terms") {
  auto labels = AssociationMatrix::zeros({"c0"}, {"d0", "d1"});
  labels.set(0, 0, 1);
  Eigen::MatrixXd yhat(1, 2);
  yhat << 0.7, 0.4;
  std::vector<std::size_t> mask{0};
  double base = bce_loss(yhat, labels, mask, 1.0);
  double doubled = bce_loss(yhat, labels, mask, 2.0);
  // positive cell contributes -log(0.7)/2 once more
  CHECK(doubled - base == doctest::Approx(-std::log(0.7) / 2.0).epsilon(1e-12));
}

TEST_CASE("backward: all-zero adjacency without self-loops gives zero grads") {
  Graph g = Graph::from_edges(2, 1, {});
  TrainConfig cfg;
  cfg.self_loops = false;
  auto labels = AssociationMatrix::zeros({"c0", "c1"}, {"d0"});
  labels.set(0, 0, 1);
  auto p = init_params(3, 4, 1, 1);
  auto grads = backward(g, p, cfg, labels, {0, 1});
  CHECK(grads.w1 == Eigen::MatrixXd::Zero(3, 4));
  CHECK(grads.w2 == Eigen::MatrixXd::Zero(4, 1));
}

TEST_CASE("backward matches central finite differences") {
  Rng rng(8);
  int done = 0;
  for (int rep = 0; rep < 12; ++rep) {
    std::size_t nc = 2 + rng.below(7);
    std::size_t nd = 1 + rng.below(4);
    if (nc + nd > 12) continue;
    Graph g = random_graph(rng, nc, nd, 0.45);
    auto labels = random_assoc(rng, nc, nd, 0.4);
    std::vector<std::size_t> mask;
    for (std::size_t i = 0; i < nc; ++i) {
      if (rng.uniform() < 0.7) mask.push_back(i);
    }
    if (mask.empty()) mask.push_back(0);

    TrainConfig cfg;
    cfg.hidden_dim = 1 + rng.below(4);
    cfg.self_loops = rng.uniform() < 0.5;
    cfg.aggregator = rng.uniform() < 0.5 ? Aggregator::sum : Aggregator::row_norm;
    cfg.positive_weight = rng.uniform() < 0.5 ? 1.0 : 2.5;
    auto p = init_params(g.n_nodes(), cfg.hidden_dim, nd, 1000 + rep);

    auto analytic = backward(g, p, cfg, labels, mask);
    auto fd = fd_gradients(g, p, cfg, labels, mask);
    CHECK(max_rel_err(analytic.w1, fd.w1) < 1e-4);
    CHECK(max_rel_err(analytic.w2, fd.w2) < 1e-4);
    ++done;
  }
  CHECK(done >= 8);
}

TEST_CASE("backward: doubling positive_weight doubles an all-positive gradient") {
  // Single loss cell, label 1: the whole gradient is the positive term.
  Graph g = Graph::from_edges(1, 1, {{0, 1}});
  auto labels = AssociationMatrix::zeros({"c0"}, {"d0"});
  labels.set(0, 0, 1);
  TrainConfig cfg;
  cfg.hidden_dim = 3;
  auto p = init_params(2, 3, 1, 5);
  cfg.positive_weight = 1.0;
  auto g1 = backward(g, p, cfg, labels, {0});
  cfg.positive_weight = 2.0;
  auto g2 = backward(g, p, cfg, labels, {0});
  CHECK((g2.w1 - 2.0 * g1.w1).cwiseAbs().maxCoeff() == 0.0);
  CHECK((g2.w2 - 2.0 * g1.w2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("adam_step: pinned one-step scalar update") {
  ModelParams p;
  p.w1 = Eigen::MatrixXd::Zero(1, 1);
  p.w2 = Eigen::MatrixXd::Zero(1, 1);
  ModelParams grads;
  grads.w1 = Eigen::MatrixXd::Ones(1, 1);
  grads.w2 = Eigen::MatrixXd::Zero(1, 1);
  auto state = AdamState::zeros_like(p);
  TrainConfig cfg;
  cfg.learning_rate = 0.1;
  adam_step(p, grads, state, cfg);
  // bias-corrected m_hat = 1, v_hat = 1 -> update = -lr/(1+eps)
  CHECK(p.w1(0, 0) == doctest::Approx(-0.1).epsilon(1e-6));
  CHECK(p.w2(0, 0) == 0.0);
  CHECK(state.t == 1);
}

TEST_CASE("adam_step: zero gradient leaves params, increments t") {
  auto p = init_params(3, 2, 2, 1);
  ModelParams zero;
  zero.w1 = Eigen::MatrixXd::Zero(3, 2);
  zero.w2 = Eigen::MatrixXd::Zero(2, 2);
  auto state = AdamState::zeros_like(p);
  ModelParams before = p;
  adam_step(p, zero, state, TrainConfig{});
  CHECK(p.w1 == before.w1);
  CHECK(p.w2 == before.w2);
  CHECK(state.t == 1);
}

TEST_CASE("adam_step: deterministic and rejects non-finite gradients") {
  auto make = [] {
    auto p = init_params(2, 2, 1, 3);
    auto s = AdamState::zeros_like(p);
    return std::pair{p, s};
  };
  ModelParams grads;
  grads.w1 = Eigen::MatrixXd::Constant(2, 2, 0.25);
  grads.w2 = Eigen::MatrixXd::Constant(2, 1, -0.5);
  auto [p1, s1] = make();
  auto [p2, s2] = make();
  adam_step(p1, grads, s1, TrainConfig{});
  adam_step(p2, grads, s2, TrainConfig{});
  CHECK(p1.w1 == p2.w1);
  CHECK(p1.w2 == p2.w2);

  grads.w1(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(adam_step(p1, grads, s1, TrainConfig{}), NumericError);
}

TEST_CASE("train: epochs=0 returns the initialization untouched") {
  Graph g = Graph::from_edges(3, 1, {{0, 3}, {1, 2}});
  auto labels = AssociationMatrix::zeros({"c0", "c1", "c2"}, {"d0"});
  labels.set(0, 0, 1);
  TrainConfig cfg;
  cfg.epochs = 0;
  cfg.hidden_dim = 4;
  cfg.seed = 77;
  auto [params, history] = train(g, labels, {0, 1, 2}, {}, cfg);
  auto fresh = init_params(g.n_nodes(), 4, 1, 77);
  CHECK(params.w1 == fresh.w1);
  CHECK(params.w2 == fresh.w2);
  CHECK(history.train_loss.empty());
  CHECK(history.val_loss.empty());
}

TEST_CASE("train: reproducible and loss improves on a planted dataset") {
  SyntheticSpec spec;
  spec.n_circ = 20;
  spec.n_disease = 5;
  spec.n_blocks = 2;
  spec.seed = 13;
  auto [seqs, as] = synth_dataset(spec);

  auto seq_sim = circ_sequence_similarity(as, seqs, ScoringScheme{});
  auto cg = circ_gip(as);
  auto dg = disease_gip(as);
  auto fused = fuse_circ_similarity(seq_sim.cs, seq_sim.has_seq, cg,
                                    FusionPolicy::average);
  Graph g = build_graph(fused, dg, as, GraphConfig{});

  std::vector<std::size_t> all(as.n_circ);
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  TrainConfig cfg;
  cfg.hidden_dim = 16;
  cfg.epochs = 50;
  cfg.seed = 4;

  auto [p1, h1] = train(g, as, all, {}, cfg);
  auto [p2, h2] = train(g, as, all, {}, cfg);
  CHECK(h1.train_loss == h2.train_loss);
  CHECK(p1.w1 == p2.w1);
  REQUIRE(h1.train_loss.size() == 50);
  CHECK(h1.train_loss.back() < h1.train_loss.front());

  // prediction contract: circRNA-row slice of forward
  auto fwd = forward(g, p1, cfg);
  auto scores = predict(g, p1, cfg);
  CHECK(scores.rows() == static_cast<Eigen::Index>(as.n_circ));
  CHECK(scores.cols() == static_cast<Eigen::Index>(as.n_disease));
  CHECK(scores == fwd.yhat.topRows(scores.rows()));

  // planted structure: within-block cells outscore cross-block cells
  double in_sum = 0, out_sum = 0;
  std::size_t in_n = 0, out_n = 0;
  for (std::size_t i = 0; i < as.n_circ; ++i) {
    for (std::size_t j = 0; j < as.n_disease; ++j) {
      bool same = (i * 2 / as.n_circ) == (j * 2 / as.n_disease);
      (same ? in_sum : out_sum) += scores(i, j);
      (same ? in_n : out_n) += 1;
    }
  }
  CHECK(in_sum / in_n > out_sum / out_n);
}

TEST_CASE("train: masks must be disjoint and train mask non-empty") {
  Graph g = Graph::from_edges(3, 1, {{0, 3}});
  auto labels = AssociationMatrix::zeros({"c0", "c1", "c2"}, {"d0"});
  labels.set(0, 0, 1);
  TrainConfig cfg;
  cfg.epochs = 1;
  CHECK_THROWS_AS(train(g, labels, {}, {}, cfg), DataError);
  CHECK_THROWS_AS(train(g, labels, {0, 1}, {1}, cfg), DataError);
}

TEST_CASE("isolated node under sum aggregation: zero hidden, 0.5 output") {
  Graph g = Graph::from_edges(3, 1, {{0, 1}, {0, 3}});  // node 2 isolated
  TrainConfig cfg;
  cfg.self_loops = false;
  auto p = init_params(4, 5, 2, 9);
  auto fwd = forward(g, p, cfg);
  CHECK(fwd.h1.row(2) == Eigen::MatrixXd::Zero(1, 5));
  CHECK(fwd.yhat.row(2) == Eigen::MatrixXd::Constant(1, 2, 0.5));
}

TEST_CASE("permutation equivariance (exact on dyadic weights)") {
  Rng rng(12);
  for (int rep = 0; rep < 5; ++rep) {
    std::size_t n = 10;
    Graph g = random_graph(rng, 6, 4, 0.4);
    auto p = quantized_params(rng, n, 3, 2);

    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    rng.shuffle(perm);

    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t v = 0; v < n; ++v) {
      for (auto u : g.neighbors(v)) {
        if (u > v) edges.emplace_back(perm[v], perm[u]);
      }
    }
    Graph pg = Graph::from_edges(6, 4, edges);

    ModelParams pp = p;
    for (std::size_t v = 0; v < n; ++v) {
      pp.w1.row(static_cast<Eigen::Index>(perm[v])) =
          p.w1.row(static_cast<Eigen::Index>(v));
    }

    for (bool sl : {false, true}) {
      TrainConfig cfg;
      cfg.self_loops = sl;
      auto base = forward(g, p, cfg);
      auto permuted = forward(pg, pp, cfg);
      for (std::size_t v = 0; v < n; ++v) {
        CHECK(permuted.h1.row(static_cast<Eigen::Index>(perm[v])) ==
              base.h1.row(static_cast<Eigen::Index>(v)));
        CHECK(permuted.yhat.row(static_cast<Eigen::Index>(perm[v])) ==
              base.yhat.row(static_cast<Eigen::Index>(v)));
      }
    }
  }
}

TEST_CASE("checkpoint round-trips exactly") {
  auto p = init_params(7, 3, 2, 123);
  TempDir dir("ckpt");
  save_checkpoint(p, 123, dir.str("model.ckpt"));
  auto ck = load_checkpoint(dir.str("model.ckpt"));
  CHECK(ck.seed == 123);
  CHECK(ck.params.w1 == p.w1);
  CHECK(ck.params.w2 == p.w2);

  CHECK_THROWS_AS(load_checkpoint(dir.str("missing.ckpt")), DataError);
}
