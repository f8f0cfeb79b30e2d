#include "circgcn/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "circgcn/io.hpp"

namespace circgcn {

namespace fs = std::filesystem;

EvalConfig RunConfig::to_eval_config() const {
  EvalConfig cfg;
  cfg.k = k;
  cfg.threshold = threshold;
  cfg.n_diseases = n_diseases;
  cfg.gip_from = gip_from_string(gip_from);
  cfg.graph.gamma = gamma;
  cfg.graph.include_disease_edges = include_disease_edges;
  cfg.graph.include_assoc_edges = include_assoc_edges;
  cfg.gip.alpha_hat_c = alpha_hat_c;
  cfg.gip.alpha_hat_d = alpha_hat_d;
  cfg.fusion = fusion_policy_from_string(fusion);
  cfg.scoring = ScoringScheme{match, mismatch, gap};
  cfg.train.hidden_dim = hidden_dim;
  cfg.train.learning_rate = learning_rate;
  cfg.train.epochs = epochs;
  cfg.train.seed = seed;
  cfg.train.self_loops = self_loops;
  cfg.train.aggregator = aggregator_from_string(aggregator);
  cfg.train.adam_beta1 = adam_beta1;
  cfg.train.adam_beta2 = adam_beta2;
  cfg.train.adam_eps = adam_eps;
  cfg.train.positive_weight = positive_weight;
  cfg.seed = seed;
  cfg.jobs = jobs;
  return cfg;
}

namespace {

// ---- key=value config handling -------------------------------------------
//
// The optional config file and the per-command sidecar share one format:
// plain `key=value` lines, '#' comments. Keys match the kebab-case flag
// names. Flags given on the command line override file values.

struct KeyBinding {
  std::string key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

std::string bool_str(bool b) { return b ? "true" : "false"; }

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw UsageError("config key '" + key + "': expected true/false, got '" + v + "'");
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  std::istringstream ss(v);
  T out;
  ss >> out;
  if (ss.fail() || !ss.eof()) {
    throw UsageError("config key '" + key + "': bad value '" + v + "'");
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(parse_number<double>(key, item));
  }
  return out;
}

std::string double_list_str(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i], 17);
  }
  return out;
}

#define NUM_KEY(name, field, type)                            \
  KeyBinding {                                                \
    name,                                                     \
        [](RunConfig& rc, const std::string& v) {             \
          rc.field = parse_number<type>(name, v);             \
        },                                                    \
        [](const RunConfig& rc) { return std::to_string(rc.field); } \
  }
#define REAL_KEY(name, field)                                 \
  KeyBinding {                                                \
    name,                                                     \
        [](RunConfig& rc, const std::string& v) {             \
          rc.field = parse_number<double>(name, v);           \
        },                                                    \
        [](const RunConfig& rc) { return format_double(rc.field, 17); } \
  }
#define STR_KEY(name, field)                                             \
  KeyBinding {                                                           \
    name, [](RunConfig& rc, const std::string& v) { rc.field = v; },    \
        [](const RunConfig& rc) { return rc.field; }                    \
  }
#define BOOL_KEY(name, field)                                  \
  KeyBinding {                                                 \
    name,                                                      \
        [](RunConfig& rc, const std::string& v) {              \
          rc.field = parse_bool(name, v);                      \
        },                                                     \
        [](const RunConfig& rc) { return bool_str(rc.field); } \
  }

std::vector<KeyBinding> bindings_for(const std::string& command) {
  std::vector<KeyBinding> keys;
  const bool pipeline = command != "synth";
  const bool graph_train = command == "cv" || command == "sweep" || command == "rank";
  const bool eval = command == "cv" || command == "sweep";

  keys.push_back(STR_KEY("out", out_dir));
  if (pipeline) {
    keys.push_back(STR_KEY("assoc", assoc_path));
    keys.push_back(STR_KEY("fasta", fasta_path));
    keys.push_back(NUM_KEY("jobs", jobs, int));
    keys.push_back(REAL_KEY("alpha-hat-c", alpha_hat_c));
    keys.push_back(REAL_KEY("alpha-hat-d", alpha_hat_d));
    keys.push_back(STR_KEY("fusion", fusion));
    keys.push_back(NUM_KEY("match", match, int));
    keys.push_back(NUM_KEY("mismatch", mismatch, int));
    keys.push_back(NUM_KEY("gap", gap, int));
  }
  if (graph_train) {
    keys.push_back(BOOL_KEY("include-disease-edges", include_disease_edges));
    keys.push_back(BOOL_KEY("include-assoc-edges", include_assoc_edges));
    keys.push_back(NUM_KEY("hidden-dim", hidden_dim, std::size_t));
    keys.push_back(REAL_KEY("learning-rate", learning_rate));
    keys.push_back(NUM_KEY("epochs", epochs, std::size_t));
    keys.push_back(NUM_KEY("seed", seed, std::uint64_t));
    keys.push_back(BOOL_KEY("self-loops", self_loops));
    keys.push_back(STR_KEY("aggregator", aggregator));
    keys.push_back(REAL_KEY("adam-beta1", adam_beta1));
    keys.push_back(REAL_KEY("adam-beta2", adam_beta2));
    keys.push_back(REAL_KEY("adam-eps", adam_eps));
    keys.push_back(REAL_KEY("positive-weight", positive_weight));
  }
  if (command == "cv" || command == "rank") {
    keys.push_back(REAL_KEY("gamma", gamma));
  }
  if (eval) {
    keys.push_back(NUM_KEY("k", k, std::size_t));
    keys.push_back(REAL_KEY("threshold", threshold));
    keys.push_back(NUM_KEY("n-diseases", n_diseases, std::size_t));
    keys.push_back(STR_KEY("gip-from", gip_from));
  }
  if (command == "sweep") {
    keys.push_back(KeyBinding{
        "gammas",
        [](RunConfig& rc, const std::string& v) {
          rc.gammas = parse_double_list("gammas", v);
        },
        [](const RunConfig& rc) { return double_list_str(rc.gammas); }});
  }
  if (command == "rank") {
    keys.push_back(STR_KEY("disease", disease));
    keys.push_back(NUM_KEY("top", top_k, std::size_t));
    keys.push_back(BOOL_KEY("exclude-known", exclude_known));
    keys.push_back(STR_KEY("checkpoint", checkpoint_in));
    keys.push_back(STR_KEY("save-checkpoint", checkpoint_out));
  }
  if (command == "synth") {
    keys.push_back(NUM_KEY("n-circ", synth.n_circ, std::size_t));
    keys.push_back(NUM_KEY("n-disease", synth.n_disease, std::size_t));
    keys.push_back(NUM_KEY("n-blocks", synth.n_blocks, std::size_t));
    keys.push_back(REAL_KEY("intra-block-assoc-prob", synth.intra_block_assoc_prob));
    keys.push_back(REAL_KEY("noise-prob", synth.noise_prob));
    keys.push_back(NUM_KEY("seq-len", synth.seq_len, std::size_t));
    keys.push_back(REAL_KEY("mutation-rate", synth.mutation_rate));
    keys.push_back(NUM_KEY("seed", synth.seed, std::uint64_t));
  }
  return keys;
}

#undef NUM_KEY
#undef REAL_KEY
#undef STR_KEY
#undef BOOL_KEY

std::string trim_ws(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void apply_config_file(RunConfig& rc, const std::string& command,
                       const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file '" + path + "'");
  auto keys = bindings_for(command);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim_ws(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    std::string key = trim_ws(t.substr(0, eq));
    std::string value = trim_ws(t.substr(eq + 1));
    auto it = std::find_if(keys.begin(), keys.end(),
                           [&](const KeyBinding& b) { return b.key == key; });
    if (it == keys.end()) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": unknown key '" +
                       key + "' for command " + command);
    }
    it->set(rc, value);
  }
}

void ensure_out_dir(const std::string& dir) {
  if (dir.empty()) throw UsageError("--out directory is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw DataError("cannot create output directory '" + dir + "'");
  }
}

std::string out_path(const RunConfig& rc, const std::string& name) {
  return (fs::path(rc.out_dir) / name).string();
}

// Config echo plus input hashes; loadable again via --config.
void write_sidecar(const RunConfig& rc, const std::string& command) {
  std::ofstream out(out_path(rc, command + ".config"));
  if (!out) throw DataError("cannot write sidecar config");
  out << "# circgcn " << command << " resolved configuration\n";
  for (const std::string& p : {rc.assoc_path, rc.fasta_path}) {
    if (p.empty()) continue;
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(read_file_bytes(p))));
    out << "# input-hash " << p << " " << hex << "\n";
  }
  for (const auto& b : bindings_for(command)) {
    out << b.key << '=' << b.get(rc) << '\n';
  }
}

// ---- shared pipeline steps -------------------------------------------------

struct FullSimilarities {
  CircSequenceSim seq;
  SimilarityMatrix cg;
  SimilarityMatrix dg;
  SimilarityMatrix fused;
};

FullSimilarities full_similarities(const Dataset& ds, const EvalConfig& cfg) {
  FullSimilarities s;
  s.seq = circ_sequence_similarity(ds.assoc, ds.seqs, cfg.scoring, cfg.jobs);
  s.cg = circ_gip(ds.assoc, cfg.gip);
  s.dg = disease_gip(ds.assoc, cfg.gip);
  s.fused = fuse_circ_similarity(s.seq.cs, s.seq.has_seq, s.cg, cfg.fusion);
  return s;
}

std::vector<std::size_t> top_assoc_diseases(const AssociationMatrix& as,
                                            std::size_t n) {
  std::vector<std::size_t> order(as.n_disease);
  for (std::size_t j = 0; j < as.n_disease; ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return as.col_sum(a) > as.col_sum(b);
  });
  order.resize(std::min(n, as.n_disease));
  return order;
}

std::size_t levenshtein(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] != b[j - 1]);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string lower_copy(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::size_t resolve_disease(const AssociationMatrix& as, const std::string& name) {
  for (std::size_t j = 0; j < as.n_disease; ++j) {
    if (as.disease_ids[j] == name) return j;
  }
  std::string wanted = lower_copy(name);
  for (std::size_t j = 0; j < as.n_disease; ++j) {
    if (lower_copy(as.disease_ids[j]) == wanted) return j;
  }
  // Not found: suggest the closest names.
  std::vector<std::size_t> order(as.n_disease);
  for (std::size_t j = 0; j < as.n_disease; ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return levenshtein(wanted, lower_copy(as.disease_ids[a])) <
           levenshtein(wanted, lower_copy(as.disease_ids[b]));
  });
  std::string msg = "unknown disease '" + name + "'; nearest matches:";
  for (std::size_t i = 0; i < std::min<std::size_t>(3, order.size()); ++i) {
    msg += " '" + as.disease_ids[order[i]] + "'";
  }
  throw DataError(msg);
}

}  // namespace

Dataset load_dataset(const RunConfig& rc) {
  if (rc.assoc_path.empty()) throw UsageError("--assoc is required");
  Dataset ds;
  ds.assoc = parse_associations(rc.assoc_path);
  if (!rc.fasta_path.empty()) ds.seqs = parse_fasta(rc.fasta_path);
  return ds;
}

int cmd_similarity(const RunConfig& rc) {
  EvalConfig cfg = rc.to_eval_config();
  cfg.graph.validate();
  ensure_out_dir(rc.out_dir);
  Dataset ds = load_dataset(rc);
  FullSimilarities s = full_similarities(ds, cfg);

  if (s.seq.n_present() > 0) {
    // Export sequence similarity over the circRNAs that actually have one.
    std::vector<std::size_t> present;
    for (std::size_t i = 0; i < s.seq.has_seq.size(); ++i) {
      if (s.seq.has_seq[i]) present.push_back(i);
    }
    SimilarityMatrix cs_sub;
    for (auto i : present) cs_sub.ids.push_back(ds.assoc.circ_ids[i]);
    cs_sub.values.resize(static_cast<Eigen::Index>(present.size()),
                         static_cast<Eigen::Index>(present.size()));
    for (std::size_t a = 0; a < present.size(); ++a) {
      for (std::size_t b = 0; b < present.size(); ++b) {
        cs_sub.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
            s.seq.cs.values(static_cast<Eigen::Index>(present[a]),
                            static_cast<Eigen::Index>(present[b]));
      }
    }
    write_similarity_csv(cs_sub, out_path(rc, "cs.csv"));
  }
  write_similarity_csv(s.cg, out_path(rc, "cg.csv"));
  write_similarity_csv(s.dg, out_path(rc, "dg.csv"));
  write_similarity_csv(s.fused, out_path(rc, "fused.csv"));
  write_sidecar(rc, "similarity");
  std::cout << "similarity matrices written to " << rc.out_dir << " ("
            << ds.assoc.n_circ << " circRNAs, " << ds.assoc.n_disease
            << " diseases, " << s.seq.n_present() << " with sequences)\n";
  return 0;
}

namespace {

Dataset restricted_dataset(Dataset ds, const RunConfig& rc) {
  if (rc.n_diseases > 0 && rc.n_diseases < ds.assoc.n_disease) {
    auto sel = select_top_diseases(ds.assoc, rc.n_diseases);
    ds.assoc = std::move(sel.assoc);
  }
  return ds;
}

}  // namespace

int cmd_cv(const RunConfig& rc) {
  EvalConfig cfg = rc.to_eval_config();
  cfg.validate();
  ensure_out_dir(rc.out_dir);
  Dataset ds = restricted_dataset(load_dataset(rc), rc);

  CvResult cv = cross_validate(ds, cfg);
  write_metrics_csv(cv, out_path(rc, "metrics.csv"));
  for (std::size_t f = 0; f < cv.folds.size(); ++f) {
    write_history_csv(cv.folds[f].history,
                      out_path(rc, "history_fold" + std::to_string(f + 1) + ".csv"));
  }
  auto top5 = top_assoc_diseases(ds.assoc, 5);
  write_per_disease_csv(per_disease_metrics(cv, ds.assoc, top5, cfg.threshold),
                        out_path(rc, "per_disease.csv"));
  write_sidecar(rc, "cv");

  std::cout << "cv(" << cfg.k << " folds): accuracy=" << format_double(cv.average.accuracy, 6)
            << " precision=" << format_double(cv.average.precision, 6)
            << " recall=" << format_double(cv.average.recall, 6)
            << " f1=" << format_double(cv.average.f1, 6)
            << " auc=" << format_double(cv.average.auc, 6) << '\n';
  if (cv.degenerate_folds > 0) {
    std::cout << "note: " << cv.degenerate_folds
              << " fold(s) had metrics defined as 0 for a 0/0 denominator\n";
  }
  return 0;
}

int cmd_sweep(const RunConfig& rc) {
  if (rc.gammas.empty()) throw UsageError("sweep: gamma list must not be empty");
  EvalConfig cfg = rc.to_eval_config();
  cfg.validate();
  ensure_out_dir(rc.out_dir);
  Dataset ds = restricted_dataset(load_dataset(rc), rc);

  auto rows = gamma_sweep(ds, cfg, rc.gammas);
  write_sweep_csv(rows, out_path(rc, "sweep.csv"));
  write_sidecar(rc, "sweep");
  for (const auto& r : rows) {
    std::cout << "gamma=" << format_double(r.gamma, 6)
              << " accuracy=" << format_double(r.accuracy, 6)
              << " f1=" << format_double(r.f1, 6) << '\n';
  }
  return 0;
}

int cmd_rank(const RunConfig& rc) {
  if (rc.disease.empty()) throw UsageError("--disease is required");
  EvalConfig cfg = rc.to_eval_config();
  ensure_out_dir(rc.out_dir);
  Dataset ds = load_dataset(rc);
  std::size_t d = resolve_disease(ds.assoc, rc.disease);

  FullSimilarities s = full_similarities(ds, cfg);
  Graph g = build_graph(s.fused, s.dg, ds.assoc, cfg.graph);

  ModelParams params;
  if (!rc.checkpoint_in.empty()) {
    Checkpoint ck = load_checkpoint(rc.checkpoint_in);
    if (static_cast<std::size_t>(ck.params.w1.rows()) != g.n_nodes() ||
        static_cast<std::size_t>(ck.params.w2.cols()) != ds.assoc.n_disease) {
      throw DataError("checkpoint shape does not match this dataset");
    }
    params = std::move(ck.params);
  } else {
    std::vector<std::size_t> all_rows(ds.assoc.n_circ);
    for (std::size_t i = 0; i < all_rows.size(); ++i) all_rows[i] = i;
    auto [trained, history] = train(g, ds.assoc, all_rows, {}, cfg.train);
    params = std::move(trained);
    write_history_csv(history, out_path(rc, "history_full.csv"));
  }
  if (!rc.checkpoint_out.empty()) {
    save_checkpoint(params, cfg.train.seed, rc.checkpoint_out);
  }

  Eigen::MatrixXd scores = predict(g, params, cfg.train);
  auto ranking = rank_predictions(scores, ds.assoc, d, rc.top_k, rc.exclude_known);
  write_ranking_csv(ranking, out_path(rc, "ranking.csv"));
  write_sidecar(rc, "rank");
  std::cout << "top " << ranking.size() << " predictions for '"
            << ds.assoc.disease_ids[d] << "' written to "
            << out_path(rc, "ranking.csv") << '\n';
  return 0;
}

int cmd_synth(const RunConfig& rc) {
  rc.synth.validate();
  ensure_out_dir(rc.out_dir);
  auto [seqs, assoc] = synth_dataset(rc.synth);
  write_fasta(seqs, out_path(rc, "sequences.fasta"));
  write_associations(assoc, out_path(rc, "associations.csv"));
  write_sidecar(rc, "synth");
  std::cout << "synthetic dataset: " << assoc.n_circ << " circRNAs, "
            << assoc.n_disease << " diseases, " << assoc.total()
            << " associations\n";
  return 0;
}

namespace {

// Pre-scan for --config so file values load before flag parsing; flags seen
// by CLI11 then override them.
std::string find_config_arg(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config requires a path");
      return args[i + 1];
    }
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return "";
}

void add_pipeline_options(CLI::App* sub, RunConfig& rc) {
  sub->add_option("--assoc", rc.assoc_path, "associations CSV (circRNA,disease[,pmid])");
  sub->add_option("--fasta", rc.fasta_path, "circRNA sequences FASTA (optional)");
  sub->add_option("--jobs", rc.jobs, "worker threads (never changes results)");
  sub->add_option("--alpha-hat-c", rc.alpha_hat_c, "circRNA GIP bandwidth scale");
  sub->add_option("--alpha-hat-d", rc.alpha_hat_d, "disease GIP bandwidth scale");
  sub->add_option("--fusion", rc.fusion, "similarity fusion policy")
      ->check(CLI::IsMember({"average", "sequence_preferred", "gip_only"}));
  sub->add_option("--match", rc.match, "alignment match reward (> 0)");
  sub->add_option("--mismatch", rc.mismatch, "alignment mismatch penalty (<= 0)");
  sub->add_option("--gap", rc.gap, "alignment gap penalty (<= 0)");
}

void add_graph_train_options(CLI::App* sub, RunConfig& rc) {
  sub->add_flag("--include-disease-edges,!--no-include-disease-edges",
                rc.include_disease_edges, "add disease-disease similarity edges");
  sub->add_flag("--include-assoc-edges,!--no-include-assoc-edges",
                rc.include_assoc_edges, "add circRNA-disease training edges");
  sub->add_option("--hidden-dim", rc.hidden_dim, "hidden layer width");
  sub->add_option("--learning-rate", rc.learning_rate, "Adam learning rate");
  sub->add_option("--epochs", rc.epochs, "training epochs");
  sub->add_option("--seed", rc.seed, "master seed; all randomness derives from it");
  sub->add_flag("--self-loops,!--no-self-loops", rc.self_loops,
                "include each node in its own aggregation");
  sub->add_option("--aggregator", rc.aggregator, "neighbor aggregation")
      ->check(CLI::IsMember({"sum", "row_norm"}));
  sub->add_option("--adam-beta1", rc.adam_beta1, "Adam beta1");
  sub->add_option("--adam-beta2", rc.adam_beta2, "Adam beta2");
  sub->add_option("--adam-eps", rc.adam_eps, "Adam epsilon");
  sub->add_option("--positive-weight", rc.positive_weight,
                  "loss weight for label-1 cells");
}

void add_eval_options(CLI::App* sub, RunConfig& rc) {
  sub->add_option("--k", rc.k, "number of folds");
  sub->add_option("--threshold", rc.threshold, "classification cutoff");
  sub->add_option("--n-diseases", rc.n_diseases,
                  "restrict to the n most-associated diseases (0 = all)");
  sub->add_option("--gip-from", rc.gip_from, "AS used for GIP kernels")
      ->check(CLI::IsMember({"train_only", "full"}));
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  RunConfig rc;
  try {
    CLI::App app{"circRNA-disease association prediction via message-passing "
                 "graph convolution"};
    app.require_subcommand(1);
    std::string config_path;

    auto add_common = [&](CLI::App* sub) {
      sub->add_option("--out", rc.out_dir, "output directory")->required();
      sub->add_option("--config", config_path,
                      "key=value config file (flags override it)");
    };

    CLI::App* sim = app.add_subcommand("similarity",
                                       "compute and export similarity matrices");
    add_common(sim);
    add_pipeline_options(sim, rc);

    CLI::App* cv = app.add_subcommand("cv", "k-fold cross-validated evaluation");
    add_common(cv);
    add_pipeline_options(cv, rc);
    add_graph_train_options(cv, rc);
    add_eval_options(cv, rc);
    cv->add_option("--gamma", rc.gamma, "similarity edge threshold");

    CLI::App* sweep = app.add_subcommand("sweep", "cross-validate across gamma values");
    add_common(sweep);
    add_pipeline_options(sweep, rc);
    add_graph_train_options(sweep, rc);
    add_eval_options(sweep, rc);
    sweep->add_option("--gammas", rc.gammas, "gamma values to sweep")
        ->delimiter(',');

    CLI::App* rank = app.add_subcommand("rank",
                                        "train on all data and rank circRNAs for a disease");
    add_common(rank);
    add_pipeline_options(rank, rc);
    add_graph_train_options(rank, rc);
    rank->add_option("--gamma", rc.gamma, "similarity edge threshold");
    rank->add_option("--disease", rc.disease, "disease name to rank against");
    rank->add_option("--top", rc.top_k, "number of predictions to keep");
    rank->add_flag("--exclude-known,!--no-exclude-known", rc.exclude_known,
                   "omit circRNAs already associated with the disease");
    rank->add_option("--checkpoint", rc.checkpoint_in, "load weights instead of training");
    rank->add_option("--save-checkpoint", rc.checkpoint_out, "write trained weights");

    CLI::App* synth = app.add_subcommand("synth", "emit a planted synthetic dataset");
    add_common(synth);
    synth->add_option("--n-circ", rc.synth.n_circ, "circRNA count");
    synth->add_option("--n-disease", rc.synth.n_disease, "disease count");
    synth->add_option("--n-blocks", rc.synth.n_blocks, "planted block count");
    synth->add_option("--intra-block-assoc-prob", rc.synth.intra_block_assoc_prob,
                      "association probability within a block");
    synth->add_option("--noise-prob", rc.synth.noise_prob,
                      "association probability across blocks");
    synth->add_option("--seq-len", rc.synth.seq_len, "sequence length");
    synth->add_option("--mutation-rate", rc.synth.mutation_rate,
                      "per-position mutation probability");
    synth->add_option("--seed", rc.synth.seed, "dataset seed");

    // Load config-file values first so command-line flags override them.
    std::string cfg_file = find_config_arg(args);
    CLI::App* chosen = nullptr;
    if (!args.empty()) {
      for (CLI::App* sub : {sim, cv, sweep, rank, synth}) {
        if (sub->get_name() == args.front()) chosen = sub;
      }
    }
    if (!cfg_file.empty()) {
      if (!chosen) throw UsageError("--config requires a subcommand");
      apply_config_file(rc, chosen->get_name(), cfg_file);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::ParseError& e) {
      int code = app.exit(e);
      return code == 0 ? 0 : 1;
    }

    if (sim->parsed()) return cmd_similarity(rc);
    if (cv->parsed()) return cmd_cv(rc);
    if (sweep->parsed()) return cmd_sweep(rc);
    if (rank->parsed()) return cmd_rank(rc);
    if (synth->parsed()) return cmd_synth(rc);
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace circgcn
