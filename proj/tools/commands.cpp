#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>

#include "ics/centers.hpp"
#include "ics/data.hpp"
#include "ics/encoder.hpp"
#include "ics/error.hpp"
#include "ics/parallel.hpp"
#include "ics/retrieval.hpp"
#include "ics/text_io.hpp"
#include "ics/trainer.hpp"
#include "ics/weights.hpp"

#ifndef ICS_VERSION
#define ICS_VERSION "0.0.0"
#endif

namespace ics::cli {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("ICS_SEED")) {
    try {
      return parse_uint(env, 0);
    } catch (const ParseError&) {
      throw ConfigError(std::string("ICS_SEED is not an unsigned integer: ") +
                        env);
    }
  }
  return 0;
}

/// Every command writes one of these next to its outputs.
class RunManifest {
 public:
  explicit RunManifest(std::string command)
      : command_(std::move(command)), start_(std::chrono::steady_clock::now()) {}

  json& config() { return config_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void add_output(const std::string& path) { outputs_.push_back(path); }

  void write(const std::string& path) const {
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start_)
                               .count();
    json j;
    j["command"] = command_;
    j["version"] = ICS_VERSION;
    j["seed"] = seed_;
    j["config"] = config_;
    j["outputs"] = outputs_;
    j["wall_clock_seconds"] = seconds;
    auto out = open_output(path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError(path, "write failed");
  }

 private:
  std::string command_;
  std::chrono::steady_clock::time_point start_;
  json config_ = json::object();
  std::uint64_t seed_ = 0;
  std::vector<std::string> outputs_;
};

std::string manifest_path_for(const std::string& explicit_path,
                              const std::string& primary_output) {
  return explicit_path.empty() ? primary_output + ".manifest.json"
                               : explicit_path;
}

std::string join(std::span<const double> values, char sep) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += sep;
    s += format_double(values[i]);
  }
  return s;
}

Dataset load_any_dataset(const std::string& path, std::size_t csv_labels) {
  return csv_labels > 0 ? load_csv_dataset(path, csv_labels)
                        : load_dataset(path);
}

// ---------------------------------------------------------------- generate

struct GenerateOptions {
  SyntheticSpec spec;
  std::string out;
  std::string manifest;
};

int cmd_generate(const GenerateOptions& o, std::ostream& out) {
  RunManifest manifest("generate");
  const Dataset data = generate_synthetic(o.spec);
  save_dataset(o.out, data);
  manifest.set_seed(o.spec.seed);
  manifest.config() = {{"n_samples", o.spec.n_samples},
                       {"d_features", o.spec.d_features},
                       {"m_labels", o.spec.m_labels},
                       {"min_labels", o.spec.min_labels},
                       {"max_labels", o.spec.max_labels},
                       {"dirichlet_alpha", o.spec.dirichlet_alpha},
                       {"noise_sigma", o.spec.noise_sigma},
                       {"seed", o.spec.seed}};
  manifest.add_output(o.out);
  const auto mpath = manifest_path_for(o.manifest, o.out);
  manifest.add_output(mpath);
  manifest.write(mpath);
  out << "wrote " << data.size() << " samples to " << o.out << '\n';
  return kOk;
}

// ----------------------------------------------------------------- centers

struct CentersOptions {
  std::size_t bits = 0;
  std::size_t labels = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string manifest;
};

int cmd_centers(const CentersOptions& o, std::ostream& out) {
  RunManifest manifest("centers");
  const HashCenterSet set = generate_centers(o.bits, o.labels, o.seed);
  save_centers(o.out, set);
  manifest.set_seed(o.seed);
  manifest.config() = {{"bits", o.bits},
                       {"labels", o.labels},
                       {"seed", o.seed},
                       {"strategy", std::string(to_string(set.strategy))}};
  manifest.add_output(o.out);
  const auto mpath = manifest_path_for(o.manifest, o.out);
  manifest.add_output(mpath);
  manifest.write(mpath);
  out << "strategy " << to_string(set.strategy) << '\n';
  if (set.m_labels >= 2) {
    out << "min_pairwise_hamming " << min_pairwise_hamming(set) << '\n';
  } else {
    out << "min_pairwise_hamming n/a\n";
  }
  return kOk;
}

// ----------------------------------------------------------- solve-weights

struct SolveOptions {
  std::string distances;
  std::string out;
  std::string manifest;
  WeightSolverConfig solver;
  std::string gradient_mode = "paper";
  bool no_backtracking = false;
  unsigned threads = 1;
};

json solver_json(const WeightSolverConfig& s) {
  return {{"lambda", s.lambda},
          {"eta", s.eta},
          {"beta", s.beta},
          {"max_iters", s.max_iters},
          {"tol", s.tol},
          {"gradient_mode", std::string(to_string(s.gradient_mode))},
          {"weight_floor", s.weight_floor},
          {"backtracking", s.backtracking}};
}

int cmd_solve_weights(SolveOptions o, std::ostream& out) {
  RunManifest manifest("solve-weights");
  o.solver.gradient_mode = parse_gradient_mode(o.gradient_mode);
  o.solver.backtracking = !o.no_backtracking;
  o.solver.validate(0);

  auto in = open_input(o.distances);
  LineReader reader(in);
  std::string line;
  std::vector<std::vector<double>> rows;
  while (reader.next(line)) {
    auto tokens = split_whitespace(line);
    if (tokens.empty()) {
      throw ParseError(reader.line_number(), "empty distance row");
    }
    std::vector<double> d;
    for (auto t : tokens) {
      d.push_back(parse_double(t, reader.line_number()));
      if (d.back() < 0.0) {
        throw DataError("line " + std::to_string(reader.line_number()) +
                        ": distances must be nonnegative");
      }
    }
    rows.push_back(std::move(d));
  }
  if (rows.empty()) throw ParseError(1, "no distance rows");

  std::vector<WeightSolution> sols(rows.size());
  parallel_for(rows.size(), o.threads,
               [&](std::size_t i) { sols[i] = solve_weights(rows[i], o.solver); });

  auto csv = open_output(o.out);
  csv << "sample,c,iterations,converged,objective,weights\n";
  for (std::size_t i = 0; i < sols.size(); ++i) {
    const auto& s = sols[i];
    csv << i << ',' << s.weights.size() << ',' << s.iterations << ','
        << (s.converged ? 1 : 0) << ',' << format_double(s.objective_trace.back())
        << ',' << join(s.weights, ';') << '\n';
  }
  if (!csv) throw IoError(o.out, "write failed");

  manifest.config() = solver_json(o.solver);
  manifest.config()["distances"] = o.distances;
  manifest.config()["threads"] = o.threads;
  manifest.add_output(o.out);
  const auto mpath = manifest_path_for(o.manifest, o.out);
  manifest.add_output(mpath);
  manifest.write(mpath);
  out << "solved " << sols.size() << " weight vectors\n";
  return kOk;
}

// ------------------------------------------------------------------- train

struct TrainOptions {
  std::string data;
  std::string centers;
  std::string out_dir;
  std::size_t csv_labels = 0;
  TrainConfig cfg;
  std::string weight_mode = "learned";
  std::string gradient_mode = "paper";
  std::string aggregation = "per-image";
  std::size_t hidden = 64;
};

int cmd_train(TrainOptions o, std::ostream& out) {
  RunManifest manifest("train");
  o.cfg.weight_mode = parse_weight_mode(o.weight_mode);
  o.cfg.solver.gradient_mode = parse_gradient_mode(o.gradient_mode);
  o.cfg.loss.aggregation = parse_aggregation(o.aggregation);
  o.cfg.hidden_layers = {o.hidden};
  try {
    o.cfg.validate();
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }

  const Dataset data = load_any_dataset(o.data, o.csv_labels);
  const HashCenterSet centers = load_centers(o.centers);
  if (data.m_labels != centers.m_labels) {
    throw ConfigError("dataset has " + std::to_string(data.m_labels) +
                      " labels but the centers file has " +
                      std::to_string(centers.m_labels));
  }

  const TrainState state = train(data, centers, o.cfg);

  fs::create_directories(o.out_dir);
  const std::string ckpt = (fs::path(o.out_dir) / "checkpoint.txt").string();
  const std::string weights = (fs::path(o.out_dir) / "weights.csv").string();
  const std::string history = (fs::path(o.out_dir) / "loss_history.csv").string();
  const std::string mpath = (fs::path(o.out_dir) / "manifest.json").string();

  save_checkpoint(ckpt, state.encoder,
                  {centers.k_bits, centers.m_labels, o.cfg.seed});
  {
    auto csv = open_output(weights);
    csv << "sample,label,weight\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto labels = data.samples[i].positive_labels();
      const auto& w = state.weight_table[i];
      for (std::size_t j = 0; j < labels.size(); ++j) {
        csv << i << ',' << labels[j] << ',' << format_double(w[j]) << '\n';
      }
    }
    if (!csv) throw IoError(weights, "write failed");
  }
  {
    auto csv = open_output(history);
    csv << "epoch,J,J1,Jq,R\n";
    for (std::size_t e = 0; e < state.loss_history.size(); ++e) {
      const auto& l = state.loss_history[e];
      csv << e << ',' << format_double(l.j) << ',' << format_double(l.j1) << ','
          << format_double(l.jq) << ',' << format_double(l.r) << '\n';
    }
    if (!csv) throw IoError(history, "write failed");
  }

  const auto& c = o.cfg;
  manifest.set_seed(c.seed);
  manifest.config() = {
      {"data", o.data},
      {"centers", o.centers},
      {"csv_labels", o.csv_labels},
      {"epochs", c.epochs},
      {"batch", c.batch_size},
      {"hidden", o.hidden},
      {"lr", c.adam.lr},
      {"adam_beta1", c.adam.beta1},
      {"adam_beta2", c.adam.beta2},
      {"adam_eps", c.adam.eps},
      {"weight_decay", c.adam.weight_decay},
      {"lr_step_epochs", c.lr_step_epochs},
      {"lr_decay", c.lr_decay},
      {"beta", c.loss.beta},
      {"gamma", c.loss.gamma},
      {"lambda", c.loss.lambda},
      {"aggregation", std::string(to_string(c.loss.aggregation))},
      {"weight_mode", std::string(to_string(c.weight_mode))},
      {"solver", solver_json(c.effective_solver())},
      {"seed", c.seed},
      {"threads", c.threads}};
  for (const auto& p : {ckpt, weights, history, mpath}) manifest.add_output(p);
  manifest.write(mpath);

  if (!state.loss_history.empty()) {
    out << "initial J " << format_double(state.loss_history.front().j)
        << "\nfinal J " << format_double(state.loss_history.back().j) << '\n';
  }
  out << "wrote " << o.out_dir << '\n';
  return kOk;
}

// -------------------------------------------------------------------- eval

struct EvalOptions {
  std::string checkpoint;
  std::string queries;
  std::string database;
  std::size_t csv_labels = 0;
  std::size_t k = 100;
  std::string out;
  std::string dump_codes;
  std::string manifest;
  unsigned threads = 1;
};

LabeledCodes encode_labeled(const Encoder& enc, const Dataset& data,
                            unsigned threads) {
  if (data.d_features != enc.input_dim()) {
    throw ConfigError("dataset has " + std::to_string(data.d_features) +
                      " features but the encoder expects " +
                      std::to_string(enc.input_dim()));
  }
  LabeledCodes lc;
  const auto relaxed = encode_all(enc, data, threads);
  lc.codes.reserve(relaxed.size());
  for (const auto& r : relaxed) lc.codes.push_back(binarize(r));
  for (const auto& s : data.samples) lc.labels.push_back(s.labels);
  return lc;
}

int cmd_eval(const EvalOptions& o, std::ostream& out) {
  RunManifest manifest("eval");
  CheckpointMeta meta;
  const Encoder enc = load_checkpoint(o.checkpoint, &meta);
  const Dataset queries = load_any_dataset(o.queries, o.csv_labels);
  const Dataset database = load_any_dataset(o.database, o.csv_labels);
  if (queries.m_labels != database.m_labels) {
    throw ConfigError("query and database label dimensions differ");
  }

  const auto q = encode_labeled(enc, queries, o.threads);
  const auto db = encode_labeled(enc, database, o.threads);
  const auto m = evaluate_retrieval(q, db, o.k, o.threads);

  json report;
  report["map_at_k"] = m.map_at_k;
  report["precision_at_k"] = m.precision_at_k;
  report["k"] = m.k;
  report["n_queries"] = m.n_queries;
  report["n_database"] = m.n_database;
  report["n_evaluated"] = m.n_evaluated;
  {
    auto f = open_output(o.out);
    f << report.dump(2) << '\n';
    if (!f) throw IoError(o.out, "write failed");
  }
  manifest.add_output(o.out);
  if (!o.dump_codes.empty()) {
    save_codes(o.dump_codes, db.codes);
    manifest.add_output(o.dump_codes);
  }

  manifest.set_seed(meta.seed);
  manifest.config() = {{"checkpoint", o.checkpoint},
                       {"queries", o.queries},
                       {"database", o.database},
                       {"csv_labels", o.csv_labels},
                       {"k", o.k},
                       {"dump_codes", o.dump_codes},
                       {"threads", o.threads}};
  const auto mpath = manifest_path_for(o.manifest, o.out);
  manifest.add_output(mpath);
  manifest.write(mpath);
  out << report.dump() << '\n';
  return kOk;
}

// ----------------------------------------------------------- weight-report

struct ReportOptions {
  std::string weights;
  std::string data;
  std::string out;
  std::string summary;
  std::string manifest;
};

int cmd_weight_report(const ReportOptions& o, std::ostream& out) {
  RunManifest manifest("weight-report");
  const Dataset data = load_dataset(o.data);
  if (!data.has_proportions()) {
    throw DataError(o.data + ": dataset lacks ground-truth proportions");
  }

  // sample -> (label, weight) in file order
  std::map<std::size_t, std::vector<std::pair<std::size_t, double>>> rows;
  {
    auto in = open_input(o.weights);
    LineReader reader(in);
    std::string line;
    if (!reader.next(line) || line != "sample,label,weight") {
      throw ParseError(1, "expected header 'sample,label,weight'");
    }
    while (reader.next(line)) {
      if (line.empty()) continue;
      auto cells = split_on(line, ',');
      if (cells.size() != 3) {
        throw ParseError(reader.line_number(), "expected 3 columns");
      }
      const std::size_t ln = reader.line_number();
      rows[parse_uint(cells[0], ln)].emplace_back(parse_uint(cells[1], ln),
                                                  parse_double(cells[2], ln));
    }
  }

  auto csv = open_output(o.out);
  csv << "sample,c,weights,proportions,spearman\n";
  double rho_sum = 0.0;
  std::size_t included = 0, excluded_single = 0, excluded_constant = 0;
  double w_sum = 0.0, w_sq = 0.0;
  std::size_t w_count = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto labels = data.samples[i].positive_labels();
    auto it = rows.find(i);
    if (it == rows.end()) {
      throw DataError("weights file has no rows for sample " + std::to_string(i));
    }
    std::vector<double> w(labels.size());
    std::vector<bool> seen(labels.size(), false);
    if (it->second.size() != labels.size()) {
      throw DataError("sample " + std::to_string(i) +
                      ": weight rows do not match its labels");
    }
    for (const auto& [label, weight] : it->second) {
      auto pos = std::find(labels.begin(), labels.end(), label);
      if (pos == labels.end() || seen[pos - labels.begin()]) {
        throw DataError("sample " + std::to_string(i) + ": unexpected label " +
                        std::to_string(label) + " in weights file");
      }
      seen[pos - labels.begin()] = true;
      w[pos - labels.begin()] = weight;
    }
    const auto& p = *data.samples[i].proportions;
    for (double x : w) {
      w_sum += x;
      w_sq += x * x;
      ++w_count;
    }

    std::string rho_text = "NA";
    if (labels.size() < 2) {
      ++excluded_single;
    } else {
      try {
        const double rho = spearman_corr(w, p);
        rho_sum += rho;
        ++included;
        rho_text = format_double(rho);
      } catch (const EvaluationError&) {
        ++excluded_constant;
      }
    }
    csv << i << ',' << labels.size() << ',' << join(w, ';') << ','
        << join(p, ';') << ',' << rho_text << '\n';
  }
  if (!csv) throw IoError(o.out, "write failed");
  if (rows.size() != data.size()) {
    throw DataError("weights file covers samples missing from the dataset");
  }

  const double mean = w_sum / static_cast<double>(w_count);
  const double variance =
      std::max(0.0, w_sq / static_cast<double>(w_count) - mean * mean);
  json summary;
  summary["mean_spearman"] =
      included ? json(rho_sum / static_cast<double>(included)) : json(nullptr);
  summary["n_samples"] = data.size();
  summary["n_included"] = included;
  summary["n_excluded_single_label"] = excluded_single;
  summary["n_excluded_constant"] = excluded_constant;
  summary["weight_variance"] = variance;

  const std::string summary_path =
      o.summary.empty() ? o.out + ".summary.json" : o.summary;
  {
    auto f = open_output(summary_path);
    f << summary.dump(2) << '\n';
    if (!f) throw IoError(summary_path, "write failed");
  }
  manifest.config() = {{"weights", o.weights}, {"data", o.data}};
  manifest.add_output(o.out);
  manifest.add_output(summary_path);
  const auto mpath = manifest_path_for(o.manifest, o.out);
  manifest.add_output(mpath);
  manifest.write(mpath);
  out << summary.dump() << '\n';
  return kOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::argument:
    case ErrorKind::capacity:
    case ErrorKind::config:
      return kUsage;
    case ErrorKind::parse:
    case ErrorKind::data:
    case ErrorKind::evaluation:
    case ErrorKind::io:
      return kData;
    case ErrorKind::invariant:
      return kInternal;
  }
  return kInternal;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Instance-weighted central similarity hashing toolkit", "ics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ICS_VERSION);

  std::uint64_t seed = 0;
  try {
    seed = default_seed();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  GenerateOptions gen;
  gen.spec.seed = seed;
  auto* g = app.add_subcommand("generate", "Write a synthetic multi-label dataset");
  g->add_option("--n", gen.spec.n_samples, "Number of samples")
      ->check(CLI::PositiveNumber)->capture_default_str();
  g->add_option("--dim", gen.spec.d_features, "Feature dimension D")
      ->check(CLI::PositiveNumber)->capture_default_str();
  g->add_option("--labels", gen.spec.m_labels, "Number of labels M")
      ->check(CLI::PositiveNumber)->capture_default_str();
  g->add_option("--min-labels", gen.spec.min_labels, "Fewest labels per sample")
      ->check(CLI::PositiveNumber)->capture_default_str();
  g->add_option("--max-labels", gen.spec.max_labels, "Most labels per sample")
      ->check(CLI::PositiveNumber)->capture_default_str();
  g->add_option("--alpha", gen.spec.dirichlet_alpha, "Dirichlet concentration")
      ->capture_default_str();
  g->add_option("--noise", gen.spec.noise_sigma, "Feature noise sigma")
      ->capture_default_str();
  g->add_option("--seed", gen.spec.seed, "Seed (default: $ICS_SEED or 0)");
  g->add_option("--out", gen.out, "Dataset path")->required();
  g->add_option("--manifest", gen.manifest, "Manifest path");

  CentersOptions cen;
  cen.seed = seed;
  auto* c = app.add_subcommand("centers", "Generate hash centers");
  c->add_option("--bits", cen.bits, "Code length K")->required()
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 16));
  c->add_option("--labels", cen.labels, "Number of labels M")->required()
      ->check(CLI::PositiveNumber);
  c->add_option("--seed", cen.seed, "Seed (default: $ICS_SEED or 0)");
  c->add_option("--out", cen.out, "Centers file path")->required();
  c->add_option("--manifest", cen.manifest, "Manifest path");

  SolveOptions sol;
  auto* s = app.add_subcommand("solve-weights",
                               "Solve center weights for rows of distances");
  s->add_option("--distances", sol.distances, "One sample per line")->required();
  s->add_option("--out", sol.out, "Output CSV")->required();
  s->add_option("--lambda", sol.solver.lambda, "Entropy strength")->capture_default_str();
  s->add_option("--eta", sol.solver.eta, "Step size")->capture_default_str();
  s->add_option("--beta", sol.solver.beta, "Sigmoid bandwidth (exact mode)")
      ->capture_default_str();
  s->add_option("--max-iters", sol.solver.max_iters, "Iteration cap")->capture_default_str();
  s->add_option("--tol", sol.solver.tol, "Relative objective change threshold")
      ->capture_default_str();
  s->add_option("--gradient-mode", sol.gradient_mode, "paper | exact")
      ->check(CLI::IsMember({"paper", "exact"}))->capture_default_str();
  s->add_flag("--no-backtracking", sol.no_backtracking,
              "Fixed step in exact mode");
  s->add_option("--threads", sol.threads, "Worker threads")->capture_default_str();
  s->add_option("--manifest", sol.manifest, "Manifest path");

  TrainOptions tr;
  tr.cfg.seed = seed;
  auto* t = app.add_subcommand("train", "Train the hash encoder");
  t->add_option("--data", tr.data, "Training dataset")->required();
  t->add_option("--centers", tr.centers, "Centers file")->required();
  t->add_option("--out-dir", tr.out_dir, "Output directory")->required();
  t->add_option("--csv-labels", tr.csv_labels,
                "Read --data as headerless CSV with this many label columns");
  t->add_option("--epochs", tr.cfg.epochs, "Epochs")->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  t->add_option("--batch", tr.cfg.batch_size, "Batch size")->check(CLI::PositiveNumber)
      ->capture_default_str();
  t->add_option("--hidden", tr.hidden, "Hidden units")->check(CLI::PositiveNumber)
      ->capture_default_str();
  t->add_option("--lr", tr.cfg.adam.lr, "Initial learning rate")->capture_default_str();
  t->add_option("--lr-step", tr.cfg.lr_step_epochs, "Epochs per learning-rate decay")
      ->capture_default_str();
  t->add_option("--weight-decay", tr.cfg.adam.weight_decay, "Decoupled weight decay")
      ->capture_default_str();
  t->add_option("--beta", tr.cfg.loss.beta, "Sigmoid bandwidth")->capture_default_str();
  t->add_option("--lambda", tr.cfg.loss.lambda, "Entropy weight")->capture_default_str();
  t->add_option("--gamma", tr.cfg.loss.gamma, "Quantization weight")->capture_default_str();
  t->add_option("--aggregation", tr.aggregation, "per-image | per-center")
      ->check(CLI::IsMember({"per-image", "per-center"}))->capture_default_str();
  t->add_option("--weight-mode", tr.weight_mode, "learned | equal")
      ->check(CLI::IsMember({"learned", "equal"}))->capture_default_str();
  t->add_option("--gradient-mode", tr.gradient_mode, "paper | exact")
      ->check(CLI::IsMember({"paper", "exact"}))->capture_default_str();
  t->add_option("--solver-iters", tr.cfg.solver.max_iters, "Weight solver iteration cap")
      ->capture_default_str();
  t->add_option("--seed", tr.cfg.seed, "Seed (default: $ICS_SEED or 0)");
  t->add_option("--threads", tr.cfg.threads, "Worker threads")->capture_default_str();

  EvalOptions ev;
  auto* e = app.add_subcommand("eval", "Hamming-ranking retrieval metrics");
  e->add_option("--checkpoint", ev.checkpoint, "Encoder checkpoint")->required();
  e->add_option("--queries", ev.queries, "Query dataset")->required();
  e->add_option("--database", ev.database, "Database dataset")->required();
  e->add_option("--csv-labels", ev.csv_labels,
                "Read datasets as headerless CSV with this many label columns");
  e->add_option("--k", ev.k, "Ranking depth")->check(CLI::PositiveNumber)
      ->capture_default_str();
  e->add_option("--out", ev.out, "Metrics JSON")->required();
  e->add_option("--dump-codes", ev.dump_codes, "Write database codes here");
  e->add_option("--threads", ev.threads, "Worker threads")->capture_default_str();
  e->add_option("--manifest", ev.manifest, "Manifest path");

  ReportOptions rep;
  auto* r = app.add_subcommand("weight-report",
                               "Compare learned weights with true proportions");
  r->add_option("--weights", rep.weights, "weights.csv from train")->required();
  r->add_option("--data", rep.data, "Dataset with proportions")->required();
  r->add_option("--out", rep.out, "Per-sample CSV")->required();
  r->add_option("--summary", rep.summary, "Summary JSON path");
  r->add_option("--manifest", rep.manifest, "Manifest path");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << ICS_VERSION << '\n';
    return kOk;
  } catch (const CLI::ParseError& pe) {
    err << "usage error: " << pe.what() << '\n';
    return kUsage;
  }

  try {
    if (*g) return cmd_generate(gen, out);
    if (*c) return cmd_centers(cen, out);
    if (*s) return cmd_solve_weights(sol, out);
    if (*t) return cmd_train(tr, out);
    if (*e) return cmd_eval(ev, out);
    if (*r) return cmd_weight_report(rep, out);
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return exit_code_for(ex.kind());
  } catch (const fs::filesystem_error& ex) {
    err << "error: " << ex.what() << '\n';
    return kData;
  } catch (const std::exception& ex) {
    err << "internal error: " << ex.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

}  // namespace ics::cli
