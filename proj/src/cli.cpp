#include "hextm/cli.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include "hextm/datagen.hpp"
#include "hextm/errors.hpp"
#include "hextm/evalrunner.hpp"
#include "hextm/interpret.hpp"
#include "hextm/json_io.hpp"
#include "hextm/model_io.hpp"
#include "hextm/service.hpp"
#include "hextm/svg.hpp"

namespace hextm::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kModelDirEnv = "HEXTM_MODEL_DIR";
constexpr const char* kDataDirEnv = "HEXTM_DATA_DIR";
constexpr const char* kDefaultModelName = "model.hextm";
constexpr const char* kDefaultDataName = "dataset.txt";

// Usage errors detected after flag parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { Text, Structured };

// Relative paths resolve against the directory named by `env` when it is set.
fs::path resolve(const std::string& value, const char* env) {
  fs::path p(value);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(env); dir != nullptr && *dir != '\0') return fs::path(dir) / p;
  }
  return p;
}

// Flag value, else the default file inside the env directory, else a usage error.
fs::path path_or_default(const std::string& value, const char* env, const char* fallback, const char* flag) {
  if (!value.empty()) return resolve(value, env);
  if (const char* dir = std::getenv(env); dir != nullptr && *dir != '\0') return fs::path(dir) / fallback;
  throw UsageError(std::string(flag) + " is required (or set " + env + ")");
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  f << content;
  if (!f) throw std::runtime_error("failed writing: " + path.string());
}

Board read_board(const std::string& source, std::istream& in) {
  std::string text;
  if (source == "-") {
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  } else {
    std::ifstream f(source, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open board file: " + source);
    text.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  }
  // A single 36-character line is accepted as the flat encoding.
  std::string trimmed = text;
  while (!trimmed.empty() && (trimmed.back() == '\n' || trimmed.back() == '\r')) trimmed.pop_back();
  if (trimmed.find('\n') == std::string::npos && trimmed.size() == kDefaultBoardSize * kDefaultBoardSize) {
    return parse_flat(trimmed);
  }
  return parse_board_text(text);
}

std::string count_grid(const std::vector<int>& counts, int n) {
  std::ostringstream out;
  out << "   ";
  for (int c = 0; c < n; ++c) out << std::setw(5) << static_cast<char>('a' + c);
  out << '\n';
  for (int r = 0; r < n; ++r) {
    out << std::setw(3) << (r + 1);
    for (int c = 0; c < n; ++c) out << std::setw(5) << counts[static_cast<std::size_t>(r * n + c)];
    out << '\n';
  }
  return out.str();
}

std::string prediction_text(const Prediction& p) {
  std::ostringstream out;
  out << "prediction: " << (p.label == 1 ? "black" : "white") << "  voteSum " << p.vote_sum << "  margin "
      << std::setprecision(6) << p.margin << '\n';
  return out.str();
}

std::string heatmap_text(const Board& board, const Heatmap& h) {
  std::ostringstream out;
  out << "board:\n" << to_text(board) << prediction_text(h.prediction);
  out << "black literal counts:\n" << count_grid(h.black_counts, h.board_size);
  out << "white literal counts:\n" << count_grid(h.white_counts, h.board_size);
  if (!h.forbid_black_counts.empty()) {
    out << "diagnostic, negated black literal counts:\n" << count_grid(h.forbid_black_counts, h.board_size);
    out << "diagnostic, negated white literal counts:\n" << count_grid(h.forbid_white_counts, h.board_size);
  }
  return out.str();
}

std::string top_text(const TopClauses& top, Polarity pol, int k, double alpha) {
  std::ostringstream out;
  out << to_string(pol) << " polarity (" << (pol == Polarity::Positive ? "black" : "white")
      << " wins), top " << k << " by precision^" << alpha << " x coverage";
  if (top.truncated) out << " (only " << top.clauses.size() << " available)";
  out << '\n';
  int rank = 0;
  for (const auto& rc : top.clauses) {
    char line[256];
    std::snprintf(line, sizeof line,
                  "#%d clause %d  score %.6g  precision %.4f  coverage %.4f  tp %lld fp %lld fn %lld  weight %d\n",
                  ++rank, rc.clause, rc.score, rc.stats.precision(), rc.stats.coverage(),
                  static_cast<long long>(rc.stats.true_positives), static_cast<long long>(rc.stats.false_positives),
                  static_cast<long long>(rc.stats.false_negatives), rc.weight);
    out << line << render_pattern(rc.pattern) << '\n';
  }
  return out.str();
}

std::string dataset_summary_text(const std::vector<DatasetRecord>& records) {
  std::map<int, std::array<std::int64_t, 2>> per_move;
  std::array<std::int64_t, 2> total{};
  for (const auto& r : records) {
    ++per_move[r.move_count][static_cast<std::size_t>(r.label)];
    ++total[static_cast<std::size_t>(r.label)];
  }
  std::ostringstream out;
  out << "records: " << records.size() << '\n';
  out << "class counts: black=" << total[1] << " white=" << total[0] << '\n';
  out << "moves | black | white | total\n";
  for (const auto& [m, c] : per_move) {
    char line[96];
    std::snprintf(line, sizeof line, "%5d | %5lld | %5lld | %5lld\n", m, static_cast<long long>(c[1]),
                  static_cast<long long>(c[0]), static_cast<long long>(c[0] + c[1]));
    out << line;
  }
  return out.str();
}

Json dataset_summary_json(const std::vector<DatasetRecord>& records, const GenConfig& gen) {
  std::map<int, std::array<std::int64_t, 2>> per_move;
  std::array<std::int64_t, 2> total{};
  for (const auto& r : records) {
    ++per_move[r.move_count][static_cast<std::size_t>(r.label)];
    ++total[static_cast<std::size_t>(r.label)];
  }
  Json table = Json::object();
  for (const auto& [m, c] : per_move) table[std::to_string(m)] = {{"black", c[1]}, {"white", c[0]}};
  return {{"records", records.size()},
          {"classCounts", {{"black", total[1]}, {"white", total[0]}}},
          {"perMoveCount", table},
          {"config", to_json(gen)}};
}

void add_format(CLI::App* cmd, std::string& format) {
  cmd->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "structured"}))
      ->capture_default_str();
}

Format format_of(const std::string& s) { return s == "structured" ? Format::Structured : Format::Text; }

// Flag storage for all subcommands.
struct Flags {
  std::string format = "text";

  GenConfig gen;
  std::string out;

  std::string data;
  std::string model;
  std::string report;
  TMConfig tm;
  std::optional<int> threshold;
  SplitConfig split;
  int log_every = 1;

  std::string board;
  int top_k = 10;
  double alpha = 10.0;
  std::string polarity = "both";
  std::string svg;
  int bins = 0;
  bool diagnostic_negated = false;

  std::string host = "127.0.0.1";
  int port = 8080;
  std::vector<std::string> origins;
};

int cmd_generate(Flags& f, std::ostream& out, std::ostream& err) {
  try {
    f.gen.validate();
  } catch (const ContractViolation& e) {
    throw UsageError(e.what());
  }
  const fs::path path = resolve(f.out, kDataDirEnv);
  err << "generating " << f.gen.n_games << " games, " << f.gen.playouts_per_move << " playouts per move, seed "
      << f.gen.seed << '\n';
  const auto records = generate_dataset(f.gen);
  write_dataset(records, path);
  err << "wrote " << records.size() << " records to " << path.string() << '\n';
  if (format_of(f.format) == Format::Structured) {
    out << dataset_summary_json(records, f.gen).dump(2) << '\n';
  } else {
    out << dataset_summary_text(records);
  }
  return kExitOk;
}

int cmd_train(Flags& f, std::ostream& out, std::ostream& err) {
  f.tm.threshold = f.threshold.value_or(static_cast<int>(std::llround(0.8 * f.tm.n_clauses)));
  try {
    f.tm.validate();
    f.split.validate();
  } catch (const ContractViolation& e) {
    throw UsageError(e.what());
  }
  const fs::path data = path_or_default(f.data, kDataDirEnv, kDefaultDataName, "--data");
  const fs::path model = path_or_default(f.model, kModelDirEnv, kDefaultModelName, "--out-model");

  ExperimentPlan plan;
  plan.dataset_in = data;
  plan.tm = f.tm;
  plan.split = f.split;
  plan.model_out = model;
  if (!f.report.empty()) plan.report_out = resolve(f.report, kModelDirEnv);

  err << "config: n=" << f.tm.n_clauses << " T=" << f.tm.threshold << " s=" << f.tm.specificity
      << " N=" << f.tm.states_per_action << " epochs=" << f.tm.epochs << " seed=" << f.tm.seed
      << (f.tm.weighted ? " weighted" : "") << (f.tm.boost_true_positives ? " boost" : "") << '\n';
  int epoch_lines = 0;
  const auto result = run_experiment(plan, [&](const std::string& msg) {
    if (msg.rfind("epoch ", 0) == 0) {
      ++epoch_lines;
      if (f.log_every > 1 && epoch_lines % f.log_every != 0 && epoch_lines != f.tm.epochs) return;
    }
    err << msg << '\n' << std::flush;
  });
  err << "model written to " << model.string() << '\n';

  if (format_of(f.format) == Format::Structured) {
    out << to_json(result.report).dump(2) << '\n';
  } else {
    out << "n=" << f.tm.n_clauses << " T=" << f.tm.threshold << " s=" << f.tm.specificity << '\n';
    out << "final training accuracy " << pct(result.report.epoch_accuracy.back()) << "%\n\n";
    out << format_report_table(result.report);
  }
  return kExitOk;
}

int cmd_eval(Flags& f, std::ostream& out, std::ostream& err) {
  const fs::path model = path_or_default(f.model, kModelDirEnv, kDefaultModelName, "--model");
  const fs::path data = path_or_default(f.data, kDataDirEnv, kDefaultDataName, "--data");
  const ClauseBank bank = load_model(model);
  const auto records = read_dataset(data);
  if (records.empty()) throw std::runtime_error("dataset is empty: " + data.string());
  err << "evaluating " << model.string() << " on " << records.size() << " records\n";
  const EvalReport report = report_for(bank, records);
  if (!f.report.empty()) save_report(report, resolve(f.report, kModelDirEnv));
  if (format_of(f.format) == Format::Structured) {
    out << to_json(report).dump(2) << '\n';
  } else {
    out << "accuracy " << pct(report.test_accuracy) << "% on " << report.test_size << " records\n\n";
    out << format_report_table(report);
  }
  return kExitOk;
}

int cmd_interpret(Flags& f, std::istream& in, std::ostream& out, std::ostream& err) {
  if (f.data.empty() && f.board.empty()) throw UsageError("interpret needs --data, --board, or both");
  if (f.top_k < 1) throw UsageError("--top-k must be positive");
  if (!(f.alpha >= 0.0) || !std::isfinite(f.alpha)) throw UsageError("--alpha must be a non-negative number");
  if (f.bins < 0) throw UsageError("--bins must be non-negative");
  const fs::path model = path_or_default(f.model, kModelDirEnv, kDefaultModelName, "--model");
  const ClauseBank bank = load_model(model);
  const Format format = format_of(f.format);

  Json doc = Json::object();
  std::string text;
  std::string svg;

  if (!f.board.empty()) {
    const Board board = read_board(f.board, in);
    const Heatmap h = local_interpretation(bank, board, f.diagnostic_negated);
    doc["local"] = heatmap_json(h);
    text += heatmap_text(board, h);
    svg = heatmap_svg(board, h);
  }

  if (!f.data.empty()) {
    const fs::path data = resolve(f.data, kDataDirEnv);
    const auto records = read_dataset(data);
    err << "clause statistics over " << records.size() << " records\n";
    const auto stats = clause_stats(bank, records);
    std::vector<Polarity> pols;
    if (f.polarity != "negative") pols.push_back(Polarity::Positive);
    if (f.polarity != "positive") pols.push_back(Polarity::Negative);
    Json global = Json::object();
    for (const Polarity pol : pols) {
      const TopClauses top = top_clauses(bank, stats, pol, f.top_k, f.alpha);
      global[to_string(pol)] = top_clauses_json(top, pol, f.top_k, f.alpha);
      if (!text.empty()) text += '\n';
      text += top_text(top, pol, f.top_k, f.alpha);
      if (svg.empty()) svg = patterns_svg(top, pol);
      if (f.bins > 0) {
        const Histogram hist = precision_histogram(stats, pol, f.bins);
        global[to_string(pol)]["precisionHistogram"] = hist.counts;
        text += "precision histogram (" + std::to_string(f.bins) + " bins):";
        for (auto c : hist.counts) text += " " + std::to_string(c);
        text += '\n';
      }
    }
    doc["global"] = std::move(global);
  }

  if (!f.svg.empty()) write_file(f.svg, svg);
  if (format == Format::Structured) {
    out << doc.dump(2) << '\n';
  } else {
    out << text;
  }
  return kExitOk;
}

service::HttpServer* g_server = nullptr;

extern "C" void on_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

int cmd_serve(Flags& f, std::ostream& err) {
  if (f.port < 0 || f.port > 65535) throw UsageError("--port must lie in 0..65535");
  service::Options opts;
  if (!f.model.empty()) {
    opts.model = resolve(f.model, kModelDirEnv);
  } else if (const char* dir = std::getenv(kModelDirEnv); dir != nullptr && *dir != '\0') {
    opts.model = fs::path(dir) / kDefaultModelName;
  }
  if (!f.data.empty()) opts.data = resolve(f.data, kDataDirEnv);
  opts.origins = f.origins;
  const service::PredictionService svc(opts);
  service::HttpServer server(svc);
  err << "serving on http://" << f.host << ":" << f.port << (svc.has_model() ? "" : " (no model loaded)") << '\n'
      << std::flush;
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.listen(f.host, f.port);
  g_server = nullptr;
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Winner prediction and interpretation for 6x6 Hex with a Tsetlin Machine", "hextm"};
  app.require_subcommand(1);
  Flags f;

  auto* gen = app.add_subcommand("generate", "Self-play games to a labelled snapshot dataset");
  gen->add_option("--games", f.gen.n_games, "Number of games")->capture_default_str()->check(CLI::PositiveNumber);
  gen->add_option("--playouts", f.gen.playouts_per_move, "Random playouts per candidate move")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  gen->add_option("--min-moves", f.gen.min_moves, "Smallest snapshot move count")->capture_default_str();
  gen->add_option("--max-moves", f.gen.max_moves, "Largest snapshot move count")->capture_default_str();
  gen->add_option("--seed", f.gen.seed, "Random seed")->capture_default_str();
  gen->add_option("--out", f.out, "Dataset file to write")->required();
  add_format(gen, f.format);

  auto* train = app.add_subcommand("train", "Split a dataset, fit a model, report accuracy");
  train->add_option("--data", f.data, "Dataset file");
  train->add_option("--clauses", f.tm.n_clauses, "Number of clauses (even)")->capture_default_str();
  train->add_option("-T,--threshold", f.threshold, "Voting margin T (default 0.8 x clauses)");
  train->add_option("-s,--specificity", f.tm.specificity, "Specificity s")->capture_default_str();
  train->add_option("--states", f.tm.states_per_action, "States per action N")->capture_default_str();
  train->add_option("--epochs", f.tm.epochs, "Training epochs")->capture_default_str();
  train->add_option("--seed", f.tm.seed, "Model seed")->capture_default_str();
  train->add_flag("--weighted", f.tm.weighted, "Learn integer clause weights");
  train->add_option("--max-weight", f.tm.max_weight, "Weight cap in weighted mode")->capture_default_str();
  train->add_flag("--boost", f.tm.boost_true_positives, "Boost true positive feedback");
  train->add_option("--train-fraction", f.split.train_fraction, "Share of records used for training")
      ->capture_default_str();
  train->add_option("--split-seed", f.split.seed, "Split seed")->capture_default_str();
  train->add_flag("--stratified", f.split.stratified, "Split each label separately");
  train->add_option("--out-model", f.model, "Model file to write");
  train->add_option("--report", f.report, "Report file to write");
  train->add_option("--log-every", f.log_every, "Log every k-th epoch")->capture_default_str()->check(
      CLI::PositiveNumber);
  add_format(train, f.format);

  auto* eval = app.add_subcommand("eval", "Evaluate a model on a dataset");
  eval->add_option("--model", f.model, "Model file");
  eval->add_option("--data", f.data, "Dataset file");
  eval->add_option("--report", f.report, "Report file to write");
  add_format(eval, f.format);

  auto* interp = app.add_subcommand("interpret", "Global clause ranking and/or local heatmap");
  interp->add_option("--model", f.model, "Model file");
  interp->add_option("--data", f.data, "Dataset for clause statistics (global ranking)");
  interp->add_option("--board", f.board, "Board file in text format, '-' for standard input");
  interp->add_option("--top-k", f.top_k, "Clauses per polarity")->capture_default_str();
  interp->add_option("--alpha", f.alpha, "Precision exponent")->capture_default_str();
  interp->add_option("--polarity", f.polarity, "Polarities to rank")
      ->check(CLI::IsMember({"both", "positive", "negative"}))
      ->capture_default_str();
  interp->add_option("--bins", f.bins, "Also print a precision histogram with this many bins");
  interp->add_option("--svg", f.svg, "Write an SVG rendering here");
  interp->add_flag("--diagnostic-negated", f.diagnostic_negated, "Also tally negated literals");
  add_format(interp, f.format);

  auto* serve = app.add_subcommand("serve", "HTTP prediction and interpretation service");
  serve->add_option("--model", f.model, "Model file");
  serve->add_option("--data", f.data, "Reference dataset for clause statistics");
  serve->add_option("--host", f.host, "Bind address")->capture_default_str();
  serve->add_option("--port", f.port, "Port")->capture_default_str();
  serve->add_option("--origins", f.origins, "Allowed CORS origins, '*' for any")->delimiter(',');

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front(); sub != nullptr) {
      err << sub->help();
    } else {
      err << app.help();
    }
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_generate(f, out, err);
    if (train->parsed()) return cmd_train(f, out, err);
    if (eval->parsed()) return cmd_eval(f, out, err);
    if (interp->parsed()) return cmd_interpret(f, in, out, err);
    if (serve->parsed()) return cmd_serve(f, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace hextm::cli
