#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hextm/cli.hpp"
#include "hextm/datagen.hpp"
#include "hextm/evalrunner.hpp"
#include "hextm/json_io.hpp"
#include "hextm/model_io.hpp"
#include "oracles.hpp"

using namespace hextm;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

// Small dataset and model shared by the read-style tests.
struct Artifacts {
  oracle::TempDir dir{"cli"};
  std::string data = (dir / "d.txt").string();
  std::string model = (dir / "m.hextm").string();
  Artifacts() {
    REQUIRE(run({"generate", "--games", "40", "--playouts", "5", "--seed", "3", "--out", data}).code == 0);
    REQUIRE(run({"train", "--data", data, "--clauses", "60", "-T", "30", "-s", "5", "--epochs", "3", "--out-model",
                 model})
                .code == 0);
  }
};

Artifacts& shared() {
  static Artifacts a;
  return a;
}

// Parses the "black literal counts" or "white literal counts" grid from text output.
std::vector<int> grid_after(const std::string& text, const std::string& title) {
  std::istringstream in(text.substr(text.find(title)));
  std::string line;
  std::getline(in, line);  // title
  std::getline(in, line);  // column letters
  std::vector<int> values;
  for (int r = 0; r < 6; ++r) {
    std::getline(in, line);
    std::istringstream row(line);
    int label = 0;
    row >> label;
    for (int c = 0; c < 6; ++c) {
      int v = -1;
      row >> v;
      values.push_back(v);
    }
  }
  return values;
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"bogus"}).code == cli::kExitUsage);
  CHECK(run({"generate", "--games", "1"}).code == cli::kExitUsage);  // missing --out
  CHECK(run({"generate", "--out", "x", "--no-such-flag"}).code == cli::kExitUsage);
  CHECK(run({"generate", "--out", "x", "--min-moves", "9", "--max-moves", "3"}).code == cli::kExitUsage);
  CHECK(run({"generate", "--out", "x", "--format", "yaml"}).code == cli::kExitUsage);
  CHECK(run({"train", "--data", "x", "--out-model", "y", "--epochs", "0"}).code == cli::kExitUsage);
  CHECK(run({"train", "--data", "x", "--out-model", "y", "--clauses", "7"}).code == cli::kExitUsage);
  CHECK(run({"interpret", "--model", "m"}).code == cli::kExitUsage);
  CHECK(run({"interpret", "--model", "m", "--board", "-", "--top-k", "0"}).code == cli::kExitUsage);
  CHECK(run({"--help"}).code == cli::kExitOk);
}

TEST_CASE("generate is reproducible and its summary matches the file") {
  oracle::TempDir dir("gen");
  const auto a = (dir / "a.txt").string(), b = (dir / "b.txt").string();
  const Result ra = run({"generate", "--games", "12", "--playouts", "4", "--seed", "7", "--out", a});
  const Result rb = run({"generate", "--games", "12", "--playouts", "4", "--seed", "7", "--out", b});
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(ra.out == rb.out);
  const auto records = read_dataset(std::filesystem::path(a));
  const auto counts = class_counts(records);
  std::ostringstream want;
  want << "class counts: black=" << counts.at(1) << " white=" << counts.at(0);
  CHECK(ra.out.find(want.str()) != std::string::npos);
  CHECK(ra.out.find("records: " + std::to_string(records.size())) != std::string::npos);
  CHECK(ra.err.find("wrote") != std::string::npos);

  const Result js = run({"generate", "--games", "12", "--playouts", "4", "--seed", "7", "--out", b, "--format",
                         "structured"});
  const Json summary = Json::parse(js.out);
  CHECK(summary["records"] == records.size());
  CHECK(summary["classCounts"]["black"] == counts.at(1));
  std::int64_t per_move_total = 0;
  for (const auto& [m, c] : summary["perMoveCount"].items()) per_move_total += c["black"].get<int>() + c["white"].get<int>();
  CHECK(per_move_total == static_cast<std::int64_t>(records.size()));
}

TEST_CASE("train echoes the default hyperparameters") {
  oracle::TempDir dir("defaults");
  const auto data = (dir / "d.txt").string();
  REQUIRE(run({"generate", "--games", "3", "--playouts", "2", "--out", data}).code == 0);
  const Result r = run({"train", "--data", data, "--epochs", "1", "--out-model", (dir / "m").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("n=10000 T=8000 s=100") != std::string::npos);
  CHECK(r.out.find("Clauses = 10000, T = 8000, s = 100") != std::string::npos);
  CHECK(r.err.find("epoch 1 train accuracy") != std::string::npos);
}

TEST_CASE("a reloaded model reproduces the final logged training accuracy") {
  auto& a = shared();
  const auto model = (a.dir / "reload.hextm").string();
  const Result r = run({"train", "--data", a.data, "--clauses", "60", "-T", "30", "-s", "5", "--epochs", "3",
                        "--out-model", model, "--format", "structured"});
  REQUIRE(r.code == 0);
  const Json report = Json::parse(r.out);
  const double logged = report["epochAccuracy"].back().get<double>();
  const auto records = read_dataset(std::filesystem::path(a.data));
  const DataSplit parts = split(records, SplitConfig{});
  const ClauseBank bank = load_model(model);
  CHECK(evaluate(bank, parts.train).overall.accuracy() == logged);
  // The same value appears in the text log line for the last epoch.
  char pct[32];
  std::snprintf(pct, sizeof pct, "%.2f%%", 100.0 * logged);
  CHECK(r.err.find("epoch 3 train accuracy " + std::string(pct)) != std::string::npos);
}

TEST_CASE("malformed datasets are runtime failures with a location") {
  oracle::TempDir dir("bad");
  const auto bad = (dir / "bad.txt").string();
  std::ofstream(bad) << kDatasetHeader << "\n" << std::string(72, '0') << " 1 0\n" << "0101 1 2\n";
  const Result r = run({"train", "--data", bad, "--out-model", (dir / "m").string(), "--epochs", "1"});
  CHECK(r.code == cli::kExitFailure);
  CHECK(r.err.find("line 3") != std::string::npos);
  CHECK(run({"eval", "--data", bad, "--model", (dir / "missing").string()}).code == cli::kExitFailure);
}

TEST_CASE("eval reports are reproducible") {
  auto& a = shared();
  const auto r1 = (a.dir / "r1.json").string(), r2 = (a.dir / "r2.json").string();
  const Result e1 = run({"eval", "--model", a.model, "--data", a.data, "--report", r1});
  const Result e2 = run({"eval", "--model", a.model, "--data", a.data, "--report", r2});
  REQUIRE(e1.code == 0);
  CHECK(slurp(r1) == slurp(r2));
  CHECK(e1.out == e2.out);
  CHECK(e1.out.find("Tsetlin Machine") != std::string::npos);
}

TEST_CASE("interpret ranks k clauses per polarity") {
  auto& a = shared();
  const Result r = run({"interpret", "--model", a.model, "--data", a.data, "--alpha", "10", "--top-k", "10",
                        "--format", "structured"});
  REQUIRE(r.code == 0);
  const Json doc = Json::parse(r.out);
  CHECK(doc["global"]["positive"]["clauses"].size() == 10);
  CHECK(doc["global"]["negative"]["clauses"].size() == 10);
  CHECK(doc["global"]["positive"]["alpha"] == 10.0);
  CHECK_FALSE(doc.contains("local"));
  const Result text = run({"interpret", "--model", a.model, "--data", a.data, "--top-k", "10", "--polarity",
                           "negative"});
  REQUIRE(text.code == 0);
  CHECK(std::count(text.out.begin(), text.out.end(), '#') == 10);
  CHECK(text.out.find("negative polarity") != std::string::npos);
  CHECK(text.out.find("positive polarity") == std::string::npos);
}

TEST_CASE("interpret reads a board from standard input and both formats agree") {
  auto& a = shared();
  const std::string board = "......\n..B...\n...W..\n.B....\n......\n......\n";
  const Result text = run({"interpret", "--model", a.model, "--board", "-"}, board);
  const Result js = run({"interpret", "--model", a.model, "--board", "-", "--format", "structured"}, board);
  REQUIRE(text.code == 0);
  REQUIRE(js.code == 0);
  const Json local = Json::parse(js.out)["local"];
  CHECK(grid_after(text.out, "black literal counts") == local["blackCounts"].get<std::vector<int>>());
  CHECK(grid_after(text.out, "white literal counts") == local["whiteCounts"].get<std::vector<int>>());
  CHECK(text.out.find("voteSum " + std::to_string(local["prediction"]["voteSum"].get<int>())) != std::string::npos);

  const Result flat = run({"interpret", "--model", a.model, "--board", "-", "--format", "structured"},
                          "......" "..B..." "...W.." ".B...." "......" "......\n");
  CHECK(Json::parse(flat.out) == Json::parse(js.out));
  CHECK(run({"interpret", "--model", a.model, "--board", "-"}, "BBB\n").code == cli::kExitFailure);
}

TEST_CASE("interpret writes an SVG rendering on request") {
  auto& a = shared();
  const auto svg = (a.dir / "h.svg").string();
  REQUIRE(run({"interpret", "--model", a.model, "--board", "-", "--svg", svg}, std::string(36, '.')).code == 0);
  const std::string content = slurp(svg);
  CHECK(content.rfind("<svg", 0) == 0);
  CHECK(std::count(content.begin(), content.end(), '\n') > 36);
  const auto gallery = (a.dir / "g.svg").string();
  REQUIRE(run({"interpret", "--model", a.model, "--data", a.data, "--svg", gallery, "--bins", "5"}).code == 0);
  CHECK(slurp(gallery).find("score") != std::string::npos);
}

TEST_CASE("directory environment variables supply relative paths") {
  oracle::TempDir dir("env");
  setenv("HEXTM_DATA_DIR", dir.path.c_str(), 1);
  setenv("HEXTM_MODEL_DIR", dir.path.c_str(), 1);
  const Result g = run({"generate", "--games", "3", "--playouts", "2", "--out", "dataset.txt"});
  CHECK(g.code == 0);
  CHECK(std::filesystem::exists(dir / "dataset.txt"));
  // With both directories set, data and model flags may be omitted.
  const Result t = run({"train", "--clauses", "20", "-T", "10", "--epochs", "1"});
  CHECK(t.code == 0);
  CHECK(std::filesystem::exists(dir / "model.hextm"));
  CHECK(run({"eval"}).code == 0);
  unsetenv("HEXTM_DATA_DIR");
  unsetenv("HEXTM_MODEL_DIR");
  CHECK(run({"eval"}).code == cli::kExitUsage);
}
