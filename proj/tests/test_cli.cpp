// End-to-end runs of the command-line binary; the path comes in through
// the CARA_CLI_PATH compile definition.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace {

const std::string kCli = CARA_CLI_PATH;

struct TempDir {
  std::filesystem::path dir;
  TempDir() {
    dir = std::filesystem::temp_directory_path() /
          ("cara_cli_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
  }
  ~TempDir() { std::filesystem::remove_all(dir); }
  std::string file(const std::string& name) const { return (dir / name).string(); }
  void put(const std::string& name, const std::string& content) const {
    std::ofstream out(file(name));
    out << content;
  }
};

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " >/dev/null 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("help exits zero, unknown flags do not") {
  CHECK(run("--help") == 0);
  CHECK(run("decompose --help") == 0);
  CHECK(run("--no-such-flag") != 0);
  CHECK(run("decompose --bogus x") != 0);
  CHECK(run("") != 0);  // a subcommand is required
}

TEST_CASE("decompose pipeline equals the identity expectation") {
  TempDir tmp;
  tmp.put("v.txt", "2 2\n1 0\n0 1\n");
  tmp.put("u.txt", "1\n0\n");
  const std::string out = tmp.file("out.json");
  REQUIRE(run("decompose --matrix " + tmp.file("v.txt") + " --target " + tmp.file("u.txt") +
              " --eps 0.1 --out " + out) == 0);
  const auto doc = nlohmann::json::parse(slurp(out));
  CHECK(doc["schema"] == 1);
  CHECK(doc["result"]["entries"].size() == 1);
  CHECK(doc["result"]["entries"][0]["id"] == 0);
  CHECK(doc["result"]["entries"][0]["weight"] == 1.0);
  CHECK(doc["result"]["residual"] == 0.0);
}

TEST_CASE("decompose reports input errors with exit code 2") {
  TempDir tmp;
  tmp.put("v.txt", "2 2\n1 0\n0 1\n");
  tmp.put("u.txt", "1\n0\n0.5\n");  // dimension mismatch
  CHECK(run("decompose --matrix " + tmp.file("v.txt") + " --target " + tmp.file("u.txt") +
            " --eps 0.1") == 2);

  tmp.put("bad.txt", "2 2\n1 0\nx y\n");
  CHECK(run("decompose --matrix " + tmp.file("bad.txt") + " --target " + tmp.file("u.txt") +
            " --eps 0.1") == 2);
}

TEST_CASE("lowerbound hadamard feeds decompose") {
  TempDir tmp;
  const std::string v = tmp.file("h8.txt"), u = tmp.file("u8.txt");
  REQUIRE(run("lowerbound hadamard --n 8 --p 2 --out-matrix " + v + " --out-target " + u +
              " --eps 0.4 --out " + tmp.file("had.json")) == 0);
  REQUIRE(run("decompose --matrix " + v + " --target " + u + " --p 2 --eps 0.4 --out " +
              tmp.file("dec.json")) == 0);

  const auto had = nlohmann::json::parse(slurp(tmp.file("had.json")));
  const auto dec = nlohmann::json::parse(slurp(tmp.file("dec.json")));
  CHECK(had["result"]["certificate"]["bound_ok"] == true);
  // The pipeline run must match the in-process solve bit for bit.
  CHECK(dec["result"]["residual"] == had["result"]["combination"]["residual"]);
  CHECK(dec["result"]["entries"] == had["result"]["combination"]["entries"]);
}

TEST_CASE("runs are byte-identical across repeats") {
  TempDir tmp;
  tmp.put("v.txt", "3 4\n1 0 0\n0 1 0\n0 0 1\n0.5 0.5 0\n");
  tmp.put("u.txt", "0.4\n0.4\n0.2\n");
  const std::string out1 = tmp.file("a.json"), out2 = tmp.file("b.json");
  REQUIRE(run("decompose --matrix " + tmp.file("v.txt") + " --target " + tmp.file("u.txt") +
              " --eps 0.05 --seed 7 --out " + out1) == 0);
  REQUIRE(run("decompose --matrix " + tmp.file("v.txt") + " --target " + tmp.file("u.txt") +
              " --eps 0.05 --seed 7 --out " + out2) == 0);
  CHECK(slurp(out1) == slurp(out2));

  // Serial and parallel kernels produce the same bytes too.
  const std::string out3 = tmp.file("c.json");
  REQUIRE(run("decompose --matrix " + tmp.file("v.txt") + " --target " + tmp.file("u.txt") +
              " --eps 0.05 --seed 7 --serial --out " + out3) == 0);
  CHECK(slurp(out1) == slurp(out3));
}

TEST_CASE("matroid rounding on the K4 graphic matroid") {
  TempDir tmp;
  tmp.put("k4.txt", "1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n");
  tmp.put("x.txt", "0.5\n0.5\n0.5\n0.5\n0.5\n0.5\n");
  const std::string out = tmp.file("out.json");
  REQUIRE(run("matroid-round --kind graphic --matroid " + tmp.file("k4.txt") + " --target " +
              tmp.file("x.txt") + " --p 2 --eps 0.1 --out " + out) == 0);
  const auto doc = nlohmann::json::parse(slurp(out));
  CHECK(doc["result"]["marginal_error"].get<double>() <= 0.1);
  CHECK(doc["result"]["support"].get<int>() <= 1200);  // ceil(4 * 3 / 0.01)
  // Each base is a spanning tree of K4.
  for (const auto& base : doc["result"]["bases"]) CHECK(base["base"].size() == 3);
}

TEST_CASE("decompose can require eps with exit code 3") {
  TempDir tmp;
  tmp.put("v.txt", "2 2\n1 0\n0 1\n");
  tmp.put("far.txt", "2\n0\n");
  CHECK(run("decompose --matrix " + tmp.file("v.txt") + " --target " + tmp.file("far.txt") +
            " --eps 0.1 --radius 1 --assert-membership") == 3);
}

TEST_CASE("matroid rounding on uniform and partition matroids") {
  TempDir tmp;
  tmp.put("x.txt", "0.5\n0.5\n");
  REQUIRE(run("matroid-round --kind uniform --ground-size 2 --rank 1 --target " +
              tmp.file("x.txt") + " --p 2 --eps 0.1 --out " + tmp.file("u.json")) == 0);
  const auto uni = nlohmann::json::parse(slurp(tmp.file("u.json")));
  CHECK(uni["result"]["marginal_error"].get<double>() <= 0.1);

  tmp.put("blocks.txt", "1 1 2\n1 3 4\n");
  tmp.put("x4.txt", "0.5\n0.5\n0.5\n0.5\n");
  REQUIRE(run("matroid-round --kind partition --matroid " + tmp.file("blocks.txt") +
              " --target " + tmp.file("x4.txt") + " --p 2 --eps 0.1 --out " +
              tmp.file("p.json")) == 0);
  const auto part = nlohmann::json::parse(slurp(tmp.file("p.json")));
  CHECK(part["result"]["marginal_error"].get<double>() <= 0.1);
  // Every base takes one element per block.
  for (const auto& base : part["result"]["bases"]) {
    REQUIRE(base["base"].size() == 2);
    CHECK(base["base"][0].get<int>() <= 2);
    CHECK(base["base"][1].get<int>() >= 3);
  }
}

TEST_CASE("svm training with a precomputed kernel file") {
  TempDir tmp;
  tmp.put("d.txt", "+1 1:1\n-1 1:-1\n");
  tmp.put("k.txt", "2 2\n1 -1\n-1 1\n");
  const std::string out = tmp.file("out.json");
  REQUIRE(run("svm-train --data " + tmp.file("d.txt") + " --kernel precomputed --kmatrix " +
              tmp.file("k.txt") + " --nu 1 --eps 0.1 --refine-spectral --out " + out) == 0);
  const auto doc = nlohmann::json::parse(slurp(out));
  CHECK(doc["result"]["objective"].get<double>() == doctest::Approx(4.1));
}

TEST_CASE("path stripping returns the single path when unique") {
  TempDir tmp;
  tmp.put("line.txt", "3 2 1 3\n1 2 1\n2 3 1\n1 2 3\n");
  const std::string out = tmp.file("out.json");
  REQUIRE(run("path-strip --dag " + tmp.file("line.txt") + " --eps 0.1 --out " + out) == 0);
  const auto doc = nlohmann::json::parse(slurp(out));
  REQUIRE(doc["result"]["paths"].size() == 1);
  CHECK(doc["result"]["paths"][0]["weight"] == 1.0);
  CHECK(doc["result"]["paths"][0]["nodes"] == nlohmann::json::array({1, 2, 3}));
  CHECK(doc["result"]["flow_error"].get<double>() <= 1e-12);
}

TEST_CASE("path stripping recovers a half/half split") {
  TempDir tmp;
  tmp.put("diamond.txt", "4 4 1 4\n1 2 0.5\n2 4 0.5\n1 3 0.5\n3 4 0.5\n1 2 3 4\n");
  const std::string out = tmp.file("out.json");
  REQUIRE(run("path-strip --dag " + tmp.file("diamond.txt") + " --eps 0.1 --out " + out) == 0);
  const auto doc = nlohmann::json::parse(slurp(out));
  CHECK(doc["result"]["flow_error"].get<double>() <= 0.1);
  REQUIRE(doc["result"]["paths"].size() == 2);
  for (const auto& path : doc["result"]["paths"])
    CHECK(std::abs(path["weight"].get<double>() - 0.5) <= 0.1);
}

TEST_CASE("path stripping rejects broken conservation with code 2") {
  TempDir tmp;
  tmp.put("broken.txt", "4 4 1 4\n1 2 0.5\n2 4 0.4\n1 3 0.5\n3 4 0.5\n1 2 3 4\n");
  CHECK(run("path-strip --dag " + tmp.file("broken.txt") + " --eps 0.1") == 2);
}

TEST_CASE("submodular minimization pipeline") {
  TempDir tmp;
  // Cut of a 2-clique with an isolated vertex: minimum 0 at the empty set.
  tmp.put("g.txt", "1 2 1\n2 3 0\n");
  const std::string out = tmp.file("out.json");
  REQUIRE(run("submod-min --family cut --input " + tmp.file("g.txt") + " --mode exact --out " +
              out) == 0);
  const auto doc = nlohmann::json::parse(slurp(out));
  CHECK(doc["result"]["value"] == 0.0);
  CHECK(doc["result"]["minimizer_set"].empty());
  CHECK(doc["result"]["converged"] == true);
  CHECK(doc["result"]["queries"].get<long>() > 0);

  tmp.put("w.txt", "2\n-1\n3\n");
  REQUIRE(run("submod-min --family modular --input " + tmp.file("w.txt") + " --mode exact --out " +
              tmp.file("mod.json")) == 0);
  const auto mod = nlohmann::json::parse(slurp(tmp.file("mod.json")));
  CHECK(mod["result"]["value"] == -1.0);
  CHECK(mod["result"]["minimizer_set"] == nlohmann::json::array({2}));
}

TEST_CASE("svm training pipeline") {
  TempDir tmp;
  tmp.put("d.txt", "+1 1:1\n-1 1:-1\n");
  const std::string out = tmp.file("out.json");
  REQUIRE(run("svm-train --data " + tmp.file("d.txt") + " --kernel linear --nu 1 --eps 0.1 "
              "--out " + out) == 0);
  const auto doc = nlohmann::json::parse(slurp(out));
  CHECK(doc["result"]["objective"].get<double>() == doctest::Approx(4.1));
  CHECK(doc["result"]["nnz_lambda"] == 2);

  // Infeasible nu: one negative point but eta forces two per class.
  tmp.put("bad.txt", "+1 1:1\n+1 1:0.5\n+1 1:0.25\n-1 1:-1\n");
  CHECK(run("svm-train --data " + tmp.file("bad.txt") + " --kernel linear --nu 1 --eps 0.1") == 2);
}

TEST_CASE("lowerbound random emits a CSV report") {
  TempDir tmp;
  const std::string csv = tmp.file("rep.csv");
  REQUIRE(run("lowerbound random --n 128 --k 4 --eps 0.2 --seeds 3 --samples 20 --csv " + csv +
              " --out " + tmp.file("out.json")) == 0);
  const std::string text = slurp(csv);
  CHECK(text.find("seed,n,p,eps,k") == 0);
  int lines = 0;
  for (char ch : text)
    if (ch == '\n') ++lines;
  CHECK(lines == 4);  // header + 3 seeds
  const auto doc = nlohmann::json::parse(slurp(tmp.file("out.json")));
  CHECK(doc["result"]["total_violations"] == 0);
}
