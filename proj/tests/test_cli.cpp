// Behavioral tests of the command-line tool: exit codes, report schema,
// error reporting with line numbers, and byte-identical reruns.

#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <dgft/graph.hpp>
#include <dgft/io.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = DGFT_CLI_PATH;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("dgft_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
  const int status = std::system((kCli + " " + args + " > /dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("spectrum command writes basis files and a passing report") {
  TempDir tmp;
  dgft::save_graph(dgft::circulant_graph(3, {1}), tmp.file("g.txt"));
  REQUIRE(run("spectrum --graph " + tmp.file("g.txt") + " --out-dir " + tmp.file("out")) == 0);

  const json rep = json::parse(dgft::read_file(tmp.file("out/report.json")));
  REQUIRE(rep.at("command") == "spectrum");
  // pinned report schema
  std::set<std::string> keys;
  for (const auto& [k, v] : rep.items()) keys.insert(k);
  REQUIRE(keys == std::set<std::string>{"command", "detail", "inputs", "outputs", "pass",
                                        "residuals", "version"});
  REQUIRE(rep.at("detail").at("kernel_rank") == 1);
  for (const auto& [name, ok] : rep.at("pass").items()) CHECK(ok.get<bool>());
  // output paths are relative to the report's directory
  for (const auto& out : rep.at("outputs"))
    CHECK(fs::exists(tmp.path / "out" / out.get<std::string>()));

  const std::string sigma = dgft::read_file(tmp.file("out/sigma.csv"));
  CHECK(sigma.rfind("sigma\n0\n1.73205", 0) == 0);
}

TEST_CASE("spectrum of the edgeless pair reports the full kernel") {
  TempDir tmp;
  dgft::save_graph(dgft::DirectedGraph(2, {}), tmp.file("g.txt"));
  REQUIRE(run("spectrum --graph " + tmp.file("g.txt") + " --out-dir " + tmp.file("out")) == 0);
  const json rep = json::parse(dgft::read_file(tmp.file("out/report.json")));
  CHECK(rep.at("detail").at("kernel_rank") == 2);
}

TEST_CASE("malformed graph files exit with code 1") {
  TempDir tmp;
  dgft::write_file(tmp.file("bad.txt"), "n 3\n0 1 1.0\n0 oops 1.0\n");
  CHECK(run("spectrum --graph " + tmp.file("bad.txt") + " --out-dir " + tmp.file("out")) == 1);
  CHECK(run("spectrum --graph " + tmp.file("missing.txt") + " --out-dir " + tmp.file("o")) == 1);
  CHECK(run("nonsense-subcommand") == 1);
}

TEST_CASE("gft round-trips through the inverse subcommand") {
  TempDir tmp;
  dgft::save_graph(dgft::circulant_graph(8, {1, 2}), tmp.file("g.txt"));
  Eigen::VectorXd x(8);
  x << 1, -2, 0.5, 3, 0, 1, -1, 2;
  dgft::write_file(tmp.file("x.csv"), dgft::save_signal(x));

  REQUIRE(run("gft --graph " + tmp.file("g.txt") + " --signal " + tmp.file("x.csv") +
              " --out " + tmp.file("c.csv")) == 0);
  REQUIRE(run("igft --graph " + tmp.file("g.txt") + " --coeffs " + tmp.file("c.csv") +
              " --out " + tmp.file("back.csv")) == 0);
  const Eigen::VectorXd back = dgft::load_signal(tmp.file("back.csv"));
  CHECK((back - x).cwiseAbs().maxCoeff() <= 1e-10);

  const json rep = json::parse(dgft::read_file(tmp.file("report.json")));
  CHECK(rep.contains("residuals"));
}

TEST_CASE("gft constant signal on an eulerian graph has one nonzero coefficient") {
  TempDir tmp;
  dgft::save_graph(dgft::circulant_graph(5, {1}), tmp.file("g.txt"));
  dgft::write_file(tmp.file("x.csv"), dgft::save_signal(Eigen::VectorXd::Ones(5)));
  REQUIRE(run("gft --graph " + tmp.file("g.txt") + " --signal " + tmp.file("x.csv") +
              " --out " + tmp.file("c.csv")) == 0);
  const dgft::GftCoefficients c =
      dgft::parse_coefficients(dgft::read_file(tmp.file("c.csv")));
  CHECK(c.sum_block(0) == Catch::Approx(std::sqrt(5.0)));
  CHECK(c.sum_block.tail(4).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(c.diff_block.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("gft rejects dimension mismatches with exit 1") {
  TempDir tmp;
  dgft::save_graph(dgft::circulant_graph(5, {1}), tmp.file("g.txt"));
  dgft::write_file(tmp.file("x.csv"), dgft::save_signal(Eigen::VectorXd::Ones(4)));
  CHECK(run("gft --graph " + tmp.file("g.txt") + " --signal " + tmp.file("x.csv") +
            " --out " + tmp.file("c.csv")) == 1);
}

TEST_CASE("metrics subcommand emits the four measures") {
  TempDir tmp;
  dgft::save_graph(dgft::circulant_graph(6, {1}), tmp.file("g.txt"));
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(6, 0, 5);
  dgft::write_file(tmp.file("x.csv"), dgft::save_signal(x));
  REQUIRE(run("metrics --graph " + tmp.file("g.txt") + " --signal " + tmp.file("x.csv") +
              " --out " + tmp.file("m.csv")) == 0);
  const std::string csv = dgft::read_file(tmp.file("m.csv"));
  CHECK(csv.find("quadratic_variation,") != std::string::npos);
  CHECK(csv.find("l2_variation,") != std::string::npos);
  CHECK(csv.find("gdv,") != std::string::npos);
  CHECK(csv.find("dv,") != std::string::npos);
}

TEST_CASE("circulant-verify reports the frozen spectrum and passes") {
  TempDir tmp;
  REQUIRE(run("circulant-verify --n 4 --q 1 --out " + tmp.file("rep.json")) == 0);
  const json rep = json::parse(dgft::read_file(tmp.file("rep.json")));
  for (const auto& [name, ok] : rep.at("pass").items()) CHECK(ok.get<bool>());
  const auto sigma = rep.at("detail").at("sigma");
  CHECK(sigma.size() == 4);
  CHECK(std::stod(sigma[1].get<std::string>()) == Catch::Approx(std::sqrt(2.0)));
  CHECK(std::stod(sigma[3].get<std::string>()) == Catch::Approx(2.0));
}

TEST_CASE("eulerian-sweep reports symmetric frequencies on the 3-cycle") {
  TempDir tmp;
  dgft::save_graph(dgft::circulant_graph(3, {1}), tmp.file("g.txt"));
  REQUIRE(run("eulerian-sweep --graph " + tmp.file("g.txt") + " --steps 11 --out-dir " +
              tmp.file("out")) == 0);
  const json rep = json::parse(dgft::read_file(tmp.file("out/diagnostics.json")));
  CHECK(std::stod(rep.at("residuals").at("symmetry").get<std::string>()) <= 1e-9);
  CHECK(rep.at("pass").at("symmetry").get<bool>());
  CHECK(fs::exists(tmp.file("out/sweep.csv")));

  // non-Eulerian input is a usage error
  dgft::save_graph(dgft::DirectedGraph(2, {{0, 1, 1.0}}), tmp.file("ne.txt"));
  CHECK(run("eulerian-sweep --graph " + tmp.file("ne.txt") + " --out-dir " + tmp.file("o2")) ==
        1);
}

TEST_CASE("cli outputs are byte-identical across reruns") {
  TempDir tmp;
  const std::string config = R"({
  "graph": {"generator": "knn", "n": 30, "k": 3,
            "weight_low": 0.8, "weight_high": 1.2, "seed": 5},
  "signal": {"type": "smooth", "components": 5, "amplitude": 20.0, "count": 2, "seed": 6},
  "noise_variances": [4.0],
  "m_values": [8],
  "trials": 2,
  "master_seed": 7
})";
  dgft::write_file(tmp.file("cfg.json"), config);
  REQUIRE(run("denoise --config " + tmp.file("cfg.json") + " --out-dir " + tmp.file("a")) == 0);
  REQUIRE(run("denoise --config " + tmp.file("cfg.json") + " --out-dir " + tmp.file("b")) == 0);
  CHECK(dgft::read_file(tmp.file("a/trials.csv")) == dgft::read_file(tmp.file("b/trials.csv")));
  CHECK(dgft::read_file(tmp.file("a/report.json")) == dgft::read_file(tmp.file("b/report.json")));

  REQUIRE(run("generate --type cluster-cycle --clusters 3 --cluster-size 5 --out " +
              tmp.file("g1.txt")) == 0);
  REQUIRE(run("generate --type cluster-cycle --clusters 3 --cluster-size 5 --out " +
              tmp.file("g2.txt")) == 0);
  CHECK(dgft::read_file(tmp.file("g1.txt")) == dgft::read_file(tmp.file("g2.txt")));
  CHECK(dgft::load_graph(tmp.file("g1.txt")).order() == 15);
}

TEST_CASE("generate emits knn graphs reproducibly under a fixed seed") {
  TempDir tmp;
  const std::string args = "generate --type knn --n 25 --k 3 --weight-low 0.8 "
                           "--weight-high 1.2 --seed 9 --out ";
  REQUIRE(run(args + tmp.file("k1.txt")) == 0);
  REQUIRE(run(args + tmp.file("k2.txt")) == 0);
  CHECK(dgft::read_file(tmp.file("k1.txt")) == dgft::read_file(tmp.file("k2.txt")));
  const auto g = dgft::load_graph(tmp.file("k1.txt"));
  CHECK(g.order() == 25);
  CHECK(g.edges().size() == 75);
}
