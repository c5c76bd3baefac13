#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "trees/counting.hpp"
#include "trees/io.hpp"

using namespace trees;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "trees_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run_cli(const std::string& args) {
  const fs::path out = work_dir() / "stdout.txt";
  const fs::path err = work_dir() / "stderr.txt";
  const std::string cmd =
      std::string(TREES_CLI_PATH) + " " + args + " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

}  // namespace

TEST_CASE("count prints a bare value for a single order") {
  const RunResult r = run_cli("count --kind free --delta 4 --n 8");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "18\n");
}

TEST_CASE("count range output matches the library series") {
  const RunResult r = run_cli("count --kind rooted --delta 3 --n 1 --n-max 6");
  CHECK(r.exit_code == 0);
  const CountingBundle b = counting_series(3, 6);
  std::string expected = "n,quantity,value\n";
  for (int n = 1; n <= 6; ++n)
    expected += std::to_string(n) + ",rooted," + fmt_rat(b.r.coeff(n)) + "\n";
  CHECK(r.out == expected);
}

TEST_CASE("x0 reports the cubic singularity") {
  const RunResult r = run_cli("x0 --delta 3 --order 300 --tol 1e-7");
  CHECK(r.exit_code == 0);
  double x0 = 0.0, p = 0.0;
  REQUIRE(std::sscanf(r.out.c_str(), "x0 = %lf\np_at_x0 = %lf", &x0, &p) == 2);
  CHECK(x0 == doctest::Approx(0.4026975).epsilon(5e-4));
  CHECK(p == doctest::Approx(1.0 / x0 - 1.0).epsilon(5e-3));  // p(x0) = 1/x0 - 1 at delta 3
}

TEST_CASE("mu of the single vertex is exactly one") {
  const RunResult r = run_cli("mu --delta 4 --subtree \"\" --order 200");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "mu = 1.000000\n");
}

TEST_CASE("dist table lists the known order-4 histogram") {
  const RunResult r = run_cli("dist --delta 4 --subtree \"0 1\" --n 4");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "n,k,count\n4,2,1\n4,3,1\n");
}

TEST_CASE("estrada outputs are byte-identical across runs and thread counts") {
  const fs::path a = work_dir() / "s1.csv";
  const fs::path b = work_dir() / "s2.csv";
  const fs::path c = work_dir() / "s4.csv";
  const std::string base = "estrada --n 7 --delta 4 --terms 2 --output ";
  const RunResult r1 = run_cli(base + a.string());
  const RunResult r2 = run_cli(base + b.string());
  const RunResult r3 = run_cli(base + c.string() + " --threads 4");
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  CHECK(r3.exit_code == 0);
  const std::string s1 = slurp(a);
  CHECK(!s1.empty());
  CHECK(s1 == slurp(b));
  CHECK(s1 == slurp(c));
  CHECK(r1.out == r3.out);
}

TEST_CASE("estrada json mirrors the csv fields") {
  const fs::path p = work_dir() / "s.json";
  const RunResult r = run_cli("estrada --n 4 --delta 4 --terms 2 --format json --output " +
                              p.string());
  CHECK(r.exit_code == 0);
  const nlohmann::json doc = nlohmann::json::parse(slurp(p));
  REQUIRE(doc.is_array());
  REQUIRE(doc.size() == 2);
  for (const auto& row : doc) {
    CHECK(row.contains("n"));
    CHECK(row.contains("tree"));
    CHECK(row.contains("zagreb"));
    CHECK(row.contains("ee"));
    CHECK(row["n"] == "4");
  }
  CHECK(doc[0]["zagreb"] != doc[1]["zagreb"]);  // path and star
}

TEST_CASE("estrada plot writes a scatter file") {
  const fs::path p = work_dir() / "plot.csv";
  const RunResult r = run_cli("estrada --n 5 --delta 3 --output " + p.string() + " --plot");
  CHECK(r.exit_code == 0);
  const std::string svg = slurp(fs::path(p.string() + ".svg"));
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("verify runs a single fast suite") {
  const RunResult r = run_cli("verify --suite cycle-index-derivative");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("[PASS] cycle-index-derivative", 0) == 0);
}

TEST_CASE("exit codes separate validation, refusal, and resource errors") {
  CHECK(run_cli("count --delta 4").exit_code == 1);            // no order given
  CHECK(run_cli("count --delta 1 --n 3").exit_code == 1);      // degree bound too small
  CHECK(run_cli("nonsense").exit_code == 1);                   // unknown subcommand
  CHECK(run_cli("verify --suite nonsense").exit_code == 1);    // unknown suite
  CHECK(run_cli("dist --delta 4 --subtree \"0 9\" --n 5").exit_code == 1);  // bad parent array
  const RunResult cap = run_cli("mu --delta 4 --subtree \"0 1 2 3\" --order 80");
  CHECK(cap.exit_code == 3);  // depth-4 class family exceeds the cap
  CHECK(cap.err.find("error:") != std::string::npos);
}

TEST_CASE("help exits cleanly") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("count --help").exit_code == 0);
}

TEST_CASE("table rendering escapes and mirrors") {
  const Table t{{"a", "b"}, {{"1,x", "pl\"ain"}, {"2", "y"}}};
  CHECK(render_table(t, OutputFormat::csv) == "a,b\n\"1,x\",\"pl\"\"ain\"\n2,y\n");
  const nlohmann::json doc = nlohmann::json::parse(render_table(t, OutputFormat::json));
  CHECK(doc[0]["a"] == "1,x");
  CHECK(doc[0]["b"] == "pl\"ain");
  CHECK(doc[1]["b"] == "y");
  CHECK_THROWS_AS(render_table(Table{{"a"}, {{"1", "2"}}}, OutputFormat::csv),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_format("xml"), std::invalid_argument);
}

TEST_CASE("number formatting is exact and round-trip") {
  CHECK(fmt_rat(rat_of(3, 4)) == "3/4");
  CHECK(fmt_rat(rat_of(-8) / rat_of(2)) == "-4");
  CHECK(fmt_int(Int(0)) == "0");
  CHECK(std::stod(fmt_double(0.1)) == 0.1);
  CHECK(std::stod(fmt_double(1.0 / 3.0)) == 1.0 / 3.0);
}
