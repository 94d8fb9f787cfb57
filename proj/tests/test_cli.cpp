#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "restart/io.hpp"

using namespace restart;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string write(const std::string& name, const std::string& text) {
  const std::string path = "cli_" + name;
  std::ofstream(path) << text;
  return path;
}

Run run(const std::string& args) {
  const std::string out = "cli_stdout.txt";
  const std::string cmd = std::string(RESTART_CLI) + " " + args + " > " + out + " 2> cli_stderr.txt";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

// Drops the leading "# ..." banner of a CSV document.
std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

const std::string kExp = write("exp.json", R"({"family":"exponential","params":{"rate":1}})");
const std::string kWeibull = write("weibull.json", R"({"family":"weibull","params":{"shape":2}})");
const std::string kLevy = write("levy.json", R"({"family":"levy_first_passage","params":{"level":1}})");
const std::string kBad = write("bad.json", "{\"family\": ");

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run("classify --spec " + kBad).code == 65);
  CHECK(run("classify --spec does_not_exist.json").code == 74);
  CHECK(run("classify").code == 64);
  CHECK(run("frobnicate").code == 64);
  CHECK(run("transform --spec " + kExp + " --reset det:-1").code == 65);
  CHECK(run("simulate --spec " + kExp + " --reset det:0.5 --max-cycles 1 --replicates 500").code == 3);
}

TEST_CASE("classify reports the exponential flag and echoes its config") {
  const auto r = run("classify --spec " + kExp + " --pair-points 40 --t-points 40 --r-points 40 --lfold 2");
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["result"]["exponential"] == true);
  CHECK(j["config"]["spec"]["family"] == "exponential");
  CHECK(j.contains("version"));
}

TEST_CASE("classify with a shape override") {
  const auto r = run("--format csv classify --spec " + kWeibull +
                     " --shape 0.5 --pair-points 40 --t-points 40 --r-points 40 --lfold 2");
  REQUIRE(r.code == 0);
  for (const char* name : {"no_bigger_reset,holds", "no_bigger_deterministic_reset,holds", "no_bigger_exp_reset,holds",
                           "no_bigger_mean,holds", "no_bigger_deterministic_mean,holds", "no_bigger_exp_mean,holds"}) {
    CHECK(r.out.find(name) != std::string::npos);
  }
}

TEST_CASE("human report renders the verdict matrix") {
  const auto r = run("--format human classify --spec " + kExp + " --pair-points 30 --t-points 30 --r-points 30");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("condition") != std::string::npos);
  CHECK(r.out.find("exponential: yes") != std::string::npos);
}

TEST_CASE("transform: exponential stays put, weibull(2) grows") {
  auto r = run("--format csv transform --spec " + kExp + " --reset exp:1 --points 21");
  REQUIRE(r.code == 0);
  for (const auto& row : csv_rows(r.out)) CHECK(std::abs(row[1] - row[2]) <= 1e-6);

  r = run("--format csv transform --spec " + kWeibull + " --reset det:1 --points 21");
  REQUIRE(r.code == 0);
  for (const auto& row : csv_rows(r.out)) CHECK(row[2] >= row[1]);

  r = run("--format csv transform --spec " + kWeibull +
          " --shape 0.5 --reset exp:1 --branching 2 --points 11 --replicates 20000");
  REQUIRE(r.code == 0);
  for (const auto& row : csv_rows(r.out)) CHECK(row[2] <= row[1] + 4.0 * row[3] + 1e-12);
}

TEST_CASE("transform output is a valid spec") {
  const auto r = run("-o cli_transformed.json transform --spec " + kWeibull + " --reset det:1 --points 31");
  REQUIRE(r.code == 0);
  const auto again = run("--format csv transform --spec cli_transformed.json --reset det:0.5 --points 5");
  CHECK(again.code == 0);
}

TEST_CASE("simulate is reproducible") {
  const std::string args = "simulate --spec " + kExp + " --reset det:0.5 --replicates 20000 --seed 42";
  REQUIRE(run("-o cli_sim_a.json " + args).code == 0);
  REQUIRE(run("-o cli_sim_b.json " + args + " --chunks 4").code == 0);
  CHECK(slurp("cli_sim_a.json") == slurp("cli_sim_b.json"));
  const Json j = Json::parse(slurp("cli_sim_a.json"));
  CHECK(std::abs(j["result"]["mean"].get<double>() - 1.0) <= 4.0 * j["result"]["mean_standard_error"].get<double>());
}

TEST_CASE("optimize") {
  auto r = run("optimize --spec " + kLevy);
  REQUIRE(r.code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["result"]["best_deterministic"]["r"].is_number());
  CHECK(j["result"]["sup_diverges"] == true);

  r = run("--format human optimize --spec " + kWeibull + " --shape 1.5");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("restart harmful") != std::string::npos);

  r = run("optimize --spec " + kExp);
  j = Json::parse(r.out);
  CHECK(j["result"]["sup"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(j["result"]["inf"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("probe") {
  const auto r = run("--format csv probe --spec " + kExp + " -l 2 --points 11");
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 11);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][1] < 0.0);
}
