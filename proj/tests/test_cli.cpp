#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ncsim/json_io.hpp"

using namespace ncsim;

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

CommandResult run_ncsim(const std::string& args, const std::string& tag) {
  const std::string log = std::string("cli_") + tag + ".log";
  const std::string cmd = std::string(NCSIM_BIN) + " " + args + " > " + log + " 2>&1";
  const int status = std::system(cmd.c_str());
  CommandResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream buffer;
  buffer << in.rdbuf();
  result.output = buffer.str();
  return result;
}

std::vector<std::string> data_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find("\"timing\"") != std::string::npos) continue;  // wall clock varies
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("simulate writes a deterministic JSONL series") {
  const std::string args =
      "simulate --N 3 --p 0.5 --q 0.5 --r 0.5 --steps 2000 --seed 42 --track 0,1 "
      "--out sim_rerun.jsonl";
  const CommandResult first = run_ncsim(args, "sim_a");
  REQUIRE(first.exit_code == 0);
  const auto a = data_lines("sim_rerun.jsonl");
  const CommandResult second = run_ncsim(args, "sim_b");
  REQUIRE(second.exit_code == 0);
  const auto b = data_lines("sim_rerun.jsonl");
  REQUIRE(!a.empty());
  CHECK(a == b);

  // headers first, then checkpoints, then the summary
  CHECK(a.front().find("\"header\"") != std::string::npos);
  CHECK(a.back().find("\"summary\"") != std::string::npos);
  CHECK(a.front().find("xoshiro256++") != std::string::npos);

  // every line parses, and doubles survive a parse/dump round trip exactly
  for (const std::string& line : a) {
    const json parsed = json::parse(line);
    CHECK(parsed.dump() == line);
  }
}

TEST_CASE("simulate can emit a gnuplot stub and asymptotics summaries") {
  const CommandResult res = run_ncsim(
      "simulate --N 3 --p 0.5 --q 0.5 --r 0.5 --steps 500 --seed 4 --out sim_plot.jsonl "
      "--gnuplot-stub sim_plot.gp",
      "sim_plot");
  REQUIRE(res.exit_code == 0);
  std::ifstream gp("sim_plot.gp");
  std::stringstream buf;
  buf << gp.rdbuf();
  CHECK(buf.str().find("set logscale xy") != std::string::npos);
  CHECK(buf.str().find("sim_plot.jsonl") != std::string::npos);

  const auto lines = data_lines("sim_plot.jsonl");
  const json summary = json::parse(lines.back());
  const json& replica0 = summary["summary"]["replicas"][0];
  CHECK(replica0["asymptotics"]["ratio_limit"] == 0.4);
  CHECK(replica0["asymptotics"]["tracked"].contains("0"));
}

TEST_CASE("simulate rejects out-of-range probabilities with exit 2") {
  const CommandResult res =
      run_ncsim("simulate --N 3 --p 1.2 --q 0.5 --r 0.5 --steps 10 --out bad.jsonl", "bad_p");
  CHECK(res.exit_code == 2);
  CHECK(res.output.find("p must satisfy") != std::string::npos);
}

TEST_CASE("simulate reads params from a JSON config, flags win") {
  {
    std::ofstream cfg("cli_params.json");
    cfg << R"({"N": 4, "p": 0.5, "q": 0.25, "r": 0.75})";
  }
  const CommandResult res = run_ncsim(
      "simulate --config cli_params.json --q 0.5 --steps 50 --seed 1 --out sim_cfg.jsonl",
      "sim_cfg");
  REQUIRE(res.exit_code == 0);
  const auto lines = data_lines("sim_cfg.jsonl");
  const json header = json::parse(lines.front());
  CHECK(header["header"]["config"]["params"]["N"] == 4);
  CHECK(header["header"]["config"]["params"]["q"] == 0.5);   // flag override
  CHECK(header["header"]["config"]["params"]["r"] == 0.75);  // from config
}

TEST_CASE("verify subset run exits clean and reports checks") {
  const CommandResult res = run_ncsim(
      "verify --only martingale,supermartingale --k 1,2,3 --steps 2000 --seed 42 "
      "--out verify_subset.json",
      "verify_subset");
  REQUIRE(res.exit_code == 0);
  std::ifstream in("verify_subset.json");
  json report;
  in >> report;
  CHECK(report["passed"] == true);
  REQUIRE(report["checks"].is_array());
  bool saw_martingale = false;
  for (const auto& check : report["checks"]) {
    if (check["name"] == "martingale.residual") {
      saw_martingale = true;
      CHECK(check["pass"] == true);
      CHECK(check["statistic"].get<double>() <= 1e-8);
    }
  }
  CHECK(saw_martingale);
}

TEST_CASE("verify with a corrupted b table fails with exit 1") {
  const CommandResult res = run_ncsim(
      "verify --corrupt b-table --only martingale.residual --steps 2000 --out corrupt.json",
      "verify_corrupt");
  CHECK(res.exit_code == 1);
}

TEST_CASE("verify rejects unknown corruption targets with exit 2") {
  const CommandResult res =
      run_ncsim("verify --corrupt z-table --only martingale.residual", "verify_badcorrupt");
  CHECK(res.exit_code == 2);
}

TEST_CASE("oracle-check emits per-state residual rows") {
  const CommandResult res = run_ncsim(
      "oracle-check --N 3 --p 0.5 --q 0.5 --r 0.5 --states 5 --seed 7 --out oracle.json",
      "oracle");
  REQUIRE(res.exit_code == 0);
  std::ifstream in("oracle.json");
  json report;
  in >> report;
  REQUIRE(report["states"].size() == 5);
  for (const auto& row : report["states"]) {
    CHECK(row["ok"] == true);
    CHECK(row["mass_error"].get<double>() <= 1e-12);
  }
}

TEST_CASE("sweep emits one row per grid cell with exact alpha columns") {
  const CommandResult res = run_ncsim(
      "sweep --N-grid 3 --p-grid 0.5 --q-grid 0.3,0.5,0.8 --r-grid 0.3,0.5,0.8 "
      "--steps 2000 --replicas 2 --seed 9 --out sweep.csv",
      "sweep");
  REQUIRE(res.exit_code == 0);
  std::ifstream in("sweep.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# {", 0) == 0);  // header object echo
  std::getline(in, line);
  CHECK(line == "N,p,q,r,alpha,alpha2_over_alpha,slope_W,slope_D,ratio_DW,V_over_pn");
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    REQUIRE(fields.size() == 10);
    const ModelParams cell{std::stoi(fields[0]), std::stod(fields[1]), std::stod(fields[2]),
                           std::stod(fields[3])};
    // 17-significant-digit round trip reproduces the coefficient exactly
    CHECK(std::stod(fields[4]) == derive_coefficients(cell).alpha);
  }
  CHECK(rows == 9);
}

TEST_CASE("sweep marks alpha = 0 cells NA in the asymptotic columns") {
  const CommandResult res = run_ncsim(
      "sweep --N-grid 3 --p-grid 1.0 --q-grid 0.5 --r-grid 0.0 --steps 2000 --replicas 1 "
      "--out sweep_na.csv",
      "sweep_na");
  REQUIRE(res.exit_code == 0);
  std::ifstream in("sweep_na.csv");
  std::string line, last;
  while (std::getline(in, line)) {
    if (!line.empty()) last = line;
  }
  CHECK(last.find(",NA,NA,NA,") != std::string::npos);
}

TEST_CASE("sweep refuses oversized grids with exit 2") {
  const CommandResult res = run_ncsim(
      "sweep --N-grid 3 --p-grid 0.1,0.2,0.3,0.4,0.5 --q-grid 0.1,0.2,0.3,0.4,0.5 "
      "--r-grid 0.1,0.2,0.3,0.4,0.5 --max-cells 100 --out sweep_big.csv",
      "sweep_big");
  CHECK(res.exit_code == 2);
  CHECK(res.output.find("cells") != std::string::npos);
}

TEST_CASE("unknown flags exit 2") {
  const CommandResult res = run_ncsim("simulate --frobnicate 3 --out x.jsonl", "badflag");
  CHECK(res.exit_code == 2);
}

}  // TEST_SUITE
