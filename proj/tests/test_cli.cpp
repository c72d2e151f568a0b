#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "rmep/io.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RMEP_CLI_PATH) + " " + args + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  if (WIFEXITED(rc)) return WEXITSTATUS(rc);
  return -2;
}

std::string workdir() {
  const fs::path dir = fs::temp_directory_path() / "rmep_cli_test";
  fs::create_directories(dir);
  return dir.string();
}

std::string path_in(const std::string& name) { return workdir() + "/" + name; }

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::string current;
  for (char ch : text) {
    if (ch == '\n') {
      lines.push_back(current);
      current.clear();
    } else {
      current += ch;
    }
  }
  if (!current.empty()) lines.push_back(current);
  return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(current);
      current.clear();
    } else {
      current += ch;
    }
  }
  fields.push_back(current);
  return fields;
}

void write_example_problem(const std::string& path) {
  rmep::write_text(path, R"({
  "kind": "linear-rmep",
  "k": 2,
  "n": 2,
  "terms": {
    "00": {"rows": 3, "cols": 2, "re": [[1, 2], [3, 4], [3, 1]]},
    "10": {"rows": 3, "cols": 2, "re": [[1, 3], [5, 1], [1, 4]]},
    "01": {"rows": 3, "cols": 2, "re": [[4, 1], [1, 3], [4, 1]]}
  }
}
)");
}

}  // namespace

TEST_CASE("gen is deterministic for a fixed seed") {
  const std::string a = path_in("gen_a.json");
  const std::string b = path_in("gen_b.json");
  REQUIRE(run_cli("gen --kind linear-rmep --n 3 --k 2 --seed 5 --out " + a) == 0);
  REQUIRE(run_cli("gen --kind linear-rmep --n 3 --k 2 --seed 5 --out " + b) == 0);
  CHECK(rmep::read_text(a) == rmep::read_text(b));
  CHECK(rmep::read_problem(a).kind == "linear-rmep");
}

TEST_CASE("solve-linear emits one CSV row per eigenvalue") {
  const std::string problem = path_in("gen_solve.json");
  const std::string out = path_in("gen_solve.csv");
  REQUIRE(run_cli("gen --kind linear-rmep --n 4 --k 2 --seed 2 --out " + problem) == 0);
  REQUIRE(run_cli("solve-linear " + problem + " --out " + out) == 0);

  const auto rows = lines_of(rmep::read_text(out));
  REQUIRE(rows.size() == 11);
  CHECK(rows[0] == "re1,im1,re2,im2,residual,is_real");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto fields = fields_of(rows[i]);
    REQUIRE(fields.size() == 6);
    CHECK(std::stod(fields[4]) <= 1e-8);
  }
}

TEST_CASE("solve-linear reproduces the worked example") {
  const std::string problem = path_in("example.json");
  const std::string out = path_in("example.csv");
  write_example_problem(problem);
  REQUIRE(run_cli("solve-linear " + problem + " --out " + out) == 0);

  const auto rows = lines_of(rmep::read_text(out));
  REQUIRE(rows.size() == 4);
  const double want[3][2] = {{2.6393, 3.0435}, {-1.3577, 0.4365}, {0.4553, -1.8007}};
  for (const auto& w : want) {
    bool found = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto f = fields_of(rows[i]);
      REQUIRE(f.size() == 6);
      if (std::abs(std::stod(f[0]) - w[0]) <= 5e-4 && std::abs(std::stod(f[1])) <= 5e-4 &&
          std::abs(std::stod(f[2]) - w[1]) <= 5e-4 && std::abs(std::stod(f[3])) <= 5e-4) {
        CHECK(f[5] == "1");
        found = true;
      }
    }
    CHECK(found);
  }
}

TEST_CASE("solve-linear writes CSV to stdout when no output file is given") {
  const std::string problem = path_in("example_stdout.json");
  const std::string captured = path_in("example_stdout.txt");
  write_example_problem(problem);
  REQUIRE(run_cli("solve-linear " + problem + " > " + captured) == 0);
  const auto rows = lines_of(rmep::read_text(captured));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "re1,im1,re2,im2,residual,is_real");
}

TEST_CASE("solve-quadratic supports all three methods deterministically") {
  const std::string problem = path_in("quad.json");
  REQUIRE(run_cli("gen --kind quad-r2ep --n 2 --seed 3 --out " + problem) == 0);

  const std::string v1 = path_in("quad_v1.csv");
  const std::string v2 = path_in("quad_v2.csv");
  REQUIRE(run_cli("solve-quadratic " + problem + " --out " + v1) == 0);
  REQUIRE(run_cli("solve-quadratic " + problem + " --method vandermonde --out " + v2) == 0);
  CHECK(rmep::read_text(v1) == rmep::read_text(v2));
  CHECK(lines_of(rmep::read_text(v1)).size() == 13);

  const std::string pr = path_in("quad_project.csv");
  const std::string re = path_in("quad_rect.csv");
  REQUIRE(run_cli("solve-quadratic " + problem + " --method project --out " + pr) == 0);
  REQUIRE(run_cli("solve-quadratic " + problem + " --method rect --out " + re) == 0);
  CHECK(lines_of(rmep::read_text(pr)).size() == 13);
  CHECK(lines_of(rmep::read_text(re)).size() == 13);
}

TEST_CASE("macaulay size prints the dimension pair") {
  const std::string out = path_in("mac_size.txt");
  REQUIRE(run_cli("macaulay size --n 2 --k 2 --m 2 --out " + out) == 0);
  CHECK(rmep::read_text(out) == "rows,cols\n9,12\n");
}

TEST_CASE("macaulay solve distinguishes solver failures from usage errors") {
  const std::string problem = path_in("quad_mac.json");
  REQUIRE(run_cli("gen --kind quad-r2ep --n 2 --seed 4 --out " + problem) == 0);
  CHECK(run_cli("macaulay solve " + problem + " --m 3") == 2);
}

TEST_CASE("usage errors exit with code 1") {
  CHECK(run_cli("solve-linear " + path_in("missing.json")) == 1);
  CHECK(run_cli("--definitely-not-a-flag") == 1);
  CHECK(run_cli("gen --kind bogus --out " + path_in("bogus.json")) == 1);

  const std::string quad = path_in("quad_kind.json");
  REQUIRE(run_cli("gen --kind quad-r2ep --n 2 --seed 6 --out " + quad) == 0);
  CHECK(run_cli("solve-linear " + quad) == 1);

  CHECK(run_cli("--help > /dev/null") == 0);
}

TEST_CASE("arma11 writes eigenvalues and a stationary sidecar") {
  const std::string series = path_in("y5.txt");
  rmep::write_text(series, "1.3 -0.7 0.45 0.21 -1.1\n");
  const std::string out = path_in("arma.csv");
  REQUIRE(run_cli("arma11 " + series + " --out " + out) == 0);

  const auto rows = lines_of(rmep::read_text(out));
  REQUIRE(rows.size() == 50);
  CHECK(rows[0] == "re1,im1,re2,im2,residual,is_real");

  const std::string sidecar = path_in("arma-stationary.csv");
  const auto st = lines_of(rmep::read_text(sidecar));
  REQUIRE(st.size() >= 2);
  CHECK(st[0] == "param1,param2,objective,kind,admissible");
}

TEST_CASE("grid writes samples plus an axes sidecar") {
  const std::string series = path_in("y5_grid.txt");
  rmep::write_text(series, "1.3 -0.7 0.45 0.21 -1.1\n");
  const std::string out = path_in("grid.csv");
  REQUIRE(run_cli("grid --model arma11 " + series + " --grid-steps 3 --out " + out) == 0);

  const auto rows = lines_of(rmep::read_text(out));
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) CHECK(fields_of(row).size() == 3);

  const std::string axes = rmep::read_text(out + ".axes.json");
  CHECK(axes.find("\"model\"") != std::string::npos);
  CHECK(axes.find("\"x\"") != std::string::npos);
}
