#include <filesystem>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "rmep/io.hpp"
#include "support.hpp"

using namespace rmep;
using testutil::random_complex;
using testutil::seeded;

namespace {

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("rmep_io_test_" + name)).string();
}

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

bool mentions(const std::string& message, const std::string& needle) {
  return message.find(needle) != std::string::npos;
}

ProblemFile quad_problem() {
  auto rng = seeded(40);
  ProblemFile pf;
  pf.kind = "quad-r2ep";
  pf.k = 2;
  pf.n = 2;
  for (const char* key : {"00", "10", "01", "20", "11", "02"})
    pf.terms.emplace(key, random_complex(rng, 3, 2));
  return pf;
}

}  // namespace

TEST_CASE("problem files round trip through text") {
  const ProblemFile pf = quad_problem();
  const std::string text = serialize_problem(pf);
  const ProblemFile back = parse_problem(text);
  CHECK(back == pf);
}

TEST_CASE("real matrices serialize without an imaginary part") {
  ProblemFile pf;
  pf.kind = "linear-rmep";
  pf.k = 2;
  pf.n = 2;
  Matrix a(3, 2);
  a << 1, 2, 3, 4, 5, 6;
  pf.terms.emplace("00", a);
  pf.terms.emplace("10", 2.0 * a);
  pf.terms.emplace("01", -a);
  const std::string text = serialize_problem(pf);
  CHECK(!mentions(text, "\"im\""));
  CHECK(parse_problem(text) == pf);
}

TEST_CASE("series problems round trip with observations") {
  ProblemFile pf;
  pf.kind = "arma11";
  RealVector y(4);
  y << 0.5, -1.25, 2.0, 0.125;
  pf.y = y;
  CHECK(parse_problem(serialize_problem(pf)) == pf);
}

TEST_CASE("parse errors name the offending field") {
  CHECK(mentions(message_of([] { (void)parse_problem("not json"); }), "problem file"));
  CHECK(mentions(message_of([] { (void)parse_problem("{\"kind\": \"bogus\"}"); }), "unknown kind"));
  CHECK(mentions(message_of([] {
          (void)parse_problem(
              "{\"kind\": \"linear-rmep\", \"k\": 2, \"n\": 1, \"terms\": {\"0\": "
              "{\"rows\": 2, \"cols\": 1, \"re\": [[1], [2]]}}}");
        }),
        "'0'"));
  CHECK(mentions(message_of([] {
          (void)parse_problem(
              "{\"kind\": \"linear-rmep\", \"k\": 2, \"n\": 1, \"terms\": {\"a0\": "
              "{\"rows\": 2, \"cols\": 1, \"re\": [[1], [2]]}}}");
        }),
        "digits"));
  CHECK(mentions(message_of([] {
          (void)parse_problem(
              "{\"kind\": \"linear-rmep\", \"k\": 2, \"n\": 2, \"terms\": {\"00\": "
              "{\"rows\": 3, \"cols\": 3, \"re\": [[1,2,3],[4,5,6],[7,8,9]]}}}");
        }),
        "columns"));
  CHECK(mentions(message_of([] {
          (void)parse_problem(
              "{\"kind\": \"linear-rmep\", \"k\": 1, \"n\": 1, \"terms\": {\"0\": "
              "{\"rows\": 1, \"cols\": 1, \"re\": [[1, 2]]}}}");
        }),
        "re"));
  CHECK(mentions(message_of([] {
          (void)parse_problem(
              "{\"kind\": \"linear-rmep\", \"k\": 1, \"n\": 1, \"terms\": {\"0\": "
              "{\"rows\": 1, \"cols\": 1}}}");
        }),
        "required"));
  CHECK(mentions(message_of([] { (void)parse_problem("{\"kind\": \"arma11\", \"y\": [1, \"x\"]}"); }),
        "entry 1"));
  CHECK(mentions(message_of([] { (void)parse_problem("{\"kind\": \"arma11\", \"y\": []}"); }),
        "observations"));
}

TEST_CASE("pencil_from_problem infers the degree from the keys") {
  auto rng = seeded(41);
  ProblemFile pf;
  pf.kind = "quad-r2ep";
  pf.k = 2;
  pf.n = 2;
  pf.terms.emplace("00", random_complex(rng, 3, 2));
  pf.terms.emplace("10", random_complex(rng, 3, 2));
  pf.terms.emplace("01", random_complex(rng, 3, 2));
  pf.terms.emplace("02", random_complex(rng, 3, 2));

  const RectPencil p = pencil_from_problem(pf);
  CHECK(p.k == 2);
  CHECK(p.degree == 2);
  CHECK((p.term_or_zero({0, 2}) - pf.terms.at("02")).norm() == 0.0);
  CHECK((p.term_or_zero({1, 0}) - pf.terms.at("10")).norm() == 0.0);

  ProblemFile linear = pf;
  linear.kind = "linear-rmep";
  CHECK_THROWS_AS((void)pencil_from_problem(linear), std::invalid_argument);

  ProblemFile series;
  series.kind = "arma11";
  RealVector y(4);
  y << 1, 2, 3, 4;
  series.y = y;
  CHECK_THROWS_AS((void)pencil_from_problem(series), std::invalid_argument);
}

TEST_CASE("format_real round trips doubles exactly") {
  for (double v : {1.0 / 3.0, 0.0, -2.5, 1e17, 1e-17, 12345.6789}) {
    CHECK(std::stod(format_real(v)) == v);
  }
}

TEST_CASE("eigenvalue sets render as CSV") {
  EigSet set;
  Vector t1(2);
  t1 << Complex(1.5, 0.0), Complex(-2.0, 0.25);
  set.push(t1, 1e-12);
  Vector t2(2);
  t2 << Complex(0.5, 0.0), Complex(3.0, 0.0);
  set.push(t2, 2e-13);

  const std::string csv = eigenvalues_csv(set, 2);
  CHECK(csv.rfind("re1,im1,re2,im2,residual,is_real\n", 0) == 0);

  std::vector<std::string> lines;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 3);
  CHECK(mentions(lines[1], ",0"));
  CHECK(lines[1].back() == '0');
  CHECK(lines[2].back() == '1');
  CHECK(std::stod(lines[1].substr(0, lines[1].find(','))) == 1.5);

  Vector wrong(1);
  wrong << Complex(1, 0);
  EigSet bad;
  bad.push(wrong);
  CHECK_THROWS_AS((void)eigenvalues_csv(bad, 2), std::invalid_argument);
}

TEST_CASE("stationary points render as CSV") {
  StationaryPoint p;
  p.params = RealVector(2);
  p.params << 0.25, -0.5;
  p.objective = 3.5;
  p.kind = StationaryKind::saddle;
  p.admissible = true;
  const std::string csv = stationary_csv({p});
  CHECK(csv.rfind("param1,param2,objective,kind,admissible\n", 0) == 0);
  CHECK(mentions(csv, "0.25,-0.5,3.5,saddle,1"));
}

TEST_CASE("grids render as plain CSV") {
  RealMatrix g(2, 2);
  g << 1, 2, 3, 4;
  CHECK(grid_csv(g) == "1,2\n3,4\n");
}

TEST_CASE("read_series accepts commas and whitespace") {
  const std::string path = tmp_path("series.txt");
  write_text(path, "1.5, 2.5\n3 4,\t5\n");
  const TimeSeries ts = read_series(path);
  REQUIRE(ts.size() == 5);
  CHECK(ts.y(0) == 1.5);
  CHECK(ts.y(4) == 5.0);

  write_text(path, "1, fish");
  const std::string msg = message_of([&] { (void)read_series(path); });
  CHECK(mentions(msg, "fish"));
  CHECK(mentions(msg, "value 2"));

  write_text(path, "  \n");
  CHECK(mentions(message_of([&] { (void)read_series(path); }), "no observations"));

  CHECK(mentions(message_of([] { (void)read_series(tmp_path("does_not_exist.txt")); }),
        "cannot open"));
}

TEST_CASE("problem files round trip through the filesystem") {
  const ProblemFile pf = quad_problem();
  const std::string path = tmp_path("problem.json");
  write_problem(pf, path);
  CHECK(read_problem(path) == pf);
}
