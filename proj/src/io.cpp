#include "rmep/io.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rmep {

namespace {

using nlohmann::json;

const char* const kKinds[] = {"linear-rmep", "quad-r2ep", "arma11", "lti2",
                              "arma21-matrices"};

bool known_kind(const std::string& kind) {
  for (const char* k : kKinds)
    if (kind == k) return true;
  return false;
}

bool series_kind(const std::string& kind) { return kind == "arma11" || kind == "lti2"; }

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw std::invalid_argument("problem file: field '" + field + "' " + what);
}

Index get_dimension(const json& j, const std::string& field) {
  if (!j.is_number_integer()) bad(field, "must be an integer");
  const auto v = j.get<long long>();
  if (v < 0) bad(field, "must be nonnegative");
  return static_cast<Index>(v);
}

void fill_part(const json& j, const std::string& field, Index rows, Index cols,
               bool imaginary, Matrix& out) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows)
    bad(field, "must be an array with one row per matrix row");
  for (Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      bad(field, "row " + std::to_string(r) + " must hold " + std::to_string(cols) +
                     " numbers");
    for (Index c = 0; c < cols; ++c) {
      const json& cell = row[static_cast<std::size_t>(c)];
      if (!cell.is_number()) bad(field, "row " + std::to_string(r) + " holds a non-number");
      const double v = cell.get<double>();
      if (imaginary)
        out(r, c).imag(v);
      else
        out(r, c).real(v);
    }
  }
}

Matrix parse_matrix(const json& j, const std::string& field) {
  if (!j.is_object()) bad(field, "must be an object");
  const Index rows = get_dimension(j.contains("rows") ? j.at("rows") : json(), field + ".rows");
  const Index cols = get_dimension(j.contains("cols") ? j.at("cols") : json(), field + ".cols");
  Matrix out = Matrix::Zero(rows, cols);
  if (!j.contains("re")) bad(field + ".re", "is required");
  fill_part(j.at("re"), field + ".re", rows, cols, false, out);
  if (j.contains("im")) fill_part(j.at("im"), field + ".im", rows, cols, true, out);
  return out;
}

void append_real_rows(std::string& out, const Matrix& m, bool imaginary) {
  for (Index r = 0; r < m.rows(); ++r) {
    out += r == 0 ? "[[" : ", [";
    for (Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out += ", ";
      out += format_real(imaginary ? m(r, c).imag() : m(r, c).real());
    }
    out += "]";
  }
  out += "]";
}

void validate_problem(const ProblemFile& pf, const char* where) {
  const std::string prefix = std::string(where) + ": ";
  if (!known_kind(pf.kind)) throw std::invalid_argument(prefix + "unknown kind '" + pf.kind + "'");
  if (series_kind(pf.kind)) {
    if (pf.y.size() == 0) throw std::invalid_argument(prefix + pf.kind + " needs observations");
    if (!pf.y.allFinite()) throw std::invalid_argument(prefix + "observations must be finite");
    return;
  }
  if (pf.k < 1) throw std::invalid_argument(prefix + "k must be positive");
  if (pf.n < 1) throw std::invalid_argument(prefix + "n must be positive");
  if (pf.terms.empty()) throw std::invalid_argument(prefix + pf.kind + " needs terms");
  for (const auto& [key, a] : pf.terms) {
    if (static_cast<int>(key.size()) != pf.k)
      throw std::invalid_argument(prefix + "term key '" + key + "' must have k digits");
    for (char ch : key)
      if (!std::isdigit(static_cast<unsigned char>(ch)))
        throw std::invalid_argument(prefix + "term key '" + key + "' must be digits");
    if (a.cols() != pf.n)
      throw std::invalid_argument(prefix + "term '" + key + "' has " +
                                  std::to_string(a.cols()) + " columns, expected n");
    if (a.rows() != pf.terms.begin()->second.rows())
      throw std::invalid_argument(prefix + "term sizes differ");
    if (!a.allFinite()) throw std::invalid_argument(prefix + "term '" + key + "' must be finite");
  }
}

}  // namespace

bool ProblemFile::operator==(const ProblemFile& other) const {
  if (kind != other.kind || k != other.k || n != other.n) return false;
  if (y.size() != other.y.size() || y != other.y) return false;
  if (terms.size() != other.terms.size()) return false;
  for (auto it = terms.begin(), jt = other.terms.begin(); it != terms.end(); ++it, ++jt) {
    if (it->first != jt->first) return false;
    if (it->second.rows() != jt->second.rows() || it->second.cols() != jt->second.cols())
      return false;
    if (it->second != jt->second) return false;
  }
  return true;
}

ProblemFile parse_problem(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("problem file: ") + e.what());
  }
  if (!j.is_object()) bad("$", "must be an object");
  ProblemFile pf;
  if (!j.contains("kind") || !j.at("kind").is_string()) bad("kind", "must be a string");
  pf.kind = j.at("kind").get<std::string>();
  if (j.contains("k")) pf.k = static_cast<int>(get_dimension(j.at("k"), "k"));
  if (j.contains("n")) pf.n = get_dimension(j.at("n"), "n");
  if (j.contains("terms")) {
    const json& terms = j.at("terms");
    if (!terms.is_object()) bad("terms", "must be an object");
    for (const auto& [key, value] : terms.items())
      pf.terms.emplace(key, parse_matrix(value, "terms." + key));
  }
  if (j.contains("y")) {
    const json& y = j.at("y");
    if (!y.is_array()) bad("y", "must be an array of numbers");
    pf.y = RealVector(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (!y[i].is_number()) bad("y", "entry " + std::to_string(i) + " is not a number");
      pf.y[static_cast<Index>(i)] = y[i].get<double>();
    }
  }
  validate_problem(pf, "parse_problem");
  return pf;
}

std::string serialize_problem(const ProblemFile& pf) {
  validate_problem(pf, "serialize_problem");
  std::string out = "{\n  \"kind\": \"" + pf.kind + "\"";
  out += ",\n  \"k\": " + std::to_string(pf.k);
  out += ",\n  \"n\": " + std::to_string(pf.n);
  if (!pf.terms.empty()) {
    out += ",\n  \"terms\": {";
    bool first = true;
    for (const auto& [key, a] : pf.terms) {
      out += first ? "\n" : ",\n";
      first = false;
      out += "    \"" + key + "\": {\"rows\": " + std::to_string(a.rows()) +
             ", \"cols\": " + std::to_string(a.cols()) + ", \"re\": ";
      append_real_rows(out, a, false);
      if (a.imag().squaredNorm() != 0.0) {
        out += ", \"im\": ";
        append_real_rows(out, a, true);
      }
      out += "}";
    }
    out += "\n  }";
  }
  if (pf.y.size() > 0) {
    out += ",\n  \"y\": [";
    for (Index i = 0; i < pf.y.size(); ++i) {
      if (i > 0) out += ", ";
      out += format_real(pf.y[i]);
    }
    out += "]";
  }
  out += "\n}\n";
  return out;
}

ProblemFile read_problem(const std::string& path) { return parse_problem(read_text(path)); }

void write_problem(const ProblemFile& pf, const std::string& path) {
  write_text(path, serialize_problem(pf));
}

RectPencil pencil_from_problem(const ProblemFile& pf) {
  validate_problem(pf, "pencil_from_problem");
  if (series_kind(pf.kind))
    throw std::invalid_argument("pencil_from_problem: kind '" + pf.kind +
                                "' holds observations, not matrices");
  RectPencil p;
  p.k = pf.k;
  p.degree = 1;
  for (const auto& [key, a] : pf.terms) {
    int total = 0;
    for (char ch : key) total += ch - '0';
    p.degree = std::max(p.degree, total);
  }
  for (const auto& [key, a] : pf.terms) {
    std::vector<int> w(key.size());
    for (std::size_t i = 0; i < key.size(); ++i) w[i] = key[i] - '0';
    p.add_term(std::move(w), a);
  }
  if (pf.kind == "linear-rmep" && p.degree != 1)
    throw std::invalid_argument("pencil_from_problem: linear-rmep with higher degree terms");
  return p;
}

TimeSeries read_series(const std::string& path) {
  std::string text = read_text(path);
  for (char& ch : text)
    if (ch == ',') ch = ' ';
  std::istringstream in(text);
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    try {
      std::size_t used = 0;
      const double v = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      values.push_back(v);
    } catch (const std::exception&) {
      throw std::invalid_argument("series file '" + path + "': value " +
                                  std::to_string(values.size() + 1) + " ('" + token +
                                  "') is not a number");
    }
  }
  if (values.empty())
    throw std::invalid_argument("series file '" + path + "': no observations");
  TimeSeries ts;
  ts.y = Eigen::Map<const RealVector>(values.data(), static_cast<Index>(values.size()));
  return ts;
}

std::string eigenvalues_csv(const EigSet& set, int k) {
  if (k < 1) throw std::invalid_argument("eigenvalues_csv: need at least one component");
  std::string out;
  for (int i = 1; i <= k; ++i)
    out += "re" + std::to_string(i) + ",im" + std::to_string(i) + ",";
  out += "residual,is_real\n";
  for (const Eigenvalue& t : set.tuples) {
    if (t.lambda.size() != k)
      throw std::invalid_argument("eigenvalues_csv: tuple length differs from k");
    for (Index i = 0; i < t.lambda.size(); ++i)
      out += format_real(t.lambda[i].real()) + "," + format_real(t.lambda[i].imag()) + ",";
    out += format_real(t.residual);
    out += is_real_tuple(t.lambda) ? ",1\n" : ",0\n";
  }
  return out;
}

std::string stationary_csv(const std::vector<StationaryPoint>& pts) {
  std::string out = "param1,param2,objective,kind,admissible\n";
  for (const StationaryPoint& p : pts) {
    if (p.params.size() != 2)
      throw std::invalid_argument("stationary_csv: expected two parameters");
    out += format_real(p.params[0]) + "," + format_real(p.params[1]) + "," +
           format_real(p.objective) + "," + to_string(p.kind) + (p.admissible ? ",1\n" : ",0\n");
  }
  return out;
}

std::string grid_csv(const RealMatrix& grid) {
  std::string out;
  for (Index r = 0; r < grid.rows(); ++r) {
    for (Index c = 0; c < grid.cols(); ++c) {
      if (c > 0) out += ",";
      out += format_real(grid(r, c));
    }
    out += "\n";
  }
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw std::invalid_argument("cannot read '" + path + "'");
  return buffer.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw std::invalid_argument("cannot write '" + path + "'");
}

std::string format_real(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

}  // namespace rmep
