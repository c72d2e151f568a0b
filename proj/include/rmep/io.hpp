#pragma once

#include "rmep/pencil.hpp"
#include "rmep/timeseries.hpp"
#include "rmep/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace rmep {

/// On-disk problem description. Matrix terms are keyed by concatenated
/// exponent digits: "00" is the constant coefficient of a two-parameter
/// problem, "10" multiplies the first parameter, "02" the square of the
/// second.
struct ProblemFile {
  std::string kind;  ///< linear-rmep | quad-r2ep | arma11 | lti2 | arma21-matrices
  int k = 0;
  Index n = 0;
  std::map<std::string, Matrix> terms;
  RealVector y;  ///< observations for the series kinds, empty otherwise

  bool operator==(const ProblemFile& other) const;
};

/// Parses and validates a JSON problem document. A missing "im" entry of a
/// matrix means a real matrix; malformed input raises std::invalid_argument
/// naming the offending field.
ProblemFile parse_problem(const std::string& text);

/// Inverse of parse_problem up to omitted zero imaginary parts; numbers are
/// written with 17 significant digits so the round trip is exact.
std::string serialize_problem(const ProblemFile& pf);

ProblemFile read_problem(const std::string& path);
void write_problem(const ProblemFile& pf, const std::string& path);

/// Coefficient pencil of the matrix kinds; throws for the series kinds.
RectPencil pencil_from_problem(const ProblemFile& pf);

/// Whitespace or comma separated reals, at least one.
TimeSeries read_series(const std::string& path);

/// Header plus one row per tuple: re/im of each component, residual,
/// is_real. Components beyond the first k of a tuple never occur; k names
/// the columns even when the set is empty.
std::string eigenvalues_csv(const EigSet& set, int k);

/// Header plus one row per point: parameters, objective, kind, admissible.
std::string stationary_csv(const std::vector<StationaryPoint>& pts);

/// One CSV line per grid row.
std::string grid_csv(const RealMatrix& grid);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

/// Shortest fixed form with 17 significant digits; parses back to the same
/// double.
std::string format_real(double v);

}  // namespace rmep
