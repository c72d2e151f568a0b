#include <cmath>
#include <vector>

#include "doctest.h"
#include "rmep/compress.hpp"
#include "rmep/linear_rmep.hpp"
#include "rmep/macaulay.hpp"
#include "rmep/poly_rmep.hpp"
#include "support.hpp"

using namespace rmep;
using testutil::multiset_within;
using testutil::random_complex;
using testutil::seeded;

namespace {

RectPencil example_pencil() {
  Matrix a(3, 2), b(3, 2), c(3, 2);
  a << 1, 2, 3, 4, 3, 1;
  b << 1, 3, 5, 1, 1, 4;
  c << 4, 1, 1, 3, 4, 1;
  return RectPencil::linear(a, {b, c});
}

QuadR2EP example_quad() {
  QuadR2EP q;
  q.a00 = Matrix(3, 2);
  q.a00 << 1, 2, 3, 4, 3, 1;
  q.a10 = Matrix(3, 2);
  q.a10 << 1, 3, 5, 1, 1, 4;
  q.a01 = Matrix(3, 2);
  q.a01 << 4, 1, 1, 3, 4, 1;
  q.a20 = Matrix(3, 2);
  q.a20 << 2, 3, 1, 1, 1, 2;
  q.a11 = Matrix(3, 2);
  q.a11 << 1, 1, 2, 2, 2, 3;
  q.a02 = Matrix(3, 2);
  q.a02 << 3, 1, 3, 2, 1, 2;
  return q;
}

Complex monomial_value(const Vector& lambda, const std::vector<int>& w) {
  Complex out(1, 0);
  for (std::size_t i = 0; i < w.size(); ++i)
    for (int p = 0; p < w[i]; ++p) out *= lambda(static_cast<Index>(i));
  return out;
}

}  // namespace

TEST_CASE("graded_monomials enumerates by total degree") {
  const std::vector<std::vector<int>> want2 = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  CHECK(graded_monomials(2, 2) == want2);

  const std::vector<std::vector<int>> want1 = {{0}, {1}, {2}, {3}};
  CHECK(graded_monomials(1, 3) == want1);

  const std::vector<std::vector<int>> want3 = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  CHECK(graded_monomials(3, 1) == want3);
}

TEST_CASE("mac_size matches the closed form") {
  CHECK(mac_size(2, 2, 2) == std::pair<Index, Index>(9, 12));
  CHECK(mac_size(10, 2, 10).first == 605);
  CHECK(mac_size(10, 2, 10).second == 10 * binom(12, 2));
  CHECK(mac_size(3, 1, 4) == std::pair<Index, Index>(12, 15));
}

TEST_CASE("the degree one matrix is the horizontal coefficient stack") {
  const RectPencil p = example_pencil();
  const auto mac = build_macaulay(p, 1);
  REQUIRE(mac.data.rows() == 3);
  REQUIRE(mac.data.cols() == 6);
  REQUIRE(mac.row_monomials.size() == 1);
  REQUIRE(mac.col_monomials.size() == 3);

  Matrix want(3, 6);
  want << p.term_or_zero({0, 0}), p.term_or_zero({1, 0}), p.term_or_zero({0, 1});
  CHECK((mac.data - want).norm() == 0.0);
}

TEST_CASE("higher degree matrices have the predicted shape") {
  const auto mac = build_macaulay(example_pencil(), 2);
  const auto size = mac_size(2, 2, 2);
  CHECK(mac.data.rows() == size.first);
  CHECK(mac.data.cols() == size.second);
  CHECK(mac.row_monomials.size() == 3);
  CHECK(mac.col_monomials.size() == 6);
}

TEST_CASE("eigenvalue monomial vectors span the nullspace") {
  const RectPencil p = example_pencil();
  const auto mac = build_macaulay(p, 2);
  const EigSet eigs = solve_linear_compressed(p);
  REQUIRE(eigs.size() == 3);

  const Index n = p.cols();
  for (const auto& e : eigs.tuples) {
    REQUIRE(e.vector.size() == n);
    Vector v(mac.data.cols());
    for (std::size_t b = 0; b < mac.col_monomials.size(); ++b) {
      const Complex scale = monomial_value(e.lambda, mac.col_monomials[b]);
      v.segment(static_cast<Index>(b) * n, n) = scale * e.vector;
    }
    CHECK((mac.data * v).norm() <= 1e-8 * mac.data.norm() * v.norm());
  }
}

TEST_CASE("the nullity profile of the worked linear example is flat") {
  const std::vector<Index> want = {3, 3, 3, 3};
  CHECK(nullspace_profile(example_pencil(), 4) == want);
}

TEST_CASE("the nullity profile of the worked quadratic example stabilizes") {
  const auto profile = nullspace_profile(example_quad().pencil(), 5);
  REQUIRE(profile.size() == 4);
  CHECK(profile[0] == 9);
  for (std::size_t i = 0; i + 1 < profile.size(); ++i) CHECK(profile[i] <= profile[i + 1]);
  CHECK(profile[2] == 12);
  CHECK(profile[3] == 12);
}

TEST_CASE("mac_solve_small agrees with the compressed solver on the example") {
  const RectPencil p = example_pencil();
  const EigSet want_set = solve_linear_compressed(p);
  std::vector<Vector> want;
  for (const auto& e : want_set.tuples) want.push_back(e.lambda);

  for (int m = 2; m <= 3; ++m) {
    const EigSet got = mac_solve_small(p, m);
    REQUIRE(got.size() == 3);
    CHECK(multiset_within(got, want, 1e-6));
  }
}

TEST_CASE("mac_solve_small matches the classic one-parameter eigenproblem") {
  auto rng = seeded(900);
  const Matrix a = random_complex(rng, 4, 4);
  const Matrix b = random_complex(rng, 4, 4);
  const RectPencil p = RectPencil::linear(a, {b});

  Eigen::ComplexEigenSolver<Matrix> es(b.partialPivLu().solve(a));
  std::vector<Vector> want;
  for (Index i = 0; i < 4; ++i) {
    Vector t(1);
    t << -es.eigenvalues()(i);
    want.push_back(t);
  }

  const EigSet got = mac_solve_small(p, 2);
  REQUIRE(got.size() == 4);
  CHECK(multiset_within(got, want, 1e-7));
}

TEST_CASE("mac_solve_small agrees with the compressed solver on random input") {
  auto rng = seeded(901);
  const RectPencil p = RectPencil::linear(
      random_complex(rng, 3, 2), {random_complex(rng, 3, 2), random_complex(rng, 3, 2)});
  const EigSet want_set = solve_linear_compressed(p);
  REQUIRE(want_set.size() == 3);
  std::vector<Vector> want;
  for (const auto& e : want_set.tuples) want.push_back(e.lambda);

  const EigSet got = mac_solve_small(p, 3);
  REQUIRE(got.size() == 3);
  CHECK(multiset_within(got, want, 1e-6));
}

TEST_CASE("mac_solve_small solves the worked quadratic example at high degree") {
  const QuadR2EP q = example_quad();
  const EigSet want_set = solve_quadratic_vandermonde(q);
  std::vector<Vector> want;
  for (const auto& e : want_set.tuples) want.push_back(e.lambda);

  const EigSet got = mac_solve_small(q.pencil(), 5);
  REQUIRE(got.size() == 12);
  CHECK(multiset_within(got, want, 1e-6));
}

TEST_CASE("mac_solve_small rejects unstabilized or undersized degrees") {
  const RectPencil quad = example_quad().pencil();
  CHECK_THROWS_AS((void)mac_solve_small(quad, 3), SolverError);
  CHECK_THROWS((void)mac_solve_small(quad, 2));
}

TEST_CASE("build_macaulay honors the memory cap") {
  CHECK_THROWS((void)build_macaulay(example_pencil(), 2, 64));
}
