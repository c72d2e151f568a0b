#include <vector>

#include "doctest.h"
#include "rmep/joint_eig.hpp"
#include "rmep/mep.hpp"
#include "rmep/staircase.hpp"
#include "support.hpp"

using namespace rmep;
using testutil::multiset_within;
using testutil::random_complex;
using testutil::random_unitary;
using testutil::seeded;

namespace {

struct Constructed {
  Matrix d0;
  std::vector<Matrix> ds;
  std::vector<Vector> want;
};

// d0 = S and ds_i = S P diag(vals_i) P^{-1}, so d0^{-1} ds_i commute and the
// joint eigenvalue tuples are the columns of vals.
Constructed constructed_family(std::mt19937_64& rng, Index n, int k, const Matrix* values = nullptr) {
  Constructed out;
  Matrix vals = values ? *values : random_complex(rng, k, n);
  const Matrix s = random_complex(rng, n, n);
  const Matrix p = random_complex(rng, n, n);
  const Matrix p_inv = Eigen::PartialPivLU<Matrix>(p).inverse();
  out.d0 = s;
  for (int i = 0; i < k; ++i) {
    const Matrix d = Vector(vals.row(i)).asDiagonal();
    out.ds.push_back(s * (p * (d * p_inv)));
  }
  for (Index j = 0; j < n; ++j) {
    Vector t(k);
    for (int i = 0; i < k; ++i) t(i) = vals(i, j);
    out.want.push_back(t);
  }
  return out;
}

}  // namespace

TEST_CASE("joint_commuting_eigs recovers constructed joint spectra") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto rng = seeded(1000 + seed);
    const Index n = 3 + static_cast<Index>(seed % 5);
    const int k = 1 + static_cast<int>(seed % 3);
    const auto fam = constructed_family(rng, n, k);
    const EigSet got = joint_commuting_eigs(fam.d0, fam.ds);
    REQUIRE(got.size() == n);
    CHECK(multiset_within(got, fam.want, 1e-6));
  }
}

TEST_CASE("joint_commuting_eigs handles repeated eigenvalues") {
  auto rng = seeded(2001);
  Matrix vals(2, 3);
  vals << 2, 2, 1, 3, 3, -1;
  const auto fam = constructed_family(rng, 3, 2, &vals);
  const EigSet got = joint_commuting_eigs(fam.d0, fam.ds);
  REQUIRE(got.size() == 3);
  CHECK(multiset_within(got, fam.want, 1e-6));
}

TEST_CASE("joint_commuting_eigs on scalar multiples of the base matrix") {
  auto rng = seeded(2002);
  const Index n = 4;
  const Matrix d0 = random_complex(rng, n, n);
  const Complex c1(0.5, 0.25);
  const Complex c2(-1.5, 0.0);
  const EigSet got = joint_commuting_eigs(d0, {c1 * d0, c2 * d0});
  REQUIRE(got.size() == n);
  std::vector<Vector> want(n, testutil::tuple2(c1, c2));
  CHECK(multiset_within(got, want, 1e-8));
}

TEST_CASE("joint_commuting_eigs rejects singular base matrices") {
  auto rng = seeded(2003);
  const Matrix zero = Matrix::Zero(4, 4);
  const Matrix other = random_complex(rng, 4, 4);
  CHECK_THROWS_AS((void)joint_commuting_eigs(zero, {other}), SolverError);

  const Matrix u = random_complex(rng, 4, 1);
  const Matrix v = random_complex(rng, 4, 1);
  const Matrix rank1 = u * v.transpose();
  CHECK_THROWS_AS((void)joint_commuting_eigs(rank1, {other}), SolverError);
}

TEST_CASE("operator determinants commute after inversion and solve the system") {
  auto rng = seeded(2004);
  MepSystem sys;
  sys.equations.push_back(
      {random_complex(rng, 3, 3), random_complex(rng, 3, 3), random_complex(rng, 3, 3)});
  sys.equations.push_back(
      {random_complex(rng, 2, 2), random_complex(rng, 2, 2), random_complex(rng, 2, 2)});
  const auto deltas = delta_family(sys);
  REQUIRE(deltas.size() == 3);
  REQUIRE(deltas[0].rows() == 6);

  Eigen::PartialPivLU<Matrix> lu(deltas[0]);
  const Matrix x1 = lu.solve(deltas[1]);
  const Matrix x2 = lu.solve(deltas[2]);
  CHECK((x1 * x2 - x2 * x1).norm() <= 1e-8 * x1.norm() * x2.norm());

  const EigSet got = joint_commuting_eigs(deltas[0], {deltas[1], deltas[2]});
  REQUIRE(got.size() == 6);
  for (const auto& e : got.tuples) {
    for (const auto& eq : sys.equations) {
      const Matrix w = eq[0] + e.lambda(0) * eq[1] + e.lambda(1) * eq[2];
      double scale = 1.0;
      for (Index r = 0; r < w.rows(); ++r) scale *= w.row(r).norm();
      CHECK(std::abs(w.determinant()) <= 1e-8 * (scale + 1.0));
    }
  }
}

TEST_CASE("staircase_regular_part equals the joint solver on nonsingular families") {
  auto rng = seeded(2005);
  const auto fam = constructed_family(rng, 5, 2);
  const EigSet direct = joint_commuting_eigs(fam.d0, fam.ds);
  const EigSet stair = staircase_regular_part(fam.d0, fam.ds);
  REQUIRE(stair.size() == direct.size());
  std::vector<Vector> want;
  for (const auto& e : direct.tuples) want.push_back(e.lambda);
  CHECK(multiset_within(stair, want, 1e-9));
}

TEST_CASE("staircase_regular_part deflates infinite structure") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto rng = seeded(3000 + seed);
    const Index q = 3;
    const Index e = 2;
    const int k = 2;
    const auto fam = constructed_family(rng, q, k);
    const Matrix g = random_complex(rng, q, e);
    const Index m = q + e;

    Matrix d0 = Matrix::Zero(m, m);
    d0.topLeftCorner(q, q) = fam.d0;
    d0.topRightCorner(q, e) = fam.d0 * g;
    std::vector<Matrix> ds;
    for (int i = 0; i < k; ++i) {
      Matrix di = Matrix::Zero(m, m);
      di.topLeftCorner(q, q) = fam.ds[i];
      di.topRightCorner(q, e) = fam.ds[i] * g;
      di.bottomRightCorner(e, e) = random_complex(rng, e, e);
      ds.push_back(di);
    }
    const Matrix w1 = random_unitary(rng, m);
    const Matrix w2 = random_unitary(rng, m);
    d0 = w1 * d0 * w2;
    for (auto& di : ds) di = w1 * di * w2;

    const EigSet got = staircase_regular_part(d0, ds);
    REQUIRE(got.size() == q);
    CHECK(multiset_within(got, fam.want, 1e-6));
  }
}

TEST_CASE("staircase_regular_part strips a common singular block") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto rng = seeded(4000 + seed);
    const Index q = 3;
    const Index e = 2;
    const int k = 2;
    const auto fam = constructed_family(rng, q, k);
    const Index m = q + e;

    auto embed = [&](const Matrix& block) {
      Matrix full = Matrix::Zero(m, m);
      full.topLeftCorner(q, q) = block;
      return full;
    };
    const Matrix w1 = random_unitary(rng, m);
    const Matrix w2 = random_unitary(rng, m);
    Matrix d0 = w1 * embed(fam.d0) * w2;
    std::vector<Matrix> ds;
    for (int i = 0; i < k; ++i) ds.push_back(w1 * embed(fam.ds[i]) * w2);

    const EigSet got = staircase_regular_part(d0, ds);
    REQUIRE(got.size() == q);
    CHECK(multiset_within(got, fam.want, 1e-6));
  }
}

TEST_CASE("staircase_regular_part of the zero family is empty") {
  const Matrix zero = Matrix::Zero(4, 4);
  const EigSet got = staircase_regular_part(zero, {zero, zero});
  CHECK(got.size() == 0);
}
