#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "dynkey/dictionary.hpp"
#include "dynkey/rng.hpp"

using namespace dynkey;

namespace {

PoleSet no_const(std::vector<Pole> poles) {
  PoleSet ps;
  ps.poles = std::move(poles);
  ps.include_constant_atom = false;
  return ps;
}

}  // namespace

TEST_CASE("real pole at 1 gives the constant column") {
  auto dict = build_dictionary(no_const({{PoleKind::Real, 1.0, 0.0}}), 3);
  REQUIRE(dict.matrix.rows() == 3);
  REQUIRE(dict.matrix.cols() == 1);
  CHECK(dict.matrix(0, 0) == 1.0);
  CHECK(dict.matrix(1, 0) == 1.0);
  CHECK(dict.matrix(2, 0) == 1.0);
}

TEST_CASE("complex pair at phase pi/2 gives powers of i") {
  auto dict =
      build_dictionary(no_const({{PoleKind::Complex, 1.0, kPi / 2}}), 3);
  REQUIRE(dict.matrix.cols() == 2);
  // Re column: cos(0), cos(pi/2), cos(pi)
  CHECK(dict.matrix(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(dict.matrix(1, 0)) < 1e-15);
  CHECK(dict.matrix(2, 0) == doctest::Approx(-1.0).epsilon(1e-15));
  // Im column: sin(0), sin(pi/2), sin(pi)
  CHECK(std::abs(dict.matrix(0, 1)) < 1e-15);
  CHECK(dict.matrix(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(dict.matrix(2, 1)) < 1e-15);
}

TEST_CASE("first row is 1 for Re columns and 0 for Im columns") {
  auto ps = init_pole_ring(6, 0.9, 1.1, 3, true);
  ps.poles.push_back(Pole{PoleKind::Real, 0.7, 0.0});
  auto dict = build_dictionary(ps, 5);
  int col = 0;
  CHECK(dict.matrix(0, col++) == 1.0);  // constant atom
  for (const auto& p : ps.poles) {
    CHECK(dict.matrix(0, col++) == 1.0);  // Re / real column
    if (p.kind == PoleKind::Complex) CHECK(dict.matrix(0, col++) == 0.0);
  }
  CHECK(col == dict.matrix.cols());
}

TEST_CASE("atom_count per pole kind") {
  PoleSet ps;
  ps.include_constant_atom = true;
  ps.poles = {{PoleKind::Complex, 0.9, 0.5},
              {PoleKind::Complex, 1.1, 1.5},
              {PoleKind::Real, 0.8, 0.0}};
  CHECK(atom_count(ps) == 1 + 2 + 2 + 1);
}

TEST_CASE("gram is the cached matrix product, symmetric positive definite") {
  auto dict = build_dictionary(init_pole_ring(12, 0.85, 1.15, 5), 8, true);
  Eigen::MatrixXd g = dict.matrix * dict.matrix.transpose();
  CHECK((dict.gram - g).norm() <= 1e-12 * g.norm());
  CHECK((dict.gram - dict.gram.transpose()).norm() <= 1e-12 * g.norm());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dict.gram);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("160-pair ring at T=40 spans all rows (pivoted-QR rank oracle)") {
  auto ps = init_pole_ring(160, 0.85, 1.15, 7, false);
  auto dict = build_dictionary(ps, 40);
  REQUIRE(dict.matrix.rows() == 40);
  REQUIRE(dict.matrix.cols() == 320);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(dict.gram);
  CHECK(qr.rank() == 40);
  // Row independence: smallest gram eigenvalue clears the stated floor.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dict.gram);
  CHECK(es.eigenvalues().minCoeff() >
        1e-10 * es.eigenvalues().maxCoeff());
}

TEST_CASE("init_pole_ring honors the ring and is seed-deterministic") {
  auto degenerate = init_pole_ring(4, 1.0, 1.0, 99, false);
  for (const auto& p : degenerate.poles) CHECK(p.mag == 1.0);

  auto a = init_pole_ring(160, 0.85, 1.15, 7);
  for (const auto& p : a.poles) {
    CHECK(p.mag >= 0.85);
    CHECK(p.mag <= 1.15);
    CHECK(p.phase > 0.0);
    CHECK(p.phase < kPi);
  }
  auto b = init_pole_ring(160, 0.85, 1.15, 7);
  REQUIRE(a.poles.size() == b.poles.size());
  for (std::size_t i = 0; i < a.poles.size(); ++i) {
    CHECK(a.poles[i].mag == b.poles[i].mag);
    CHECK(a.poles[i].phase == b.poles[i].phase);
  }
  auto c = init_pole_ring(160, 0.85, 1.15, 8);
  CHECK(a.poles[0].mag != c.poles[0].mag);
}

TEST_CASE("extend_rows appends exact impulse-response rows") {
  // Constant atom only: the column stays all ones.
  PoleSet co;
  co.include_constant_atom = true;
  auto cd = extend_rows(build_dictionary(co, 3), 1);
  REQUIRE(cd.matrix.rows() == 4);
  for (int k = 0; k < 4; ++k) CHECK(cd.matrix(k, 0) == 1.0);

  // Pole i: Re column cycles 1, 0, -1, 0.
  auto di = extend_rows(
      build_dictionary(no_const({{PoleKind::Complex, 1.0, kPi / 2}}), 3), 1);
  CHECK(di.matrix(3, 0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(di.matrix(3, 0)) < 1e-12);
  CHECK(di.matrix(3, 1) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("extend then truncate is an exact identity round-trip") {
  auto base = build_dictionary(init_pole_ring(10, 0.9, 1.1, 17), 6, true);
  auto ext = extend_rows(base, 5);
  REQUIRE(ext.num_rows == 11);
  // Bitwise prefix equality, including the normalized path (extension reuses
  // the stored column scales).
  CHECK(ext.matrix.topRows(6) == base.matrix);
  CHECK(ext.column_scales == base.column_scales);
}

TEST_CASE("prefix property: shorter build equals the top rows of a longer one") {
  auto ps = init_pole_ring(9, 0.85, 1.15, 31);
  auto d5 = build_dictionary(ps, 5);
  auto d9 = build_dictionary(ps, 9);
  CHECK(d9.matrix.topRows(5) == d5.matrix);
}

TEST_CASE("invalid pole sets are rejected") {
  CHECK_THROWS_AS(build_dictionary(no_const({{PoleKind::Real, 0.9, 0.0}}), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      validate_poles(no_const({{PoleKind::Complex, 0.9, 0.4},
                               {PoleKind::Complex, 0.9, 0.4}})),
      std::invalid_argument);  // duplicate pair
  CHECK_THROWS_AS(validate_poles(no_const({{PoleKind::Complex, 0.9, 0.0}})),
                  std::invalid_argument);  // complex phase at 0
  CHECK_THROWS_AS(validate_poles(no_const({{PoleKind::Real, 0.9, 0.3}})),
                  std::invalid_argument);  // real phase not 0 or pi
  CHECK_THROWS_AS(validate_poles(no_const({{PoleKind::Real, -0.5, 0.0}})),
                  std::invalid_argument);  // nonpositive magnitude
  PoleSet empty;
  empty.include_constant_atom = false;
  CHECK_THROWS_AS(validate_poles(empty), std::invalid_argument);
  // The constant atom duplicates an explicit real pole at exactly 1.
  PoleSet dup;
  dup.include_constant_atom = true;
  dup.poles = {{PoleKind::Real, 1.0, 0.0}};
  CHECK_THROWS_AS(validate_poles(dup), std::invalid_argument);
}

TEST_CASE("rng substreams are decorrelated and deterministic") {
  CHECK(substream_seed(5, 0) == substream_seed(5, 0));
  CHECK(substream_seed(5, 0) != substream_seed(5, 1));
  CHECK(substream_seed(5, 0) != substream_seed(6, 0));
  Rng r1(substream_seed(5, 0)), r2(substream_seed(5, 0));
  for (int i = 0; i < 100; ++i) CHECK(r1.uniform01() == r2.uniform01());
  Rng r3(7);
  for (int i = 0; i < 1000; ++i) {
    double u = r3.uniform01();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    CHECK(r3.below(13) < 13);
  }
  Rng r4(9);
  CHECK(r4.uniform(2.5, 2.5) == 2.5);
}
