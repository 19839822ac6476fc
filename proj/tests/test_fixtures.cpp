#include <doctest.h>

#include <cmath>

#include "lipframe/certify.hpp"
#include "lipframe/errors.hpp"
#include "lipframe/fixtures.hpp"
#include "oracles.hpp"

using namespace lipframe;

TEST_CASE("disc fixture: membership and geometry") {
  const Frame d = fixtures::disc_frame(30);
  CHECK(d.p() == 1.0);
  CHECK(d.size() == 30);
  CHECK(d.subset().contains(Point::scalar(1.0 / 3.0)));
  CHECK(d.subset().contains(Point::scalar(1.0)));
  CHECK(d.subset().contains(Point::scalar(-1.0 / 3.0)));
  CHECK_FALSE(d.subset().contains(Point::scalar(1.01)));
  CHECK_FALSE(d.subset().contains(Point::scalar(2.0)));
  for (const Point& z : sample_points(d.subset(), 10000, 8)) {
    CHECK(std::abs(z[0] + 1.0) >= 2.0 / 3.0 - 1e-12);
  }
}

TEST_CASE("disc fixture: maps, frame map and tail") {
  const Frame d = fixtures::disc_frame(30);
  for (const Point& z : sample_points(d.subset(), 200, 9)) {
    const Scalar r = z[0] / (1.0 + z[0]);
    for (std::size_t n = 1; n <= 30; ++n) {
      CHECK(std::abs(d.map(n - 1)(z) - std::pow(r, static_cast<double>(n))) <= 1e-15);
    }
    CHECK(std::abs(frame_map(d, z)[0] - oracle::disc_frame_map(z[0], 30)) <= 1e-15);
    CHECK(std::abs(frame_map(d, z)[0] - z[0]) <= std::pow(2.0, -30));
    CHECK(d.tail_bound(z) == std::pow(2.0, -30));
  }
  for (std::size_t n = 1; n <= 10; ++n) {
    CHECK(*d.map(n - 1).claimed_lip == doctest::Approx(2.25 * n * std::pow(2.0, 1.0 - n)));
  }
}

TEST_CASE("disc fixture: boundary spot checks") {
  // On the boundary |z/(1+z)| = 1/2 exactly, so the tail bound is attained.
  const Frame d = fixtures::disc_frame(20);
  for (const Scalar z : {Scalar(1.0), Scalar(-1.0 / 3.0), Scalar(1.0 / 3.0, 2.0 / 3.0)}) {
    const Point p = Point::scalar(z);
    REQUIRE(d.subset().contains(p));
    CHECK(std::abs(z / (1.0 + z)) == doctest::Approx(0.5));
    const double err = std::abs(frame_map(d, p)[0] - z);
    CHECK(err <= d.tail_bound(p) + 1e-15);
    CHECK(err >= 0.5 * d.tail_bound(p) * std::abs(z));
  }
}

TEST_CASE("log fixture: maps and frame map") {
  const Frame f = fixtures::log_frame(40, 10.0);
  CHECK(f.map(0)(Point::scalar(7.0)) == Scalar(1.0));
  CHECK(frame_map(f, Point::scalar(1.0)) == Point::scalar(1.0));
  CHECK(frame_map(f, Point::scalar(std::exp(1.0)))[0].real() == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  for (const Point& x : sample_points(f.subset(), 100, 2)) {
    for (int k = 0; k < 40; ++k) {
      CHECK(f.map(static_cast<std::size_t>(k))(x).real() ==
            doctest::Approx(oracle::log_term(x[0].real(), k)).epsilon(1e-12));
    }
    CHECK(std::abs(frame_map(f, x)[0] - x[0]) <= f.tail_bound(x) + 1e-13 * x[0].real());
  }
  CHECK(f.subset().contains(Point::scalar(1e9)));
  CHECK_FALSE(f.subset().contains(Point::scalar(0.5)));
}

TEST_CASE("log fixture: analysis is an isometry into l1") {
  const Frame f = fixtures::log_frame(40, 10.0);
  for (const auto& [x, y] : sample_pairs(f.subset(), 200, 12)) {
    const double lhs = lp_norm(analysis(f, x) - analysis(f, y));
    CHECK(std::abs(lhs - std::abs(x[0].real() - y[0].real())) <= 1e-8);
    CHECK(lhs == doctest::Approx(oracle::log_analysis_l1_distance(x[0].real(), y[0].real(), 40)).epsilon(1e-12));
  }
}

TEST_CASE("log fixture: per-map Lipschitz constants stay below the derivative maximum") {
  const Frame f = fixtures::log_frame(12, 10.0);
  for (int k = 1; k < 12; ++k) {
    const double bound = oracle::log_term_derivative_max(k, 10.0);
    const double est = estimate_lipschitz(f.map(static_cast<std::size_t>(k)), f.subset(), 2000, 5);
    CHECK(est <= bound * (1.0 + 1e-9));
    CHECK(est >= 0.5 * bound);
  }
}

TEST_CASE("linear fixture") {
  Eigen::MatrixXcd u(1, 1);
  Eigen::MatrixXcd v(1, 1);
  u << 2.0;
  v << 1.0;
  const Frame f = fixtures::linear_frame(u, v);
  CHECK(frame_map(f, Point::scalar(1.5)) == Point::scalar(3.0));
  CHECK(f.tail_bound(Point::scalar(3.0)) == 0.0);

  const Frame id = fixtures::linear_frame(Eigen::MatrixXcd::Identity(3, 3), Eigen::MatrixXcd::Identity(3, 3));
  for (const Point& x : sample_points(id.subset(), 20, 1)) CHECK(frame_map(id, x) == x);

  Eigen::MatrixXcd zero(1, 1);
  zero << 0.0;
  Eigen::MatrixXcd one(1, 1);
  one << 1.0;
  CHECK_THROWS_AS(fixtures::linear_frame(one, zero), PreconditionError);
  CHECK_THROWS_AS(fixtures::linear_frame(Eigen::MatrixXcd::Ones(2, 1), Eigen::MatrixXcd::Ones(2, 2)), SchemaError);
}

TEST_CASE("orthogonal pair fixture") {
  const auto [f, g] = fixtures::orthogonal_pair();
  for (const Point& x : sample_points(f.subset(), 50, 3)) {
    CHECK(frame_map(f, x) == x);
    CHECK(frame_map(g, x) == x);
    CHECK(synthesis(f, analysis(g, x)) == Point::scalar(0.0));
    CHECK(synthesis(g, analysis(f, x)) == Point::scalar(0.0));
  }
}

TEST_CASE("fixture ids") {
  CHECK(fixtures::parse_fixture_id("disc:N=30").params.at("N") == "30");
  const auto log_id = fixtures::parse_fixture_id("log:N=40,right=10");
  CHECK(log_id.name == "log");
  CHECK(log_id.params.at("right") == "10");
  const auto lin = fixtures::parse_fixture_id("linear:U=(1 0;0 1),V=(2,0;0,2)");
  CHECK(lin.params.at("U") == "(1 0;0 1)");
  CHECK(lin.params.at("V") == "(2,0;0,2)");
  CHECK(fixtures::parse_fixture_id("orthopair").name == "orthopair");
  CHECK_THROWS_AS(fixtures::parse_fixture_id("circle:N=3"), SchemaError);
  CHECK_THROWS_AS(fixtures::parse_fixture_id("disc:M=3"), SchemaError);

  const auto built = fixtures::build(lin);
  REQUIRE(built.size() == 1);
  CHECK(frame_map(built[0], Point::real({1.0, -1.0})) == Point::real({2.0, -2.0}));
  CHECK(fixtures::build(fixtures::parse_fixture_id("orthopair")).size() == 2);
  CHECK(fixtures::build(fixtures::parse_fixture_id("disc")).front().size() == 30);
  CHECK_THROWS_AS(fixtures::build(fixtures::parse_fixture_id("disc:N=0")), SchemaError);
  CHECK_THROWS_AS(fixtures::build(fixtures::parse_fixture_id("linear:U=(1)")), SchemaError);
  CHECK_THROWS_AS(fixtures::build(fixtures::parse_fixture_id("linear:U=(1),V=(0)")), PreconditionError);
  CHECK_THROWS_AS(fixtures::with_length(lin, 4), SchemaError);
  CHECK(fixtures::build(fixtures::with_length(fixtures::parse_fixture_id("disc:N=30"), 5)).front().size() == 5);
}

TEST_CASE("inline matrices") {
  const auto m = fixtures::parse_inline_matrix("(1 2; 3 4)", "U");
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 2);
  CHECK(m(1, 0) == Scalar(3.0));
  CHECK_THROWS_AS(fixtures::parse_inline_matrix("(1 2; 3)", "U"), SchemaError);
  CHECK_THROWS_AS(fixtures::parse_inline_matrix("(1 x)", "U"), SchemaError);
  CHECK_THROWS_AS(fixtures::parse_inline_matrix("()", "U"), SchemaError);
}
