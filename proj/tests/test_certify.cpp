#include <doctest.h>

#include <cmath>

#include "lipframe/certify.hpp"
#include "lipframe/duality.hpp"
#include "lipframe/errors.hpp"
#include "lipframe/fixtures.hpp"
#include "oracles.hpp"

using namespace lipframe;

namespace {

// sup over the disc of |S_N'(z) − 1|. For N = 30 it sits at z = −1/3 and equals 46·2^{−30}.
constexpr double kDiscGap30 = 4.284083843231201e-08;
constexpr double kDiscGap40 = 5.5479176808148125e-11;

Frame line(double u_entry, double v_entry) {
  Eigen::MatrixXcd u(1, 1);
  Eigen::MatrixXcd v(1, 1);
  u << u_entry;
  v << v_entry;
  return fixtures::linear_frame(u, v);
}

}  // namespace

TEST_CASE("frozen disc derivative gaps match the grid oracle") {
  CHECK(oracle::disc_frame_map_derivative_gap(30) == doctest::Approx(kDiscGap30).epsilon(1e-6));
  CHECK(46.0 * std::pow(2.0, -30) == doctest::Approx(kDiscGap30).epsilon(1e-12));
  CHECK(oracle::disc_frame_map_derivative_gap(40) == doctest::Approx(kDiscGap40).epsilon(1e-6));
  CHECK(oracle::disc_lipschitz_series() == doctest::Approx(4.0));
}

TEST_CASE("certify the disc frame at N = 30") {
  const Frame d = fixtures::disc_frame(30);
  const CertificationReport r = certify_frame(d, 10000, 64, 1);
  CHECK(r.verdict == Verdict::certified_asf);
  // The truncated frame map is within kDiscGap30 of the identity in Lipschitz norm.
  CHECK(std::abs(r.a_hat - 1.0) <= kDiscGap30);
  CHECK(std::abs(r.b_hat - 1.0) <= kDiscGap30);
  CHECK(r.c_hat <= 9.0);
  CHECK(std::abs(r.d_hat - 1.0) <= 1e-12);
  CHECK(r.n_pairs == 10000);
  CHECK(r.seed == 1);
}

TEST_CASE("certify the disc frame at N = 40 pins a and b to 1e-9") {
  const CertificationReport r = certify_frame(fixtures::disc_frame(40), 10000, 64, 1);
  CHECK(r.verdict == Verdict::certified_asf);
  CHECK(std::abs(r.a_hat - 1.0) <= 1e-9);
  CHECK(std::abs(r.b_hat - 1.0) <= 1e-9);
}

TEST_CASE("certify the log frame") {
  const CertificationReport r = certify_frame(fixtures::log_frame(40, 10.0), 5000, 64, 3);
  CHECK(r.verdict == Verdict::certified_asf);
  CHECK(std::abs(r.c_hat - 1.0) <= 1e-8);
  CHECK(std::abs(r.d_hat - 1.0) <= 1e-12);
  CHECK(r.notes.find("sampled on [1, 10]") != std::string::npos);
}

TEST_CASE("disc maps stay below their analytic Lipschitz constants") {
  const Frame d = fixtures::disc_frame(30);
  for (std::size_t n = 1; n <= 10; ++n) {
    const double est = estimate_lipschitz(d.map(n - 1), d.subset(), 10000, 17);
    CHECK(est <= *d.map(n - 1).claimed_lip);
  }
}

TEST_CASE("linear frames: exact constants") {
  const CertificationReport r = certify_frame(line(2.0, 1.0), 1000, 16, 2);
  CHECK(r.a_hat == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.b_hat == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.c_hat == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.d_hat == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("synthesis norm estimate reaches the spectral norm for p = 2") {
  Eigen::MatrixXcd u(2, 2);
  Eigen::MatrixXcd v(2, 2);
  u << 1.0, 0.0, 0.0, 1.0;
  v << 3.0, 1.0, 0.0, 2.0;
  const Frame f = fixtures::linear_frame(u, v, 2.0);
  const double spectral = Eigen::JacobiSVD<Eigen::MatrixXcd>(v).singularValues()(0);
  const double est = estimate_synthesis_norm(f, 16, 4);
  CHECK(est <= spectral * (1.0 + 1e-12));
  CHECK(est == doctest::Approx(spectral).epsilon(1e-10));
}

TEST_CASE("verdicts") {
  // A zero analysis map collapses S, so no positive lower bound exists.
  const auto m = subsets::interval(0.0, 1.0);
  const Frame flat(m, 1.0, {LipMap{[](const Point&) { return Scalar(0.0); }, 0.0, "0"}}, {Point::scalar(1.0)});
  CHECK(certify_frame(flat, 100, 4, 0).verdict == Verdict::failed_lower_bound);

  CertifyOptions bessel;
  bessel.bessel_only = true;
  const CertificationReport bs = certify_frame(flat, 100, 4, 0, bessel);
  CHECK(bs.verdict == Verdict::certified_bs);
  CHECK(apply_certification(flat, bs).kind_hint() == FrameKind::bs);

  const Frame broken(m, 1.0,
                     {LipMap{[](const Point& x) { return x[0].real() > 0.5 ? Scalar(std::nan("")) : x[0]; }, 1.0, "nan"}},
                     {Point::scalar(1.0)});
  const CertificationReport bad = certify_frame(broken, 100, 4, 0);
  CHECK(bad.verdict == Verdict::failed_evaluation);
  CHECK(bad.a_hat == 0.0);
  CHECK(apply_certification(broken, bad).kind_hint() == FrameKind::unverified);

  CHECK(to_string(Verdict::certified_asf) == "certified-ASF");
  CHECK(to_string(Verdict::failed_lower_bound) == "failed(lower-bound)");
  CHECK_THROWS_AS(certify_frame(flat, 0, 4, 0), Error);
}

TEST_CASE("certification is monotone in the number of pairs") {
  // Pair lists nest, so more pairs can only widen [a_hat, b_hat].
  const Frame d = fixtures::disc_frame(8);
  const CertificationReport small = certify_frame(d, 500, 8, 6);
  const CertificationReport large = certify_frame(d, 5000, 8, 6);
  CHECK(large.a_hat <= small.a_hat);
  CHECK(large.b_hat >= small.b_hat);
  CHECK(large.c_hat >= small.c_hat);
}

TEST_CASE("report json has exactly the documented fields") {
  const CertificationReport r = certify_frame(line(2.0, 1.0), 10, 4, 0);
  nlohmann::json j;
  to_json(j, r);
  CHECK(j.size() == 8);
  for (const char* key : {"a_hat", "b_hat", "c_hat", "d_hat", "n_pairs", "seed", "verdict", "notes"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["verdict"] == "certified-ASF");
}

TEST_CASE("canonical dual frame bounds are reciprocal") {
  Eigen::MatrixXcd u(2, 2);
  Eigen::MatrixXcd v(2, 2);
  u << 2.0, 0.0, 0.0, 0.5;
  v << 1.0, 0.0, 0.0, 1.0;
  const Frame f = fixtures::linear_frame(u, v);
  SolverCfg cfg;
  cfg.damping = 0.4;
  const Frame dual = canonical_dual(f, cfg);
  const CertificationReport rf = certify_frame(f, 4000, 16, 8);
  const CertificationReport rd = certify_frame(dual, 4000, 16, 8);
  // Sampled extremes of S and S⁻¹ are both close to the eigenvalue extremes.
  CHECK(rd.a_hat == doctest::Approx(1.0 / rf.b_hat).epsilon(1e-2));
  CHECK(rd.b_hat == doctest::Approx(1.0 / rf.a_hat).epsilon(1e-2));
  CHECK(rd.a_hat >= 0.5 - 1e-9);
  CHECK(rd.b_hat <= 2.0 + 1e-9);
}
