#include "lipframe/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "lipframe/errors.hpp"
#include "parallel.hpp"

namespace lipframe {

namespace {

constexpr std::uint64_t kProbeSeedSalt = 0x5851f42d4c957f2dULL;
constexpr int kPowerIterations = 200;

SeqVec random_probe(Rng& rng, std::size_t length, double p, bool complex_entries) {
  std::vector<Scalar> entries(length);
  for (auto& a : entries) {
    const double re = rng.normal();
    const double im = complex_entries ? rng.normal() : 0.0;
    a = Scalar(re, im);
  }
  SeqVec v(std::move(entries), p);
  const double n = lp_norm(v);
  if (n > 0.0) v *= 1.0 / n;
  return v;
}

double power_iteration_norm(const Eigen::MatrixXcd& m, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXcd v(m.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Scalar(rng.normal(), rng.normal());
  if (v.norm() == 0.0) return 0.0;
  v.normalize();
  const Eigen::MatrixXcd gram = m.adjoint() * m;
  for (int it = 0; it < kPowerIterations; ++it) {
    Eigen::VectorXcd w = gram * v;
    const double n = w.norm();
    if (n == 0.0) return 0.0;
    v = w / n;
  }
  return (m * v).norm();
}

}  // namespace

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::certified_asf:
      return "certified-ASF";
    case Verdict::certified_bs:
      return "certified-BS";
    case Verdict::failed_lower_bound:
      return "failed(lower-bound)";
    case Verdict::failed_evaluation:
      return "failed(evaluation)";
  }
  return "failed(evaluation)";
}

void to_json(nlohmann::json& j, const CertificationReport& report) {
  j = nlohmann::json{{"a_hat", report.a_hat},     {"b_hat", report.b_hat},
                     {"c_hat", report.c_hat},     {"d_hat", report.d_hat},
                     {"n_pairs", report.n_pairs}, {"seed", report.seed},
                     {"verdict", to_string(report.verdict)}, {"notes", report.notes}};
}

double estimate_lipschitz(const LipMap& g, const SubsetSpec& subset, std::size_t n_pairs,
                          std::uint64_t seed, double min_sep) {
  if (n_pairs < 1) throw Error("estimate_lipschitz: n_pairs must be at least 1");
  const auto pairs = sample_pairs(subset, n_pairs, seed, min_sep);
  std::vector<double> ratios(pairs.size());
  detail::parallel_for(pairs.size(), [&](std::size_t i) {
    const auto& [x, y] = pairs[i];
    ratios[i] = std::abs(g(x) - g(y)) / subset.distance(x, y);
  });
  double best = 0.0;
  for (double r : ratios) {
    if (!std::isfinite(r)) throw Error("estimate_lipschitz: non-finite difference quotient");
    best = std::max(best, r);
  }
  return best;
}

double estimate_synthesis_norm(const Frame& frame, std::size_t n_probes, std::uint64_t seed) {
  if (n_probes < 1) throw Error("estimate_synthesis_norm: n_probes must be at least 1");
  const std::size_t n_terms = frame.size();
  const double p = frame.p();
  const SubsetSpec& m = frame.subset();
  double best = 0.0;
  auto consider = [&](const SeqVec& a) {
    const double denom = lp_norm(a);
    if (denom > 0.0) best = std::max(best, m.norm(synthesis(frame, a)) / denom);
  };
  for (std::size_t n = 1; n <= n_terms; ++n) consider(basis_vector(n, n_terms, p));
  Rng rng(seed ^ kProbeSeedSalt);
  const bool complex_entries = m.field == ScalarField::complex;
  for (std::size_t k = 0; k < n_probes; ++k) consider(random_probe(rng, n_terms, p, complex_entries));
  if (p == 2.0 && m.norm.kind() == AmbientNorm::Kind::lp && m.norm.exponent() == 2.0) {
    best = std::max(best, power_iteration_norm(frame.synthesis_matrix(), seed));
  }
  return best;
}

CertificationReport certify_frame(const Frame& frame, std::size_t n_pairs, std::size_t n_probes,
                                  std::uint64_t seed, const CertifyOptions& options) {
  if (n_pairs < 1 || n_probes < 1) throw Error("certify_frame: n_pairs and n_probes must be at least 1");
  const SubsetSpec& m = frame.subset();
  CertificationReport report;
  report.n_pairs = n_pairs;
  report.seed = seed;

  std::ostringstream notes;
  notes << "one-sided empirical estimates (a_hat >= optimal a; b_hat, c_hat, d_hat <= optimal b, c, d); "
        << "M = " << m.description << "; ambient norm " << m.norm.describe() << "; p = " << frame.p()
        << "; N = " << frame.size() << "; pairs with separation >= " << options.min_sep << "; probes = "
        << frame.size() << " basis + " << n_probes << " random";

  const auto pairs = sample_pairs(m, n_pairs, seed, options.min_sep);
  struct PairRatios {
    double frame_ratio = 0.0;
    double analysis_ratio = 0.0;
  };
  std::vector<PairRatios> ratios(pairs.size());
  std::optional<std::string> failure;
  try {
    detail::parallel_for(pairs.size(), [&](std::size_t i) {
      const auto& [x, y] = pairs[i];
      const double dist = m.distance(x, y);
      const SeqVec ax = analysis(frame, x);
      const SeqVec ay = analysis(frame, y);
      const Point sx = synthesis(frame, ax);
      const Point sy = synthesis(frame, ay);
      ratios[i].frame_ratio = m.distance(sx, sy) / dist;
      ratios[i].analysis_ratio = lp_norm(ax - ay) / dist;
    });
  } catch (const Error& e) {
    failure = e.what();
  }

  double a_hat = std::numeric_limits<double>::infinity();
  double b_hat = 0.0;
  double c_hat = 0.0;
  if (!failure) {
    for (const auto& r : ratios) {
      if (!std::isfinite(r.frame_ratio) || !std::isfinite(r.analysis_ratio)) {
        failure = "non-finite difference quotient";
        break;
      }
      a_hat = std::min(a_hat, r.frame_ratio);
      b_hat = std::max(b_hat, r.frame_ratio);
      c_hat = std::max(c_hat, r.analysis_ratio);
    }
  }
  double d_hat = 0.0;
  if (!failure) {
    try {
      d_hat = estimate_synthesis_norm(frame, n_probes, seed);
      if (!std::isfinite(d_hat)) failure = "non-finite synthesis ratio";
    } catch (const Error& e) {
      failure = e.what();
    }
  }

  if (failure) {
    report.verdict = Verdict::failed_evaluation;
    notes << "; evaluation failed: " << *failure;
    report.notes = notes.str();
    return report;
  }
  report.a_hat = a_hat;
  report.b_hat = b_hat;
  report.c_hat = c_hat;
  report.d_hat = d_hat;
  if (options.bessel_only) {
    report.verdict = Verdict::certified_bs;
  } else if (a_hat < options.lower_floor) {
    report.verdict = Verdict::failed_lower_bound;
    notes << "; a_hat below floor " << options.lower_floor;
  } else {
    report.verdict = Verdict::certified_asf;
  }
  report.notes = notes.str();
  return report;
}

Frame apply_certification(const Frame& frame, const CertificationReport& report) {
  switch (report.verdict) {
    case Verdict::certified_asf:
      return frame.with_kind(FrameKind::asf);
    case Verdict::certified_bs:
      return frame.with_kind(FrameKind::bs);
    default:
      return frame.with_kind(FrameKind::unverified);
  }
}

}  // namespace lipframe
