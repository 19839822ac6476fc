#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "lipframe/frame.hpp"

namespace lipframe {

enum class Verdict { certified_asf, certified_bs, failed_lower_bound, failed_evaluation };

/// "certified-ASF", "certified-BS", "failed(lower-bound)", "failed(evaluation)".
std::string to_string(Verdict verdict);

/// Empirical estimates of the four frame constants.
///
/// The estimates are one-sided: a_hat is a minimum over sampled pairs and so can only
/// overestimate the optimal lower bound a, while b_hat, c_hat and d_hat are maxima over
/// samples or probes and can only underestimate b, c and d.
struct CertificationReport {
  double a_hat = 0.0;
  double b_hat = 0.0;
  double c_hat = 0.0;
  double d_hat = 0.0;
  std::size_t n_pairs = 0;
  std::uint64_t seed = 0;
  Verdict verdict = Verdict::failed_evaluation;
  std::string notes;
};

void to_json(nlohmann::json& j, const CertificationReport& report);

struct CertifyOptions {
  /// a_hat below this classifies the frame as failed(lower-bound).
  double lower_floor = 1e-9;
  /// Only certify the Bessel constants c and d; the verdict is then certified-BS.
  bool bessel_only = false;
  double min_sep = kDefaultMinSeparation;
};

/// max over sampled pairs of |g(x) − g(y)| / ‖x − y‖.
double estimate_lipschitz(const LipMap& g, const SubsetSpec& subset, std::size_t n_pairs,
                          std::uint64_t seed, double min_sep = kDefaultMinSeparation);

/// max of ‖θ_τ a‖ / ‖a‖_p over all basis vectors and `n_probes` random vectors.
/// For p = 2 on a Euclidean ambient space a power iteration on θ_τ*θ_τ adds one more probe.
double estimate_synthesis_norm(const Frame& frame, std::size_t n_probes, std::uint64_t seed);

CertificationReport certify_frame(const Frame& frame, std::size_t n_pairs, std::size_t n_probes,
                                  std::uint64_t seed, const CertifyOptions& options = {});

/// Copy of `frame` whose kind hint reflects a certified verdict.
Frame apply_certification(const Frame& frame, const CertificationReport& report);

}  // namespace lipframe
