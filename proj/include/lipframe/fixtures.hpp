#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lipframe/frame.hpp"

namespace lipframe::fixtures {

/// fₙ(z) = (z/(1+z))ⁿ, τₙ = 1 on M = {z ∈ ℂ : |z| ≤ ½|z+1|}, p = 1.
///
/// M is the closed disc centred at 1/3 with radius 2/3; on it |z/(1+z)| ≤ ½, so
/// the omitted tail is bounded by 2^{-N} and S z = z in the limit.
Frame disc_frame(std::size_t n_terms);

/// f₁ ≡ 1, f_{n+1}(x) = (log x)ⁿ/n!, τₙ = 1 on M = [1, ∞), p = 1.
///
/// M is unbounded; `right_end` fixes the sampling window [1, right_end]. The tail is
/// bounded by the Lagrange remainder x·(log x)^N/N!.
Frame log_frame(std::size_t n_terms, double right_end);

/// fₙ = ζₙU, τₙ = Veₙ on the whole space 𝕂^dim, with U an N×dim and V a dim×N matrix.
/// S is the matrix VU; throws PreconditionError when VU is numerically singular.
Frame linear_frame(const Eigen::MatrixXcd& u_rows, const Eigen::MatrixXcd& v_cols, double p = 1.0,
                   AmbientNorm norm = AmbientNorm::lp(2.0));

/// Two mutually orthogonal Lipschitz 1-SFs on ℝ with N = 2:
/// F = ((x, 0), (1, 0)) and G = ((0, x), (0, 1)).
std::pair<Frame, Frame> orthogonal_pair();

/// Parsed fixture identifier such as "disc:N=30" or "linear:U=(2),V=(1)".
struct FixtureId {
  std::string name;
  std::map<std::string, std::string> params;

  std::string to_string() const;
};

/// Throws SchemaError on unknown names, unknown parameters or malformed values.
FixtureId parse_fixture_id(const std::string& text);

/// Inline matrix: rows separated by ';', entries by whitespace or ','; optional parentheses.
Eigen::MatrixXcd parse_inline_matrix(const std::string& text, const std::string& field);

/// Builds the frames named by `id`; `orthopair` yields two frames, everything else one.
std::vector<Frame> build(const FixtureId& id);

/// Same fixture family with the truncation length replaced; only disc and log have one.
FixtureId with_length(FixtureId id, std::size_t n_terms);

}  // namespace lipframe::fixtures
