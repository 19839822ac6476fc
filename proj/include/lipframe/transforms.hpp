#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lipframe/frame.hpp"

namespace lipframe {

/// Invertible bi-Lipschitz self-map of M.
struct BiLipMap {
  PointMap forward;
  std::optional<PointMap> inverse;
  std::string label;

  Point operator()(const Point& x) const { return forward(x); }

  static BiLipMap identity();
  /// x ↦ s·x with inverse x ↦ x/s.
  static BiLipMap scaling(Scalar s);
};

/// Bounded linear operator on the ambient space.
struct AmbientLinMap {
  Eigen::MatrixXcd matrix;
  std::string label;

  Point operator()(const Point& x) const;

  static AmbientLinMap identity(std::size_t dim);
  static AmbientLinMap scalar(std::size_t dim, Scalar s);
};

/// Sampling parameters for range and identity checks.
struct CheckCfg {
  std::size_t samples = 200;
  std::uint64_t seed = 0;
  double tol = 1e-10;
};

/// (fₙ∘Tfg, Ttw τₙ). Tfg(M) ⊆ M and Ttw(M) ⊆ M are sample-checked and raise
/// MembershipError; a supplied Tfg inverse that disagrees with the forward map raises
/// PreconditionError.
Frame apply_similarity(const Frame& frame, const BiLipMap& t_fg, const AmbientLinMap& t_tw,
                       const CheckCfg& check = {});

struct RecoveredSimilarity {
  /// S_F⁻¹ θ_τ θ_g, with inverse S_G⁻¹ θ_ω θ_f.
  BiLipMap t_fg;
  /// θ_ω θ_f S_F⁻¹.
  PointMap t_tw;
};

RecoveredSimilarity recover_similarity(const Frame& f, const Frame& g, const SolverCfg& cfg);

struct SimilarityDefect {
  /// max over samples and n of |gₙ(x) − fₙ(Tfg x)|
  double maps = 0.0;
  /// max over n of ‖ωₙ − Ttw τₙ‖
  double vectors = 0.0;
};

SimilarityDefect similarity_defect(const Frame& f, const Frame& g, const RecoveredSimilarity& t,
                                   const CheckCfg& check = {});

/// Recovers the transforms and checks that they reproduce G from F.
bool is_similar(const Frame& f, const Frame& g, const SolverCfg& cfg, const CheckCfg& check = {});

/// Matrix of a point map that is known to be linear on the whole ambient space.
AmbientLinMap materialize_ambient(const PointMap& map, std::size_t dim, std::string label = {});

/// Coefficient probes whose synthesis lies in M for every frame given: admissible basis
/// vectors first, then analysis vectors of sampled points perturbed in random directions,
/// with the perturbation halved until admissible.
std::vector<SeqVec> projection_probes(const std::vector<const Frame*>& frames, std::size_t count,
                                      std::uint64_t seed);

/// max over probes of ‖P_F a − P_G a‖_p.
double projection_gap(const Frame& f, const Frame& g, std::size_t n_probes, std::uint64_t seed,
                      const SolverCfg& cfg);

bool projections_equal(const Frame& f, const Frame& g, std::size_t n_probes, std::uint64_t seed,
                       double tol, const SolverCfg& cfg);

/// Both ‖θ_τ θ_g x‖ and ‖θ_ω θ_f x‖ are within `tol` on every sampled x.
bool is_orthogonal(const Frame& f, const Frame& g, std::size_t samples, std::uint64_t seed, double tol);

/// (fₙ∘A + gₙ∘B, Cτₙ + Dωₙ) for orthogonal frames F, G with identity frame maps.
/// Every precondition is sample-checked and a failure raises PreconditionError naming it:
/// "F and G orthogonal", "F frame map is identity", "G frame map is identity",
/// "A maps M into M", "B maps M into M", "C maps M into M", "D maps M into M", "CA + DB = I".
Frame interpolate(const Frame& f, const Frame& g, const BiLipMap& a, const BiLipMap& b,
                  const AmbientLinMap& c, const AmbientLinMap& d, const CheckCfg& check = {});

/// interpolate with A = a·I, B = b·I, C = c·I, D = d·I.
Frame scalar_interpolate(const Frame& f, const Frame& g, Scalar a, Scalar b, Scalar c, Scalar d,
                         const CheckCfg& check = {});

/// Frame on M ⊕ M (p-sum norm) with maps x⊕y ↦ fₙ(x) + gₙ(y) and vectors τₙ ⊕ ωₙ.
/// Raises PreconditionError("F and G orthogonal") when the sampled mixed compositions
/// do not vanish.
Frame direct_sum(const Frame& f, const Frame& g, const CheckCfg& check = {});

}  // namespace lipframe
