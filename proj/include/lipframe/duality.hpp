#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "lipframe/frame.hpp"

namespace lipframe {

/// Lipschitz map U: M → ℓ^p.
struct LipOperatorU {
  std::function<SeqVec(const Point&)> eval;
  std::string label;

  SeqVec operator()(const Point& x) const { return eval(x); }
};

/// Bounded linear V: ℓ^p → X stored as an ambient_dim × N matrix (a ↦ Σ aₙ·column n).
struct LinOperatorV {
  Eigen::MatrixXcd matrix;
  std::string label;

  Point operator()(const SeqVec& a) const;
};

/// General coefficient-to-point map; left inverses are linear only when S⁻¹ is.
using CoefficientMap = std::function<Point(const SeqVec&)>;

/// S⁻¹ of a frame, evaluated lazily by the damped solver and memoised.
/// Copies share one cache, which is safe for concurrent use.
class FrameInverse {
 public:
  FrameInverse(Frame frame, SolverCfg cfg);

  Point operator()(const Point& y) const;
  const Frame& frame() const noexcept { return *frame_; }
  const SolverCfg& cfg() const noexcept { return cfg_; }

 private:
  std::shared_ptr<const Frame> frame_;
  SolverCfg cfg_;
  std::shared_ptr<InverseCache> cache_;
};

/// ({fₙ∘S⁻¹}, {S⁻¹τₙ}).
Frame canonical_dual(const Frame& frame, const SolverCfg& cfg);

struct DualityDefect {
  /// max over samples of ‖θ_τ θ_g x − x‖
  double f_synthesis_of_g_analysis = 0.0;
  /// max over samples of ‖θ_ω θ_f x − x‖
  double g_synthesis_of_f_analysis = 0.0;
};

DualityDefect duality_defect(const Frame& f, const Frame& g, std::size_t samples, std::uint64_t seed);

/// Both mixed compositions reproduce every sampled x to within `tol`.
bool is_dual(const Frame& f, const Frame& g, std::size_t samples, std::uint64_t seed, double tol);

/// R = θ_f S⁻¹ + (I − θ_f S⁻¹ θ_τ) U, a Lipschitz right inverse of θ_τ.
LipOperatorU right_inverse_family(const Frame& frame, const LipOperatorU& u, const SolverCfg& cfg);

/// L = S⁻¹ θ_τ + V (I − θ_f S⁻¹ θ_τ), a left inverse of θ_f.
CoefficientMap left_inverse_family(const Frame& frame, const LinOperatorV& v, const SolverCfg& cfg);

/// Matrix of a coefficient map that is known to be linear, read off the basis vectors.
LinOperatorV materialize(const CoefficientMap& map, std::size_t n_terms, double p, std::size_t dim,
                         std::string label = {});

/// The map S⁻¹ + VU − Vθ_f S⁻¹ θ_τ U whose invertibility the dual parametrization needs.
PointMap dual_composite(const Frame& frame, const LipOperatorU& u, const LinOperatorV& v,
                        const SolverCfg& cfg);

/// The dual (g, ω) with
///   gₙ = fₙS⁻¹ + ζₙU − fₙS⁻¹θ_τU,   ωₙ = S⁻¹τₙ + Veₙ − Vθ_fS⁻¹τₙ.
/// The composite map is probed for invertibility from 20 seeded points of M; a failed
/// probe raises PreconditionError, and ωₙ ∉ M raises MembershipError.
Frame dual_from_parameters(const Frame& frame, const LipOperatorU& u, const LinOperatorV& v,
                           const SolverCfg& cfg);

}  // namespace lipframe
