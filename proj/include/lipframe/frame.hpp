#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lipframe/spaces.hpp"

namespace lipframe {

using PointMap = std::function<Point(const Point&)>;
using TailBound = std::function<double(const Point&)>;

/// Scalar-valued Lipschitz map on the frame's subset.
struct LipMap {
  std::function<Scalar(const Point&)> eval;
  /// Analytic Lipschitz constant, when one is known.
  std::optional<double> claimed_lip;
  std::string label;

  Scalar operator()(const Point& x) const { return eval(x); }
};

enum class FrameKind { unverified, asf, sf, bs };

std::string to_string(FrameKind kind);

/// A Lipschitz p-ASF candidate: maps fₙ on M paired with points τₙ ∈ M, truncated at N.
///
/// Immutable after construction. The constructor enforces len(f) = len(τ) = N ≥ 1,
/// τₙ ∈ M and 1 ≤ p < ∞. `tail_bound(x)` bounds the norm of the omitted series tail
/// Σ_{n>N} fₙ(x)τₙ and is zero for exact finite frames.
class Frame {
 public:
  Frame(SubsetSpec subset, double p, std::vector<LipMap> maps, std::vector<Point> vectors,
        TailBound tail_bound = {}, FrameKind kind_hint = FrameKind::unverified);

  const SubsetSpec& subset() const noexcept { return subset_; }
  double p() const noexcept { return p_; }
  std::size_t size() const noexcept { return maps_.size(); }
  const std::vector<LipMap>& maps() const noexcept { return maps_; }
  const LipMap& map(std::size_t i) const { return maps_.at(i); }
  const std::vector<Point>& vectors() const noexcept { return vectors_; }
  const Point& vector(std::size_t i) const { return vectors_.at(i); }
  double tail_bound(const Point& x) const;
  FrameKind kind_hint() const noexcept { return kind_hint_; }
  /// Columns τ₁..τ_N as an ambient_dim × N matrix.
  const Eigen::MatrixXcd& synthesis_matrix() const noexcept { return synthesis_matrix_; }

  Frame with_kind(FrameKind kind) const;

 private:
  SubsetSpec subset_;
  double p_;
  std::vector<LipMap> maps_;
  std::vector<Point> vectors_;
  TailBound tail_bound_;
  FrameKind kind_hint_;
  Eigen::MatrixXcd synthesis_matrix_;
};

/// Throws FrameMismatch unless both frames live on the same subset with equal p and N.
void require_compatible(const Frame& f, const Frame& g, const std::string& what);

/// Damped fixed-point configuration for S⁻¹.
struct SolverCfg {
  double damping = 1.0;
  std::size_t max_iter = 1000;
  double residual_tol = 1e-12;
  /// A converged iterate outside M is projected back when it lies within
  /// membership_slack · (tail_bound + residual_tol) of M.
  double membership_slack = 4.0;

  void validate() const;
};

struct Inversion {
  Point x;
  std::size_t iterations = 0;
  double residual = 0.0;
  bool projected = false;
};

/// θ_f x = (f₁(x), …, f_N(x)). Throws MembershipError when x ∉ M.
SeqVec analysis(const Frame& frame, const Point& x);

/// θ_τ a = Σ aₙτₙ.
Point synthesis(const Frame& frame, const SeqVec& a);

/// S x = θ_τ θ_f x.
Point frame_map(const Frame& frame, const Point& x);

/// Solves map(x) = y by x ← x − λ(map(x) − y) from `start`.
/// Iteration k evaluates the map once; a residual at or below tolerance ends the loop.
/// Throws Divergence after 10 consecutive residual increases or a non-finite residual,
/// NoConvergence after max_iter evaluations.
Inversion damped_fixed_point(const PointMap& map, const Point& y, const SolverCfg& cfg,
                             const Point& start, const AmbientNorm& norm);

/// S⁻¹y, started at y, with the result settled into M.
Inversion invert_frame_map(const Frame& frame, const Point& y, const SolverCfg& cfg);

/// Σ fₙ(x) S⁻¹τₙ.
Point reconstruct(const Frame& frame, const Point& x, const SolverCfg& cfg);

/// P a = θ_f S⁻¹ θ_τ a.
SeqVec coefficient_projection(const Frame& frame, const SeqVec& a, const SolverCfg& cfg);

/// Thread-safe memo of point-to-point values keyed by coordinates bucketed at `bucket`
/// (a bucket of 0 keys on exact bit patterns).
class InverseCache {
 public:
  explicit InverseCache(double bucket = 1e-12) : bucket_(bucket) {}

  std::optional<Point> find(const Point& key) const;
  void insert(const Point& key, const Point& value);
  std::size_t size() const;

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<long long>& key) const noexcept;
  };
  std::optional<std::vector<long long>> bucket_key(const Point& x) const;

  double bucket_;
  mutable std::mutex mutex_;
  std::unordered_map<std::vector<long long>, Point, KeyHash> entries_;
};

namespace detail {

/// Σ fₙ(x)τₙ accumulated term by term, without the membership check.
Point frame_map_termwise(const Frame& frame, const Point& x);

/// Projects a near-miss iterate into M or throws MembershipError.
Point settle_in_subset(const Frame& frame, const Point& x, const SolverCfg& cfg, bool* projected);

}  // namespace detail

}  // namespace lipframe
