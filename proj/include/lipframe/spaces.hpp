#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lipframe {

using Scalar = std::complex<double>;

enum class ScalarField { real, complex };

/// Slack applied to subset predicates so that closed-set boundary points are accepted.
inline constexpr double kMembershipTolerance = 1e-12;

/// Default minimum separation of sampled pairs used for difference quotients.
inline constexpr double kDefaultMinSeparation = 1e-6;

/// Element of the ambient space: a finite vector of real or complex scalars.
/// Real points carry zero imaginary parts and share the complex code path.
class Point {
 public:
  Point() = default;
  Point(std::vector<Scalar> coords, ScalarField field);

  static Point zeros(std::size_t dim, ScalarField field);
  static Point real(std::initializer_list<double> values);
  static Point real(std::span<const double> values);
  static Point scalar(Scalar value);

  std::size_t dim() const noexcept { return coords_.size(); }
  ScalarField field() const noexcept { return field_; }
  std::span<const Scalar> coords() const noexcept { return coords_; }
  const Scalar& operator[](std::size_t i) const { return coords_[i]; }
  Scalar& operator[](std::size_t i) { return coords_[i]; }

  bool is_finite() const noexcept;

  Point& operator+=(const Point& other);
  Point& operator-=(const Point& other);
  Point& operator*=(Scalar factor);

  friend Point operator+(Point lhs, const Point& rhs) { return lhs += rhs; }
  friend Point operator-(Point lhs, const Point& rhs) { return lhs -= rhs; }
  friend Point operator*(Scalar factor, Point x) { return x *= factor; }
  friend Point operator*(Point x, Scalar factor) { return x *= factor; }
  friend bool operator==(const Point&, const Point&) = default;

  /// Concatenation x ⊕ y.
  friend Point direct_sum(const Point& x, const Point& y);
  /// Coordinates [offset, offset + dim).
  Point slice(std::size_t offset, std::size_t dim) const;

 private:
  std::vector<Scalar> coords_;
  ScalarField field_ = ScalarField::real;
};

/// Norm on the ambient space. `psum` combines block norms by an outer p-sum and is
/// used for the product space M ⊕ M.
class AmbientNorm {
 public:
  enum class Kind { lp, sup, psum };

  static AmbientNorm lp(double q);
  static AmbientNorm sup();
  static AmbientNorm psum(double p, std::vector<AmbientNorm> blocks, std::vector<std::size_t> block_dims);

  double operator()(const Point& x) const;
  double operator()(std::span<const Scalar> x) const;

  Kind kind() const noexcept { return kind_; }
  double exponent() const noexcept { return exponent_; }
  std::string describe() const;

  friend bool operator==(const AmbientNorm&, const AmbientNorm&) = default;

 private:
  Kind kind_ = Kind::lp;
  double exponent_ = 2.0;
  std::vector<AmbientNorm> blocks_;
  std::vector<std::size_t> block_dims_;
};

/// Seeded generator. Distributions are derived from raw 64-bit draws so that sample
/// streams agree across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// A subset M of the ambient space with its inherited norm.
struct SubsetSpec {
  std::size_t ambient_dim = 1;
  ScalarField field = ScalarField::real;
  AmbientNorm norm = AmbientNorm::lp(2.0);
  /// Membership predicate, already including kMembershipTolerance.
  std::function<bool(const Point&)> contains;
  /// Draws one point of M; must only consume randomness from the given generator.
  std::function<Point(Rng&)> sampler;
  /// Nearest-point map onto M, when one is known in closed form.
  std::function<Point(const Point&)> project;
  std::string description;

  double distance(const Point& x, const Point& y) const { return norm(x - y); }
  bool same_as(const SubsetSpec& other) const;
};

/// Truncated ℓ^p coefficient vector. Indices in the public API are 1-based.
class SeqVec {
 public:
  SeqVec(std::vector<Scalar> entries, double p);
  static SeqVec zeros(std::size_t length, double p);

  std::size_t size() const noexcept { return entries_.size(); }
  double p() const noexcept { return p_; }
  std::span<const Scalar> entries() const noexcept { return entries_; }
  const Scalar& operator[](std::size_t i) const { return entries_[i]; }
  Scalar& operator[](std::size_t i) { return entries_[i]; }

  SeqVec& operator+=(const SeqVec& other);
  SeqVec& operator-=(const SeqVec& other);
  SeqVec& operator*=(Scalar factor);
  friend SeqVec operator+(SeqVec lhs, const SeqVec& rhs) { return lhs += rhs; }
  friend SeqVec operator-(SeqVec lhs, const SeqVec& rhs) { return lhs -= rhs; }
  friend SeqVec operator*(Scalar factor, SeqVec v) { return v *= factor; }
  friend bool operator==(const SeqVec&, const SeqVec&) = default;

 private:
  std::vector<Scalar> entries_;
  double p_ = 1.0;
};

/// (Σ|aₙ|^p)^{1/p}
double lp_norm(const SeqVec& v);

/// eₙ of length N; n is 1-based.
SeqVec basis_vector(std::size_t n, std::size_t length, double p);

/// ζₙ(v); n is 1-based.
Scalar coordinate(const SeqVec& v, std::size_t n);

/// `count` pairs of points of M at least `min_sep` apart. A call with a larger count
/// extends the list produced by a smaller count with the same seed.
std::vector<std::pair<Point, Point>> sample_pairs(const SubsetSpec& subset, std::size_t count,
                                                  std::uint64_t seed,
                                                  double min_sep = kDefaultMinSeparation);

std::vector<Point> sample_points(const SubsetSpec& subset, std::size_t count, std::uint64_t seed);

namespace subsets {

/// Closed interval [lo, hi] of the real line.
SubsetSpec interval(double lo, double hi);

/// Half-line [lo, ∞); sampling is restricted to the window [lo, window_hi].
SubsetSpec half_line(double lo, double window_hi);

/// Closed complex disc |z − center| ≤ radius, sampled uniformly by area.
SubsetSpec disc(Scalar center, double radius);

/// The whole space 𝕂^dim; sampling draws coordinates uniformly from [−box, box].
SubsetSpec whole_space(std::size_t dim, ScalarField field, double box = 10.0,
                       AmbientNorm norm = AmbientNorm::lp(2.0));

/// M ⊕ N with the p-sum norm (‖x‖^p + ‖y‖^p)^{1/p}.
SubsetSpec product(const SubsetSpec& first, const SubsetSpec& second, double p);

}  // namespace subsets

}  // namespace lipframe
