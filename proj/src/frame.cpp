#include "lipframe/frame.hpp"

#include <cmath>
#include <cstring>
#include <limits>

#include "lipframe/errors.hpp"

namespace lipframe {

namespace {

constexpr std::size_t kDivergenceStreak = 10;

Point point_from_column(const Eigen::VectorXcd& v, ScalarField base_field) {
  std::vector<Scalar> coords(v.data(), v.data() + v.size());
  ScalarField field = base_field;
  for (const auto& c : coords) {
    if (c.imag() != 0.0) field = ScalarField::complex;
  }
  return Point(std::move(coords), field);
}

void require_member(const Frame& frame, const Point& x, const char* op) {
  if (x.dim() != frame.subset().ambient_dim) {
    throw FrameMismatch(std::string(op) + ": point dimension " + std::to_string(x.dim()) +
                        " does not match ambient dimension " +
                        std::to_string(frame.subset().ambient_dim));
  }
  if (!frame.subset().contains(x)) {
    throw MembershipError(std::string(op) + ": point is not in " + frame.subset().description);
  }
}

void require_shape(const Frame& frame, const SeqVec& a, const char* op) {
  if (a.size() != frame.size() || a.p() != frame.p()) {
    throw FrameMismatch(std::string(op) + ": coefficient vector (N=" + std::to_string(a.size()) +
                        ", p=" + std::to_string(a.p()) + ") does not match frame (N=" +
                        std::to_string(frame.size()) + ", p=" + std::to_string(frame.p()) + ")");
  }
}

}  // namespace

std::string to_string(FrameKind kind) {
  switch (kind) {
    case FrameKind::unverified:
      return "unverified";
    case FrameKind::asf:
      return "ASF";
    case FrameKind::sf:
      return "SF";
    case FrameKind::bs:
      return "BS";
  }
  return "unverified";
}

// ---------------------------------------------------------------------------
// Frame

Frame::Frame(SubsetSpec subset, double p, std::vector<LipMap> maps, std::vector<Point> vectors,
             TailBound tail_bound, FrameKind kind_hint)
    : subset_(std::move(subset)),
      p_(p),
      maps_(std::move(maps)),
      vectors_(std::move(vectors)),
      tail_bound_(std::move(tail_bound)),
      kind_hint_(kind_hint) {
  if (!(p_ >= 1.0) || !std::isfinite(p_)) throw Error("Frame: exponent must satisfy 1 <= p < inf");
  if (maps_.empty()) throw Error("Frame: truncation length must be at least 1");
  if (maps_.size() != vectors_.size()) {
    throw FrameMismatch("Frame: " + std::to_string(maps_.size()) + " maps but " +
                        std::to_string(vectors_.size()) + " vectors");
  }
  for (const auto& m : maps_) {
    if (!m.eval) throw Error("Frame: map '" + m.label + "' has no evaluator");
  }
  const std::size_t dim = subset_.ambient_dim;
  synthesis_matrix_.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(maps_.size()));
  for (std::size_t n = 0; n < vectors_.size(); ++n) {
    const Point& tau = vectors_[n];
    if (tau.dim() != dim) {
      throw FrameMismatch("Frame: vector " + std::to_string(n + 1) + " has dimension " +
                          std::to_string(tau.dim()) + ", ambient dimension is " +
                          std::to_string(dim));
    }
    if (!subset_.contains(tau)) {
      throw MembershipError("Frame: vector " + std::to_string(n + 1) + " is not in " +
                            subset_.description);
    }
    for (std::size_t i = 0; i < dim; ++i) {
      synthesis_matrix_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n)) = tau[i];
    }
  }
  if (!tail_bound_) tail_bound_ = [](const Point&) { return 0.0; };
}

double Frame::tail_bound(const Point& x) const {
  const double t = tail_bound_(x);
  if (!(t >= 0.0)) throw Error("Frame: tail bound must be non-negative");
  return t;
}

Frame Frame::with_kind(FrameKind kind) const {
  Frame copy = *this;
  copy.kind_hint_ = kind;
  return copy;
}

void require_compatible(const Frame& f, const Frame& g, const std::string& what) {
  if (!f.subset().same_as(g.subset())) {
    throw FrameMismatch(what + ": frames live on different subsets ('" + f.subset().description +
                        "' vs '" + g.subset().description + "')");
  }
  if (f.p() != g.p()) throw FrameMismatch(what + ": frames have different exponents p");
  if (f.size() != g.size()) throw FrameMismatch(what + ": frames have different lengths N");
}

void SolverCfg::validate() const {
  if (!(damping > 0.0)) throw Error("SolverCfg: damping must be positive");
  if (!(residual_tol > 0.0)) throw Error("SolverCfg: residual_tol must be positive");
  if (max_iter == 0) throw Error("SolverCfg: max_iter must be at least 1");
  if (!(membership_slack >= 0.0)) throw Error("SolverCfg: membership_slack must be non-negative");
}

// ---------------------------------------------------------------------------
// Structural maps

SeqVec analysis(const Frame& frame, const Point& x) {
  require_member(frame, x, "analysis");
  std::vector<Scalar> values;
  values.reserve(frame.size());
  for (const auto& f : frame.maps()) values.push_back(f(x));
  return SeqVec(std::move(values), frame.p());
}

Point synthesis(const Frame& frame, const SeqVec& a) {
  require_shape(frame, a, "synthesis");
  const Eigen::Map<const Eigen::VectorXcd> coeffs(a.entries().data(),
                                                  static_cast<Eigen::Index>(a.size()));
  const Eigen::VectorXcd out = frame.synthesis_matrix() * coeffs;
  return point_from_column(out, frame.subset().field);
}

Point frame_map(const Frame& frame, const Point& x) { return synthesis(frame, analysis(frame, x)); }

namespace detail {

Point frame_map_termwise(const Frame& frame, const Point& x) {
  Point acc = Point::zeros(frame.subset().ambient_dim, frame.subset().field);
  for (std::size_t n = 0; n < frame.size(); ++n) {
    const Scalar c = frame.map(n)(x);
    const Point& tau = frame.vector(n);
    for (std::size_t i = 0; i < acc.dim(); ++i) acc[i] += c * tau[i];
  }
  return acc;
}

Point settle_in_subset(const Frame& frame, const Point& x, const SolverCfg& cfg, bool* projected) {
  if (projected) *projected = false;
  const SubsetSpec& m = frame.subset();
  if (m.contains(x)) return x;
  if (!m.project) {
    throw MembershipError("inverse iterate left " + m.description + " and no projection exists");
  }
  Point p = m.project(x);
  const double gap = m.distance(x, p);
  const double slack = cfg.membership_slack * (frame.tail_bound(p) + cfg.residual_tol);
  if (gap > slack || !m.contains(p)) {
    throw MembershipError("inverse iterate lies " + std::to_string(gap) + " outside " +
                          m.description + " (allowed " + std::to_string(slack) + ")");
  }
  if (projected) *projected = true;
  return p;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Inversion

Inversion damped_fixed_point(const PointMap& map, const Point& y, const SolverCfg& cfg,
                             const Point& start, const AmbientNorm& norm) {
  cfg.validate();
  Point x = start;
  double previous = std::numeric_limits<double>::infinity();
  std::size_t growth_streak = 0;
  for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
    Point r = map(x) - y;
    const double residual = norm(r);
    if (!std::isfinite(residual)) {
      throw Divergence("frame-map inversion: non-finite residual at iteration " +
                       std::to_string(it));
    }
    if (residual <= cfg.residual_tol) return {std::move(x), it, residual, false};
    growth_streak = residual > previous ? growth_streak + 1 : 0;
    if (growth_streak >= kDivergenceStreak) {
      throw Divergence("frame-map inversion: residual grew for " +
                       std::to_string(kDivergenceStreak) + " consecutive iterations (now " +
                       std::to_string(residual) + ", damping " + std::to_string(cfg.damping) +
                       ")");
    }
    previous = residual;
    x -= cfg.damping * r;
  }
  throw NoConvergence("frame-map inversion: residual above " + std::to_string(cfg.residual_tol) +
                      " after " + std::to_string(cfg.max_iter) + " iterations");
}

Inversion invert_frame_map(const Frame& frame, const Point& y, const SolverCfg& cfg) {
  if (y.dim() != frame.subset().ambient_dim) {
    throw FrameMismatch("invert_frame_map: point dimension does not match the frame");
  }
  Inversion inv = damped_fixed_point(
      [&frame](const Point& x) { return detail::frame_map_termwise(frame, x); }, y, cfg, y,
      frame.subset().norm);
  inv.x = detail::settle_in_subset(frame, inv.x, cfg, &inv.projected);
  return inv;
}

Point reconstruct(const Frame& frame, const Point& x, const SolverCfg& cfg) {
  const SeqVec coeffs = analysis(frame, x);
  InverseCache inverses(0.0);
  Point acc = Point::zeros(frame.subset().ambient_dim, frame.subset().field);
  for (std::size_t n = 0; n < frame.size(); ++n) {
    const Point& tau = frame.vector(n);
    std::optional<Point> dual_vector = inverses.find(tau);
    if (!dual_vector) {
      dual_vector = invert_frame_map(frame, tau, cfg).x;
      inverses.insert(tau, *dual_vector);
    }
    acc += coeffs[n] * *dual_vector;
  }
  return acc;
}

SeqVec coefficient_projection(const Frame& frame, const SeqVec& a, const SolverCfg& cfg) {
  const Point y = synthesis(frame, a);
  return analysis(frame, invert_frame_map(frame, y, cfg).x);
}

// ---------------------------------------------------------------------------
// InverseCache

std::size_t InverseCache::KeyHash::operator()(const std::vector<long long>& key) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (long long k : key) {
    h ^= std::hash<long long>{}(k) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::optional<std::vector<long long>> InverseCache::bucket_key(const Point& x) const {
  std::vector<long long> key;
  key.reserve(2 * x.dim());
  constexpr double kLimit = 9.0e18;
  for (const auto& c : x.coords()) {
    for (double part : {c.real(), c.imag()}) {
      if (bucket_ == 0.0) {
        long long bits = 0;
        static_assert(sizeof(bits) == sizeof(part));
        part = part == 0.0 ? 0.0 : part;  // fold -0.0
        std::memcpy(&bits, &part, sizeof(bits));
        key.push_back(bits);
        continue;
      }
      const double scaled = std::round(part / bucket_);
      if (!(std::abs(scaled) < kLimit)) return std::nullopt;
      key.push_back(static_cast<long long>(scaled));
    }
  }
  return key;
}

std::optional<Point> InverseCache::find(const Point& key) const {
  const auto k = bucket_key(key);
  if (!k) return std::nullopt;
  std::lock_guard lock(mutex_);
  const auto it = entries_.find(*k);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void InverseCache::insert(const Point& key, const Point& value) {
  auto k = bucket_key(key);
  if (!k) return;
  std::lock_guard lock(mutex_);
  entries_.insert_or_assign(std::move(*k), value);
}

std::size_t InverseCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

}  // namespace lipframe
