#include "lipframe/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lipframe/errors.hpp"

namespace lipframe {

namespace {

bool finite(Scalar z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw FrameMismatch(std::string(what) + ": dimension " + std::to_string(a) + " vs " +
                        std::to_string(b));
  }
}

ScalarField join(ScalarField a, ScalarField b) {
  return (a == ScalarField::complex || b == ScalarField::complex) ? ScalarField::complex
                                                                  : ScalarField::real;
}

std::string format_real(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Point

Point::Point(std::vector<Scalar> coords, ScalarField field)
    : coords_(std::move(coords)), field_(field) {
  if (coords_.empty()) throw Error("Point: dimension must be at least 1");
  if (!is_finite()) throw Error("Point: coordinates must be finite");
  if (field_ == ScalarField::real) {
    for (auto& c : coords_) c = Scalar(c.real(), 0.0);
  }
}

Point Point::zeros(std::size_t dim, ScalarField field) {
  return Point(std::vector<Scalar>(dim, Scalar{}), field);
}

Point Point::real(std::initializer_list<double> values) {
  return real(std::span<const double>(values.begin(), values.size()));
}

Point Point::real(std::span<const double> values) {
  std::vector<Scalar> coords(values.begin(), values.end());
  return Point(std::move(coords), ScalarField::real);
}

Point Point::scalar(Scalar value) {
  return Point({value}, value.imag() == 0.0 ? ScalarField::real : ScalarField::complex);
}

bool Point::is_finite() const noexcept {
  return std::all_of(coords_.begin(), coords_.end(), finite);
}

Point& Point::operator+=(const Point& other) {
  require_same_dim(dim(), other.dim(), "Point +");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  field_ = join(field_, other.field_);
  return *this;
}

Point& Point::operator-=(const Point& other) {
  require_same_dim(dim(), other.dim(), "Point -");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
  field_ = join(field_, other.field_);
  return *this;
}

Point& Point::operator*=(Scalar factor) {
  for (auto& c : coords_) c *= factor;
  if (factor.imag() != 0.0) field_ = ScalarField::complex;
  return *this;
}

Point direct_sum(const Point& x, const Point& y) {
  Point out;
  out.coords_ = x.coords_;
  out.coords_.insert(out.coords_.end(), y.coords_.begin(), y.coords_.end());
  out.field_ = join(x.field_, y.field_);
  return out;
}

Point Point::slice(std::size_t offset, std::size_t dim) const {
  if (offset + dim > coords_.size()) throw IndexOutOfRange("Point::slice out of range");
  Point out;
  out.coords_.assign(coords_.begin() + static_cast<std::ptrdiff_t>(offset),
                     coords_.begin() + static_cast<std::ptrdiff_t>(offset + dim));
  out.field_ = field_;
  return out;
}

// ---------------------------------------------------------------------------
// AmbientNorm

AmbientNorm AmbientNorm::lp(double q) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw Error("AmbientNorm::lp requires 1 <= q < inf");
  AmbientNorm n;
  n.kind_ = Kind::lp;
  n.exponent_ = q;
  return n;
}

AmbientNorm AmbientNorm::sup() {
  AmbientNorm n;
  n.kind_ = Kind::sup;
  n.exponent_ = 0.0;
  return n;
}

AmbientNorm AmbientNorm::psum(double p, std::vector<AmbientNorm> blocks,
                              std::vector<std::size_t> block_dims) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error("AmbientNorm::psum requires 1 <= p < inf");
  if (blocks.size() != block_dims.size() || blocks.empty()) {
    throw Error("AmbientNorm::psum: one dimension per block required");
  }
  AmbientNorm n;
  n.kind_ = Kind::psum;
  n.exponent_ = p;
  n.blocks_ = std::move(blocks);
  n.block_dims_ = std::move(block_dims);
  return n;
}

double AmbientNorm::operator()(const Point& x) const { return (*this)(x.coords()); }

double AmbientNorm::operator()(std::span<const Scalar> x) const {
  switch (kind_) {
    case Kind::sup: {
      double m = 0.0;
      for (const auto& c : x) m = std::max(m, std::abs(c));
      return m;
    }
    case Kind::lp: {
      if (exponent_ == 2.0) {
        double s = 0.0;
        for (const auto& c : x) s += std::norm(c);
        return std::sqrt(s);
      }
      if (exponent_ == 1.0) {
        double s = 0.0;
        for (const auto& c : x) s += std::abs(c);
        return s;
      }
      double s = 0.0;
      for (const auto& c : x) s += std::pow(std::abs(c), exponent_);
      return std::pow(s, 1.0 / exponent_);
    }
    case Kind::psum: {
      double s = 0.0;
      std::size_t offset = 0;
      for (std::size_t b = 0; b < blocks_.size(); ++b) {
        if (offset + block_dims_[b] > x.size()) throw FrameMismatch("AmbientNorm: block overflow");
        const double nb = blocks_[b](x.subspan(offset, block_dims_[b]));
        s += std::pow(nb, exponent_);
        offset += block_dims_[b];
      }
      return std::pow(s, 1.0 / exponent_);
    }
  }
  return 0.0;
}

std::string AmbientNorm::describe() const {
  switch (kind_) {
    case Kind::sup:
      return "sup";
    case Kind::lp:
      return "lp(" + format_real(exponent_) + ")";
    case Kind::psum: {
      std::string s = "psum(" + format_real(exponent_) + ";";
      for (std::size_t b = 0; b < blocks_.size(); ++b) {
        s += (b ? "," : "") + blocks_[b].describe() + "^" + std::to_string(block_dims_[b]);
      }
      return s + ")";
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Rng

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

// ---------------------------------------------------------------------------
// SubsetSpec

bool SubsetSpec::same_as(const SubsetSpec& other) const {
  return ambient_dim == other.ambient_dim && field == other.field && norm == other.norm &&
         description == other.description;
}

// ---------------------------------------------------------------------------
// SeqVec

SeqVec::SeqVec(std::vector<Scalar> entries, double p) : entries_(std::move(entries)), p_(p) {
  if (entries_.empty()) throw Error("SeqVec: truncation length must be at least 1");
  if (!(p_ >= 1.0) || !std::isfinite(p_)) throw Error("SeqVec: exponent must satisfy 1 <= p < inf");
  if (!std::all_of(entries_.begin(), entries_.end(), finite)) {
    throw Error("SeqVec: entries must be finite");
  }
}

SeqVec SeqVec::zeros(std::size_t length, double p) {
  return SeqVec(std::vector<Scalar>(length, Scalar{}), p);
}

SeqVec& SeqVec::operator+=(const SeqVec& other) {
  if (size() != other.size() || p_ != other.p_) throw FrameMismatch("SeqVec +: shape mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

SeqVec& SeqVec::operator-=(const SeqVec& other) {
  if (size() != other.size() || p_ != other.p_) throw FrameMismatch("SeqVec -: shape mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

SeqVec& SeqVec::operator*=(Scalar factor) {
  for (auto& a : entries_) a *= factor;
  return *this;
}

double lp_norm(const SeqVec& v) {
  const double p = v.p();
  double s = 0.0;
  if (p == 1.0) {
    for (const auto& a : v.entries()) s += std::abs(a);
    return s;
  }
  // Scale by the largest magnitude so that large p does not overflow.
  double scale = 0.0;
  for (const auto& a : v.entries()) scale = std::max(scale, std::abs(a));
  if (scale == 0.0) return 0.0;
  for (const auto& a : v.entries()) s += std::pow(std::abs(a) / scale, p);
  return scale * std::pow(s, 1.0 / p);
}

SeqVec basis_vector(std::size_t n, std::size_t length, double p) {
  if (n < 1 || n > length) {
    throw IndexOutOfRange("basis_vector: index " + std::to_string(n) + " outside 1.." +
                          std::to_string(length));
  }
  auto e = SeqVec::zeros(length, p);
  e[n - 1] = 1.0;
  return e;
}

Scalar coordinate(const SeqVec& v, std::size_t n) {
  if (n < 1 || n > v.size()) {
    throw IndexOutOfRange("coordinate: index " + std::to_string(n) + " outside 1.." +
                          std::to_string(v.size()));
  }
  return v[n - 1];
}

// ---------------------------------------------------------------------------
// Sampling

std::vector<std::pair<Point, Point>> sample_pairs(const SubsetSpec& subset, std::size_t count,
                                                  std::uint64_t seed, double min_sep) {
  if (!(min_sep > 0.0)) throw Error("sample_pairs: min_sep must be positive");
  std::vector<std::pair<Point, Point>> pairs;
  if (count == 0) return pairs;
  if (!subset.sampler) throw Error("sample_pairs: subset has no sampler");
  pairs.reserve(count);
  Rng rng(seed);
  // Rejections are budgeted per accepted pair so that prefixes stay stable.
  constexpr std::size_t kAttemptsPerPair = 1000;
  for (std::size_t i = 0; i < count; ++i) {
    bool accepted = false;
    for (std::size_t attempt = 0; attempt < kAttemptsPerPair; ++attempt) {
      Point x = subset.sampler(rng);
      Point y = subset.sampler(rng);
      if (subset.distance(x, y) >= min_sep) {
        pairs.emplace_back(std::move(x), std::move(y));
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw SamplerExhausted("sample_pairs: no pair separated by " + format_real(min_sep) +
                             " found in " + subset.description);
    }
  }
  return pairs;
}

std::vector<Point> sample_points(const SubsetSpec& subset, std::size_t count, std::uint64_t seed) {
  if (!subset.sampler) throw Error("sample_points: subset has no sampler");
  std::vector<Point> points;
  points.reserve(count);
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) points.push_back(subset.sampler(rng));
  return points;
}

// ---------------------------------------------------------------------------
// Subsets

namespace subsets {

namespace {

bool is_real_scalar(const Point& x) {
  return x.dim() == 1 && std::abs(x[0].imag()) <= kMembershipTolerance;
}

}  // namespace

SubsetSpec interval(double lo, double hi) {
  if (!(lo < hi)) throw Error("interval: lo must be below hi");
  SubsetSpec m;
  m.ambient_dim = 1;
  m.field = ScalarField::real;
  m.norm = AmbientNorm::lp(2.0);
  m.contains = [lo, hi](const Point& x) {
    return is_real_scalar(x) && x[0].real() >= lo - kMembershipTolerance &&
           x[0].real() <= hi + kMembershipTolerance;
  };
  m.sampler = [lo, hi](Rng& rng) { return Point::real({rng.uniform(lo, hi)}); };
  m.project = [lo, hi](const Point& x) {
    return Point::real({std::clamp(x[0].real(), lo, hi)});
  };
  m.description = "[" + format_real(lo) + ", " + format_real(hi) + "]";
  return m;
}

SubsetSpec half_line(double lo, double window_hi) {
  if (!(lo < window_hi)) throw Error("half_line: window must extend beyond lo");
  SubsetSpec m;
  m.ambient_dim = 1;
  m.field = ScalarField::real;
  m.norm = AmbientNorm::lp(2.0);
  m.contains = [lo](const Point& x) {
    return is_real_scalar(x) && x[0].real() >= lo - kMembershipTolerance;
  };
  m.sampler = [lo, window_hi](Rng& rng) { return Point::real({rng.uniform(lo, window_hi)}); };
  m.project = [lo](const Point& x) { return Point::real({std::max(x[0].real(), lo)}); };
  m.description = "[" + format_real(lo) + ", inf) sampled on [" + format_real(lo) + ", " +
                  format_real(window_hi) + "]";
  return m;
}

SubsetSpec disc(Scalar center, double radius) {
  if (!(radius > 0.0)) throw Error("disc: radius must be positive");
  SubsetSpec m;
  m.ambient_dim = 1;
  m.field = ScalarField::complex;
  m.norm = AmbientNorm::lp(2.0);
  m.contains = [center, radius](const Point& z) {
    return z.dim() == 1 && std::abs(z[0] - center) <= radius + kMembershipTolerance;
  };
  m.sampler = [center, radius](Rng& rng) {
    const double r = radius * std::sqrt(rng.uniform());
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    return Point({center + std::polar(r, theta)}, ScalarField::complex);
  };
  m.project = [center, radius](const Point& z) {
    const Scalar d = z[0] - center;
    const double r = std::abs(d);
    if (r <= radius) return z;
    return Point({center + d * (radius / r)}, ScalarField::complex);
  };
  std::ostringstream os;
  os << "disc(center=" << center.real() << (center.imag() < 0 ? "-" : "+")
     << std::abs(center.imag()) << "i, radius=" << radius << ")";
  m.description = os.str();
  return m;
}

SubsetSpec whole_space(std::size_t dim, ScalarField field, double box, AmbientNorm norm) {
  if (dim == 0) throw Error("whole_space: dimension must be at least 1");
  SubsetSpec m;
  m.ambient_dim = dim;
  m.field = field;
  m.norm = std::move(norm);
  m.contains = [dim, field](const Point& x) {
    if (x.dim() != dim || !x.is_finite()) return false;
    if (field == ScalarField::real) {
      for (const auto& c : x.coords()) {
        if (std::abs(c.imag()) > kMembershipTolerance) return false;
      }
    }
    return true;
  };
  m.sampler = [dim, field, box](Rng& rng) {
    std::vector<Scalar> coords(dim);
    for (auto& c : coords) {
      const double re = rng.uniform(-box, box);
      const double im = field == ScalarField::complex ? rng.uniform(-box, box) : 0.0;
      c = Scalar(re, im);
    }
    return Point(std::move(coords), field);
  };
  m.project = [](const Point& x) { return x; };
  m.description = std::string(field == ScalarField::real ? "R^" : "C^") + std::to_string(dim) +
                  " sampled on box " + format_real(box) + ", norm " + m.norm.describe();
  return m;
}

SubsetSpec product(const SubsetSpec& first, const SubsetSpec& second, double p) {
  SubsetSpec m;
  const std::size_t d1 = first.ambient_dim;
  const std::size_t d2 = second.ambient_dim;
  m.ambient_dim = d1 + d2;
  m.field = join(first.field, second.field);
  m.norm = AmbientNorm::psum(p, {first.norm, second.norm}, {d1, d2});
  m.contains = [first, second, d1, d2](const Point& x) {
    return x.dim() == d1 + d2 && first.contains(x.slice(0, d1)) &&
           second.contains(x.slice(d1, d2));
  };
  m.sampler = [first, second](Rng& rng) {
    Point x = first.sampler(rng);
    Point y = second.sampler(rng);
    return direct_sum(x, y);
  };
  if (first.project && second.project) {
    m.project = [first, second, d1, d2](const Point& x) {
      return direct_sum(first.project(x.slice(0, d1)), second.project(x.slice(d1, d2)));
    };
  }
  m.description = "(" + first.description + ") (+) (" + second.description + ") with " +
                  m.norm.describe();
  return m;
}

}  // namespace subsets

}  // namespace lipframe
