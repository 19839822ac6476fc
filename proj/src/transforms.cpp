#include "lipframe/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lipframe/duality.hpp"
#include "lipframe/errors.hpp"

namespace lipframe {

namespace {

constexpr std::uint64_t kProbeDirectionSalt = 0x9e3779b97f4a7c15ULL;
constexpr int kMaxHalvings = 40;

Point to_point(const Eigen::VectorXcd& v, ScalarField base) {
  std::vector<Scalar> coords(v.data(), v.data() + v.size());
  for (const auto& c : coords) {
    if (c.imag() != 0.0) base = ScalarField::complex;
  }
  return Point(std::move(coords), base);
}

double entry_abs_sum(const Eigen::MatrixXcd& m) { return m.cwiseAbs().sum(); }

void require_maps_into(const SubsetSpec& m, const PointMap& map, const CheckCfg& check,
                       const std::string& check_name) {
  for (const Point& x : sample_points(m, check.samples, check.seed)) {
    if (!m.contains(map(x))) {
      throw PreconditionError(check_name, "image of a sampled point lies outside " + m.description);
    }
  }
}

void require_identity_frame_map(const Frame& frame, const CheckCfg& check, const std::string& check_name) {
  const SubsetSpec& m = frame.subset();
  for (const Point& x : sample_points(m, check.samples, check.seed)) {
    const double err = m.distance(frame_map(frame, x), x);
    if (err > check.tol + frame.tail_bound(x)) {
      std::ostringstream os;
      os << "||S x - x|| = " << err << " exceeds " << check.tol;
      throw PreconditionError(check_name, os.str());
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Transform types

BiLipMap BiLipMap::identity() {
  return BiLipMap{[](const Point& x) { return x; }, PointMap([](const Point& x) { return x; }), "identity"};
}

BiLipMap BiLipMap::scaling(Scalar s) {
  if (s == Scalar(0.0)) throw PreconditionError("scaling invertible", "factor is zero");
  std::ostringstream label;
  label << "x -> " << s << " x";
  return BiLipMap{[s](const Point& x) { return s * x; },
                  PointMap([s](const Point& x) { return (Scalar(1.0) / s) * x; }), label.str()};
}

Point AmbientLinMap::operator()(const Point& x) const {
  if (static_cast<std::size_t>(matrix.cols()) != x.dim()) {
    throw FrameMismatch("AmbientLinMap: expects dimension " + std::to_string(matrix.cols()) + ", got " +
                        std::to_string(x.dim()));
  }
  const Eigen::Map<const Eigen::VectorXcd> v(x.coords().data(), matrix.cols());
  return to_point(matrix * v, x.field());
}

AmbientLinMap AmbientLinMap::identity(std::size_t dim) { return scalar(dim, Scalar(1.0)); }

AmbientLinMap AmbientLinMap::scalar(std::size_t dim, Scalar s) {
  const auto n = static_cast<Eigen::Index>(dim);
  std::ostringstream label;
  label << s << " I";
  return AmbientLinMap{Eigen::MatrixXcd::Identity(n, n) * s, label.str()};
}

AmbientLinMap materialize_ambient(const PointMap& map, std::size_t dim, std::string label) {
  AmbientLinMap out;
  out.matrix.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t j = 0; j < dim; ++j) {
    Point e = Point::zeros(dim, ScalarField::real);
    e[j] = 1.0;
    const Point col = map(e);
    if (col.dim() != dim) throw FrameMismatch("materialize_ambient: map output has the wrong dimension");
    for (std::size_t i = 0; i < dim; ++i) {
      out.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
    }
  }
  out.label = std::move(label);
  return out;
}

// ---------------------------------------------------------------------------
// Similarity

Frame apply_similarity(const Frame& frame, const BiLipMap& t_fg, const AmbientLinMap& t_tw,
                       const CheckCfg& check) {
  const SubsetSpec& m = frame.subset();
  for (const Point& x : sample_points(m, check.samples, check.seed)) {
    if (!m.contains(t_fg(x))) {
      throw MembershipError("apply_similarity: " + t_fg.label + " maps a sampled point outside " +
                            m.description);
    }
    if (!m.contains(t_tw(x))) {
      throw MembershipError("apply_similarity: " + t_tw.label + " maps a sampled point outside " +
                            m.description);
    }
    if (t_fg.inverse) {
      const double err = m.distance(t_fg((*t_fg.inverse)(x)), x);
      if (err > 1e-9 * (1.0 + m.norm(x))) {
        throw PreconditionError("Tfg inverse consistent", "forward(inverse(x)) differs from x");
      }
    }
  }

  std::vector<LipMap> maps;
  for (const LipMap& f : frame.maps()) {
    maps.push_back(LipMap{[f, t_fg](const Point& x) { return f(t_fg(x)); }, std::nullopt,
                          f.label + " o " + t_fg.label});
  }
  std::vector<Point> vectors;
  for (std::size_t n = 0; n < frame.size(); ++n) {
    Point omega = t_tw(frame.vector(n));
    if (!m.contains(omega)) {
      throw MembershipError("apply_similarity: T tau_" + std::to_string(n + 1) + " is not in " +
                            m.description);
    }
    vectors.push_back(std::move(omega));
  }
  const double scale = entry_abs_sum(t_tw.matrix);
  TailBound tail = [frame, t_fg, scale](const Point& x) { return scale * frame.tail_bound(t_fg(x)); };
  return Frame(m, frame.p(), std::move(maps), std::move(vectors), std::move(tail));
}

RecoveredSimilarity recover_similarity(const Frame& f, const Frame& g, const SolverCfg& cfg) {
  require_compatible(f, g, "recover_similarity");
  const FrameInverse inverse_f(f, cfg);
  const FrameInverse inverse_g(g, cfg);
  PointMap forward = [f, g, inverse_f](const Point& x) { return inverse_f(synthesis(f, analysis(g, x))); };
  PointMap backward = [f, g, inverse_g](const Point& x) { return inverse_g(synthesis(g, analysis(f, x))); };
  PointMap t_tw = [f, g, inverse_f](const Point& y) { return synthesis(g, analysis(f, inverse_f(y))); };
  return RecoveredSimilarity{BiLipMap{std::move(forward), std::move(backward), "S_F^-1 theta_tau theta_g"},
                             std::move(t_tw)};
}

SimilarityDefect similarity_defect(const Frame& f, const Frame& g, const RecoveredSimilarity& t,
                                   const CheckCfg& check) {
  require_compatible(f, g, "similarity_defect");
  SimilarityDefect defect;
  for (const Point& x : sample_points(f.subset(), check.samples, check.seed)) {
    const Point tx = t.t_fg(x);
    for (std::size_t n = 0; n < f.size(); ++n) {
      defect.maps = std::max(defect.maps, std::abs(g.map(n)(x) - f.map(n)(tx)));
    }
  }
  for (std::size_t n = 0; n < f.size(); ++n) {
    defect.vectors = std::max(defect.vectors, f.subset().distance(g.vector(n), t.t_tw(f.vector(n))));
  }
  return defect;
}

bool is_similar(const Frame& f, const Frame& g, const SolverCfg& cfg, const CheckCfg& check) {
  try {
    const SimilarityDefect d = similarity_defect(f, g, recover_similarity(f, g, cfg), check);
    return d.maps <= check.tol && d.vectors <= check.tol;
  } catch (const SolverError&) {
    return false;
  } catch (const MembershipError&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Projections

std::vector<SeqVec> projection_probes(const std::vector<const Frame*>& frames, std::size_t count,
                                      std::uint64_t seed) {
  if (frames.empty()) throw Error("projection_probes: no frames given");
  const Frame& first = *frames.front();
  for (const Frame* other : frames) require_compatible(first, *other, "projection_probes");
  const std::size_t n_terms = first.size();
  const double p = first.p();
  auto admissible = [&](const SeqVec& a) {
    return std::all_of(frames.begin(), frames.end(),
                       [&](const Frame* fr) { return fr->subset().contains(synthesis(*fr, a)); });
  };

  std::vector<SeqVec> probes;
  for (std::size_t n = 1; n <= n_terms && probes.size() < count; ++n) {
    SeqVec e = basis_vector(n, n_terms, p);
    if (admissible(e)) probes.push_back(std::move(e));
  }
  Rng rng(seed ^ kProbeDirectionSalt);
  const bool complex_entries = first.subset().field == ScalarField::complex;
  const auto points = sample_points(first.subset(), count, seed);
  for (std::size_t k = 0; probes.size() < count; ++k) {
    const SeqVec base = analysis(first, points[k % points.size()]);
    std::vector<Scalar> dir(n_terms);
    for (auto& d : dir) d = Scalar(rng.normal(), complex_entries ? rng.normal() : 0.0);
    SeqVec r(std::move(dir), p);
    const double rn = lp_norm(r);
    if (rn > 0.0) r *= 1.0 / rn;
    double s = 1.0;
    SeqVec a = base + s * r;
    for (int h = 0; h < kMaxHalvings && !admissible(a); ++h) {
      s *= 0.5;
      a = base + s * r;
    }
    probes.push_back(admissible(a) ? a : base);
  }
  return probes;
}

double projection_gap(const Frame& f, const Frame& g, std::size_t n_probes, std::uint64_t seed,
                      const SolverCfg& cfg) {
  double gap = 0.0;
  for (const SeqVec& a : projection_probes({&f, &g}, n_probes, seed)) {
    gap = std::max(gap, lp_norm(coefficient_projection(f, a, cfg) - coefficient_projection(g, a, cfg)));
  }
  return gap;
}

bool projections_equal(const Frame& f, const Frame& g, std::size_t n_probes, std::uint64_t seed,
                       double tol, const SolverCfg& cfg) {
  return projection_gap(f, g, n_probes, seed, cfg) <= tol;
}

// ---------------------------------------------------------------------------
// Orthogonality, interpolation, direct sums

bool is_orthogonal(const Frame& f, const Frame& g, std::size_t samples, std::uint64_t seed, double tol) {
  require_compatible(f, g, "is_orthogonal");
  const SubsetSpec& m = f.subset();
  for (const Point& x : sample_points(m, samples, seed)) {
    if (m.norm(synthesis(f, analysis(g, x))) > tol) return false;
    if (m.norm(synthesis(g, analysis(f, x))) > tol) return false;
  }
  return true;
}

Frame interpolate(const Frame& f, const Frame& g, const BiLipMap& a, const BiLipMap& b,
                  const AmbientLinMap& c, const AmbientLinMap& d, const CheckCfg& check) {
  require_compatible(f, g, "interpolate");
  const SubsetSpec& m = f.subset();
  const auto dim = static_cast<Eigen::Index>(m.ambient_dim);
  for (const AmbientLinMap* op : {&c, &d}) {
    if (op->matrix.rows() != dim || op->matrix.cols() != dim) {
      throw FrameMismatch("interpolate: operator " + op->label + " must be square of the ambient dimension");
    }
  }
  if (!is_orthogonal(f, g, check.samples, check.seed, check.tol)) {
    throw PreconditionError("F and G orthogonal", "a mixed composition does not vanish on samples");
  }
  require_identity_frame_map(f, check, "F frame map is identity");
  require_identity_frame_map(g, check, "G frame map is identity");
  require_maps_into(m, a.forward, check, "A maps M into M");
  require_maps_into(m, b.forward, check, "B maps M into M");
  require_maps_into(m, c, check, "C maps M into M");
  require_maps_into(m, d, check, "D maps M into M");
  for (const Point& x : sample_points(m, check.samples, check.seed)) {
    const double err = m.distance(c(a(x)) + d(b(x)), x);
    if (err > check.tol) {
      std::ostringstream os;
      os << "||C A x + D B x - x|| = " << err << " exceeds " << check.tol;
      throw PreconditionError("CA + DB = I", os.str());
    }
  }

  std::vector<LipMap> maps;
  std::vector<Point> vectors;
  for (std::size_t n = 0; n < f.size(); ++n) {
    const LipMap fn = f.map(n);
    const LipMap gn = g.map(n);
    maps.push_back(LipMap{[fn, gn, a, b](const Point& x) { return fn(a(x)) + gn(b(x)); }, std::nullopt,
                          fn.label + " o A + " + gn.label + " o B"});
    vectors.push_back(c(f.vector(n)) + d(g.vector(n)));
  }
  const double c_scale = entry_abs_sum(c.matrix);
  const double d_scale = entry_abs_sum(d.matrix);
  TailBound tail = [f, g, a, b, c_scale, d_scale](const Point& x) {
    return c_scale * f.tail_bound(a(x)) + d_scale * g.tail_bound(b(x));
  };
  return Frame(m, f.p(), std::move(maps), std::move(vectors), std::move(tail));
}

Frame scalar_interpolate(const Frame& f, const Frame& g, Scalar a, Scalar b, Scalar c, Scalar d,
                         const CheckCfg& check) {
  const std::size_t dim = f.subset().ambient_dim;
  auto scale = [](Scalar s) {
    std::ostringstream label;
    label << "x -> " << s << " x";
    return BiLipMap{[s](const Point& x) { return s * x; }, std::nullopt, label.str()};
  };
  return interpolate(f, g, scale(a), scale(b), AmbientLinMap::scalar(dim, c), AmbientLinMap::scalar(dim, d),
                     check);
}

Frame direct_sum(const Frame& f, const Frame& g, const CheckCfg& check) {
  require_compatible(f, g, "direct_sum");
  if (!is_orthogonal(f, g, check.samples, check.seed, check.tol)) {
    throw PreconditionError("F and G orthogonal", "a mixed composition does not vanish on samples");
  }
  const SubsetSpec product = subsets::product(f.subset(), g.subset(), f.p());
  const std::size_t dim = f.subset().ambient_dim;
  std::vector<LipMap> maps;
  std::vector<Point> vectors;
  for (std::size_t n = 0; n < f.size(); ++n) {
    const LipMap fn = f.map(n);
    const LipMap gn = g.map(n);
    maps.push_back(LipMap{[fn, gn, dim](const Point& z) { return fn(z.slice(0, dim)) + gn(z.slice(dim, dim)); },
                          std::nullopt, fn.label + " (+) " + gn.label});
    vectors.push_back(direct_sum(f.vector(n), g.vector(n)));
  }
  TailBound tail = [f, g, dim](const Point& z) {
    return f.tail_bound(z.slice(0, dim)) + g.tail_bound(z.slice(dim, dim));
  };
  return Frame(product, f.p(), std::move(maps), std::move(vectors), std::move(tail));
}

}  // namespace lipframe
