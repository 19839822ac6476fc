#include "lipframe/duality.hpp"

#include <algorithm>
#include <sstream>

#include "lipframe/errors.hpp"

namespace lipframe {

namespace {

constexpr std::size_t kCompositeProbes = 20;
constexpr std::uint64_t kCompositeProbeSeed = 0xd1b54a32d192ed03ULL;

Point to_point(const Eigen::VectorXcd& v, ScalarField base) {
  std::vector<Scalar> coords(v.data(), v.data() + v.size());
  for (const auto& c : coords) {
    if (c.imag() != 0.0) base = ScalarField::complex;
  }
  return Point(std::move(coords), base);
}

}  // namespace

Point LinOperatorV::operator()(const SeqVec& a) const {
  if (static_cast<std::size_t>(matrix.cols()) != a.size()) {
    throw FrameMismatch("LinOperatorV: expects " + std::to_string(matrix.cols()) +
                        " coefficients, got " + std::to_string(a.size()));
  }
  const Eigen::Map<const Eigen::VectorXcd> coeffs(a.entries().data(), matrix.cols());
  return to_point(matrix * coeffs, ScalarField::real);
}

// ---------------------------------------------------------------------------
// FrameInverse

FrameInverse::FrameInverse(Frame frame, SolverCfg cfg)
    : frame_(std::make_shared<const Frame>(std::move(frame))),
      cfg_(cfg),
      cache_(std::make_shared<InverseCache>(1e-12)) {
  cfg_.validate();
}

Point FrameInverse::operator()(const Point& y) const {
  if (auto hit = cache_->find(y)) return *hit;
  Point x = invert_frame_map(*frame_, y, cfg_).x;
  cache_->insert(y, x);
  return x;
}

// ---------------------------------------------------------------------------
// Canonical dual and dual checks

Frame canonical_dual(const Frame& frame, const SolverCfg& cfg) {
  const FrameInverse inverse(frame, cfg);
  std::vector<LipMap> maps;
  std::vector<Point> vectors;
  for (std::size_t n = 0; n < frame.size(); ++n) {
    const LipMap f = frame.map(n);
    maps.push_back(LipMap{[f, inverse](const Point& x) { return f(inverse(x)); }, std::nullopt,
                          f.label + " o S^-1"});
    Point dual_vector = inverse(frame.vector(n));
    if (!frame.subset().contains(dual_vector)) {
      throw MembershipError("canonical_dual: S^-1 tau_" + std::to_string(n + 1) + " is not in " +
                            frame.subset().description);
    }
    vectors.push_back(std::move(dual_vector));
  }
  TailBound tail = [frame, inverse](const Point& x) { return frame.tail_bound(inverse(x)); };
  return Frame(frame.subset(), frame.p(), std::move(maps), std::move(vectors), std::move(tail));
}

DualityDefect duality_defect(const Frame& f, const Frame& g, std::size_t samples, std::uint64_t seed) {
  require_compatible(f, g, "is_dual");
  const SubsetSpec& m = f.subset();
  DualityDefect defect;
  for (const Point& x : sample_points(m, samples, seed)) {
    defect.f_synthesis_of_g_analysis =
        std::max(defect.f_synthesis_of_g_analysis, m.distance(synthesis(f, analysis(g, x)), x));
    defect.g_synthesis_of_f_analysis =
        std::max(defect.g_synthesis_of_f_analysis, m.distance(synthesis(g, analysis(f, x)), x));
  }
  return defect;
}

bool is_dual(const Frame& f, const Frame& g, std::size_t samples, std::uint64_t seed, double tol) {
  const DualityDefect d = duality_defect(f, g, samples, seed);
  return d.f_synthesis_of_g_analysis <= tol && d.g_synthesis_of_f_analysis <= tol;
}

// ---------------------------------------------------------------------------
// Inverse families

LipOperatorU right_inverse_family(const Frame& frame, const LipOperatorU& u, const SolverCfg& cfg) {
  const FrameInverse inverse(frame, cfg);
  auto eval = [frame, u, inverse](const Point& x) {
    const SeqVec ux = u(x);
    SeqVec r = analysis(frame, inverse(x));
    r += ux;
    r -= analysis(frame, inverse(synthesis(frame, ux)));
    return r;
  };
  return LipOperatorU{std::move(eval), "R[" + u.label + "]"};
}

CoefficientMap left_inverse_family(const Frame& frame, const LinOperatorV& v, const SolverCfg& cfg) {
  const FrameInverse inverse(frame, cfg);
  return [frame, v, inverse](const SeqVec& a) {
    const Point s_inv_a = inverse(synthesis(frame, a));
    Point out = s_inv_a;
    out += v(a);
    out -= v(analysis(frame, s_inv_a));
    return out;
  };
}

LinOperatorV materialize(const CoefficientMap& map, std::size_t n_terms, double p, std::size_t dim,
                         std::string label) {
  LinOperatorV v;
  v.matrix.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(n_terms));
  for (std::size_t n = 1; n <= n_terms; ++n) {
    const Point col = map(basis_vector(n, n_terms, p));
    if (col.dim() != dim) throw FrameMismatch("materialize: map output has the wrong dimension");
    for (std::size_t i = 0; i < dim; ++i) {
      v.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1)) = col[i];
    }
  }
  v.label = std::move(label);
  return v;
}

// ---------------------------------------------------------------------------
// Dual parametrization

PointMap dual_composite(const Frame& frame, const LipOperatorU& u, const LinOperatorV& v,
                        const SolverCfg& cfg) {
  const FrameInverse inverse(frame, cfg);
  return [frame, u, v, inverse](const Point& x) {
    const SeqVec ux = u(x);
    Point out = inverse(x);
    out += v(ux);
    out -= v(analysis(frame, inverse(synthesis(frame, ux))));
    return out;
  };
}

Frame dual_from_parameters(const Frame& frame, const LipOperatorU& u, const LinOperatorV& v,
                           const SolverCfg& cfg) {
  const std::size_t n_terms = frame.size();
  const std::size_t dim = frame.subset().ambient_dim;
  if (static_cast<std::size_t>(v.matrix.rows()) != dim ||
      static_cast<std::size_t>(v.matrix.cols()) != n_terms) {
    throw FrameMismatch("dual_from_parameters: V must be " + std::to_string(dim) + "x" +
                        std::to_string(n_terms));
  }
  const FrameInverse inverse(frame, cfg);

  std::vector<LipMap> maps;
  for (std::size_t n = 0; n < n_terms; ++n) {
    const LipMap f = frame.map(n);
    auto eval = [frame, f, u, inverse, n](const Point& x) {
      const SeqVec ux = u(x);
      if (ux.size() != frame.size()) throw FrameMismatch("dual_from_parameters: U output length");
      return f(inverse(x)) + ux[n] - f(inverse(synthesis(frame, ux)));
    };
    maps.push_back(LipMap{std::move(eval), std::nullopt, "g_" + std::to_string(n + 1)});
  }

  std::vector<Point> vectors;
  for (std::size_t n = 0; n < n_terms; ++n) {
    const Point s_inv_tau = inverse(frame.vector(n));
    Point omega = s_inv_tau;
    omega += v(basis_vector(n + 1, n_terms, frame.p()));
    omega -= v(analysis(frame, s_inv_tau));
    if (!frame.subset().contains(omega)) {
      throw MembershipError("dual_from_parameters: omega_" + std::to_string(n + 1) + " is not in " +
                            frame.subset().description);
    }
    vectors.push_back(std::move(omega));
  }

  // Invertibility probe of the composite map: recover seeded points from their images.
  const PointMap composite = dual_composite(frame, u, v, cfg);
  const SubsetSpec& m = frame.subset();
  for (const Point& x0 : sample_points(m, kCompositeProbes, kCompositeProbeSeed)) {
    Point recovered;
    try {
      const Point y = composite(x0);
      recovered = damped_fixed_point(composite, y, cfg, y, m.norm).x;
    } catch (const Error& e) {
      throw PreconditionError("composite map invertible", e.what());
    }
    const double miss = m.distance(recovered, x0);
    if (miss > 1e-6 * (1.0 + m.norm(x0))) {
      std::ostringstream os;
      os << "probe converged to a different preimage (miss " << miss << ")";
      throw PreconditionError("composite map invertible", os.str());
    }
  }

  const TailBound tail = [frame, inverse](const Point& x) { return frame.tail_bound(inverse(x)); };
  return Frame(frame.subset(), frame.p(), std::move(maps), std::move(vectors), tail);
}

}  // namespace lipframe
