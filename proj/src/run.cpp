#include "lipframe/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "lipframe/certify.hpp"
#include "lipframe/duality.hpp"
#include "lipframe/errors.hpp"
#include "lipframe/fixtures.hpp"
#include "lipframe/transforms.hpp"

namespace lipframe {

namespace {

using nlohmann::json;

constexpr std::size_t kRecoveredSamples = 5;

struct CommandName {
  Command command;
  const char* name;
};

constexpr CommandName kCommands[] = {
    {Command::certify, "certify"},
    {Command::dual, "dual"},
    {Command::similarity, "similarity"},
    {Command::orthogonality, "orthogonality"},
    {Command::interpolate, "interpolate"},
    {Command::direct_sum, "direct-sum"},
    {Command::reconstruct_sweep, "reconstruct-sweep"},
};

json scalar_json(Scalar z, ScalarField field) {
  if (field == ScalarField::real) return z.real();
  return json::array({z.real(), z.imag()});
}

json point_json(const Point& x) {
  json out = json::array();
  for (const Scalar& c : x.coords()) out.push_back(scalar_json(c, x.field()));
  return out;
}

json certification_json(const CertificationReport& report) {
  json j;
  to_json(j, report);
  return j;
}

std::string fixed(double v, int digits = 3) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

// Frames of a two-frame command: both from the fixture, or the first of each of
// fixture and partner.
std::pair<Frame, Frame> frame_pair(const RunConfig& config) {
  std::vector<Frame> frames = resolve_frames(config.fixture);
  if (!config.partner.empty()) {
    std::vector<Frame> partner = resolve_frames(config.partner);
    return {frames.front(), partner.front()};
  }
  if (frames.size() < 2) {
    throw SchemaError("partner", "command '" + to_string(config.command) +
                                     "' needs two frames; use a pair fixture or --partner");
  }
  return {frames[0], frames[1]};
}

// ---------------------------------------------------------------------------
// Pipelines. Each fills payload, summary and exit code.

void run_certify(const RunConfig& config, RunReport& report) {
  const std::vector<Frame> frames = resolve_frames(config.fixture);
  CertifyOptions options;
  options.bessel_only = config.bessel_only;
  json reports = json::array();
  bool all_pass = true;
  std::ostringstream summary;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const CertificationReport r = certify_frame(frames[i], config.n_pairs, config.n_probes, config.seed, options);
    reports.push_back(certification_json(r));
    all_pass = all_pass && (r.verdict == Verdict::certified_asf || r.verdict == Verdict::certified_bs);
    if (i > 0) summary << "\n";
    summary << "frame " << i + 1 << ": " << to_string(r.verdict) << " a_hat=" << fixed(r.a_hat, 12)
            << " b_hat=" << fixed(r.b_hat, 12) << " c_hat=" << fixed(r.c_hat, 12)
            << " d_hat=" << fixed(r.d_hat, 12);
  }
  report.payload = json{{"certifications", reports}};
  report.exit_code = all_pass ? 0 : 1;
  report.summary = summary.str();
}

void run_dual(const RunConfig& config, RunReport& report) {
  const Frame frame = resolve_frames(config.fixture).front();
  const Frame dual = canonical_dual(frame, config.solver);
  const DualityDefect defect = duality_defect(frame, dual, config.samples, config.seed);
  const bool dual_ok = defect.f_synthesis_of_g_analysis <= config.tol && defect.g_synthesis_of_f_analysis <= config.tol;

  const CertificationReport primal = certify_frame(frame, config.n_pairs, config.n_probes, config.seed);
  const CertificationReport canonical = certify_frame(dual, config.n_pairs, config.n_probes, config.seed);
  json vectors = json::array();
  for (const Point& v : dual.vectors()) vectors.push_back(point_json(v));

  json reciprocity = json::object();
  if (primal.a_hat > 0.0 && primal.b_hat > 0.0) {
    reciprocity = json{{"dual_a_hat", canonical.a_hat},
                       {"dual_b_hat", canonical.b_hat},
                       {"inverse_primal_b_hat", 1.0 / primal.b_hat},
                       {"inverse_primal_a_hat", 1.0 / primal.a_hat}};
  }
  report.payload = json{{"is_dual", dual_ok},
                        {"duality_defect",
                         {{"f_synthesis_of_g_analysis", defect.f_synthesis_of_g_analysis},
                          {"g_synthesis_of_f_analysis", defect.g_synthesis_of_f_analysis}}},
                        {"dual_vectors", vectors},
                        {"primal_certification", certification_json(primal)},
                        {"dual_certification", certification_json(canonical)},
                        {"reciprocity", reciprocity}};
  report.exit_code = dual_ok ? 0 : 1;
  report.summary = std::string("canonical dual: is_dual=") + (dual_ok ? "true" : "false") +
                   " dual a_hat=" + fixed(canonical.a_hat, 12) + " dual b_hat=" + fixed(canonical.b_hat, 12);
}

void run_similarity(const RunConfig& config, RunReport& report) {
  const Frame frame = resolve_frames(config.fixture).front();
  const std::size_t dim = frame.subset().ambient_dim;
  const CheckCfg check{config.samples, config.seed, config.tol};
  const Frame similar = apply_similarity(frame, BiLipMap::scaling(config.scale_fg),
                                         AmbientLinMap::scalar(dim, config.scale_tw), check);
  const RecoveredSimilarity recovered = recover_similarity(frame, similar, config.solver);
  const SimilarityDefect defect = similarity_defect(frame, similar, recovered, check);

  double round_trip = 0.0;
  json samples = json::array();
  const auto points = sample_points(frame.subset(), config.samples, config.seed);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& x = points[i];
    const Point t_fg = recovered.t_fg(x);
    const Point t_tw = recovered.t_tw(x);
    round_trip = std::max(round_trip, frame.subset().distance(t_fg, Scalar(config.scale_fg) * x));
    round_trip = std::max(round_trip, frame.subset().distance(t_tw, Scalar(config.scale_tw) * x));
    if (i < kRecoveredSamples) {
      samples.push_back(json{{"x", point_json(x)}, {"t_fg", point_json(t_fg)}, {"t_tw", point_json(t_tw)}});
    }
  }
  const double gap = projection_gap(frame, similar, config.n_probes, config.seed, config.solver);
  const bool orthogonal = is_orthogonal(frame, similar, config.samples, config.seed, config.tol);
  const bool pass = round_trip <= config.tol && defect.maps <= config.tol && defect.vectors <= config.tol &&
                    gap <= config.tol && !orthogonal;
  report.payload = json{{"round_trip_error", round_trip},
                        {"similarity_defect", {{"maps", defect.maps}, {"vectors", defect.vectors}}},
                        {"projection_gap", gap},
                        {"projections_equal", gap <= config.tol},
                        {"is_orthogonal", orthogonal},
                        {"recovered_samples", samples},
                        {"pass", pass}};
  report.exit_code = pass ? 0 : 1;
  report.summary = "similarity: round_trip=" + fixed(round_trip) + " projection_gap=" + fixed(gap) +
                   " orthogonal=" + (orthogonal ? "true" : "false") + (pass ? " pass" : " FAIL");
}

void run_orthogonality(const RunConfig& config, RunReport& report) {
  const auto [f, g] = frame_pair(config);
  const bool orthogonal = is_orthogonal(f, g, config.samples, config.seed, config.tol);
  const bool dual = is_dual(f, g, config.samples, config.seed, config.tol);
  report.payload = json{{"is_orthogonal", orthogonal}, {"is_dual", dual}};
  report.exit_code = orthogonal ? 0 : 1;
  report.summary = std::string("orthogonality: is_orthogonal=") + (orthogonal ? "true" : "false") +
                   " is_dual=" + (dual ? "true" : "false");
}

void run_interpolate(const RunConfig& config, RunReport& report) {
  const auto [f, g] = frame_pair(config);
  const CheckCfg check{config.samples, config.seed, config.tol};
  const Frame mixed = scalar_interpolate(f, g, config.interp_a, config.interp_b, config.interp_c,
                                         config.interp_d, check);
  double identity_error = 0.0;
  for (const Point& x : sample_points(mixed.subset(), config.samples, config.seed)) {
    identity_error = std::max(identity_error, mixed.subset().distance(frame_map(mixed, x), x));
  }
  const CertificationReport cert = certify_frame(mixed, config.n_pairs, config.n_probes, config.seed);
  const bool pass = identity_error <= config.tol && cert.verdict == Verdict::certified_asf;
  report.payload = json{{"frame_map_identity_error", identity_error},
                        {"certification", certification_json(cert)},
                        {"pass", pass}};
  report.exit_code = pass ? 0 : 1;
  report.summary = "interpolate: identity_error=" + fixed(identity_error) + " " + to_string(cert.verdict);
}

void run_direct_sum(const RunConfig& config, RunReport& report) {
  const auto [f, g] = frame_pair(config);
  const CheckCfg check{config.samples, config.seed, config.tol};
  const Frame sum = direct_sum(f, g, check);
  const std::size_t dim = f.subset().ambient_dim;
  double split_error = 0.0;
  for (const Point& z : sample_points(sum.subset(), config.samples, config.seed)) {
    const Point x = z.slice(0, dim);
    const Point y = z.slice(dim, dim);
    split_error = std::max(split_error,
                           sum.subset().distance(frame_map(sum, z), direct_sum(frame_map(f, x), frame_map(g, y))));
  }
  const CertificationReport cert = certify_frame(sum, config.n_pairs, config.n_probes, config.seed);
  const bool pass = split_error <= config.tol && cert.verdict == Verdict::certified_asf;
  report.payload = json{{"product_norm", sum.subset().norm.describe()},
                        {"frame_map_split_error", split_error},
                        {"certification", certification_json(cert)},
                        {"pass", pass}};
  report.exit_code = pass ? 0 : 1;
  report.summary = "direct-sum: split_error=" + fixed(split_error) + " " + to_string(cert.verdict) +
                   " a_hat=" + fixed(cert.a_hat, 12) + " b_hat=" + fixed(cert.b_hat, 12);
}

void run_reconstruct_sweep(const RunConfig& config, RunReport& report) {
  if (config.n_values.empty()) throw SchemaError("n-values", "at least one length is required");
  const fixtures::FixtureId base = fixtures::parse_fixture_id(config.fixture);
  json rows = json::array();
  std::ostringstream csv;
  csv << "N,max_error,mean_error,samples\n";
  csv << std::setprecision(17);
  bool pass = true;
  for (std::size_t n : config.n_values) {
    const Frame frame = fixtures::build(fixtures::with_length(base, n)).front();
    const auto points = sample_points(frame.subset(), config.samples, config.seed);
    double max_error = 0.0;
    double sum_error = 0.0;
    double max_tail = 0.0;
    for (const Point& x : points) {
      const double err = frame.subset().distance(reconstruct(frame, x, config.solver), x);
      max_error = std::max(max_error, err);
      sum_error += err;
      max_tail = std::max(max_tail, frame.tail_bound(x));
    }
    const double mean_error = sum_error / static_cast<double>(points.size());
    const bool row_pass = max_error <= 2.0 * max_tail + config.tol;
    pass = pass && row_pass;
    rows.push_back(json{{"N", n},
                        {"max_error", max_error},
                        {"mean_error", mean_error},
                        {"samples", points.size()},
                        {"max_tail_bound", max_tail},
                        {"within_bound", row_pass}});
    csv << n << "," << max_error << "," << mean_error << "," << points.size() << "\n";
  }
  report.payload = json{{"rows", rows}, {"pass", pass}};
  report.csv = csv.str();
  report.exit_code = pass ? 0 : 1;
  std::ostringstream summary;
  summary << "reconstruct-sweep:";
  for (const auto& row : rows) {
    summary << " N=" << row["N"].get<std::size_t>() << " max_error=" << fixed(row["max_error"].get<double>());
  }
  report.summary = summary.str();
}

Scalar parse_entry(const json& entry, const std::string& field, ScalarField scalar_field) {
  if (entry.is_number()) return Scalar(entry.get<double>(), 0.0);
  if (entry.is_array() && entry.size() == 2 && entry[0].is_number() && entry[1].is_number()) {
    const Scalar z(entry[0].get<double>(), entry[1].get<double>());
    if (scalar_field == ScalarField::real && z.imag() != 0.0) {
      throw SchemaError(field, "complex entry in a real frame");
    }
    return z;
  }
  throw SchemaError(field, "entries must be numbers or [re, im] pairs");
}

Eigen::MatrixXcd parse_matrix(const json& doc, const std::string& field, std::size_t rows, std::size_t cols,
                              ScalarField scalar_field) {
  if (!doc.contains(field)) throw SchemaError(field, "missing");
  const json& m = doc.at(field);
  if (!m.is_array() || m.size() != rows) {
    throw SchemaError(field, "expected " + std::to_string(rows) + " rows");
  }
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!m[i].is_array() || m[i].size() != cols) {
      throw SchemaError(field, "row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_entry(m[i][j], field, scalar_field);
    }
  }
  return out;
}

std::size_t positive_integer(const json& doc, const std::string& field) {
  if (!doc.contains(field)) throw SchemaError(field, "missing");
  const json& v = doc.at(field);
  if (!v.is_number_integer() || v.get<long long>() < 1) throw SchemaError(field, "must be a positive integer");
  return v.get<std::size_t>();
}

}  // namespace

std::string to_string(Command command) {
  for (const auto& entry : kCommands) {
    if (entry.command == command) return entry.name;
  }
  return "unknown";
}

Command parse_command(const std::string& text) {
  for (const auto& entry : kCommands) {
    if (text == entry.name) return entry.command;
  }
  throw SchemaError("command", "unknown command '" + text + "'");
}

void apply_environment(RunConfig& config) {
  const char* value = std::getenv("LIPFRAME_SEED");
  if (value == nullptr) return;
  const std::string text(value);
  std::size_t used = 0;
  unsigned long long seed = 0;
  try {
    seed = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size() || text.front() == '-') {
    throw SchemaError("LIPFRAME_SEED", "expected a non-negative integer, got '" + text + "'");
  }
  config.seed = seed;
}

json config_to_json(const RunConfig& c) {
  json j{{"command", to_string(c.command)},
         {"fixture", c.fixture},
         {"n_pairs", c.n_pairs},
         {"n_probes", c.n_probes},
         {"seed", c.seed},
         {"tol", c.tol},
         {"solver",
          {{"lambda", c.solver.damping},
           {"max_iter", c.solver.max_iter},
           {"residual_tol", c.solver.residual_tol},
           {"membership_slack", c.solver.membership_slack}}},
         {"samples", c.samples},
         {"out", c.out}};
  switch (c.command) {
    case Command::certify:
      j["bessel_only"] = c.bessel_only;
      break;
    case Command::similarity:
      j["scale_fg"] = c.scale_fg;
      j["scale_tw"] = c.scale_tw;
      break;
    case Command::interpolate:
      j["a"] = c.interp_a;
      j["b"] = c.interp_b;
      j["c"] = c.interp_c;
      j["d"] = c.interp_d;
      j["partner"] = c.partner;
      break;
    case Command::orthogonality:
    case Command::direct_sum:
      j["partner"] = c.partner;
      break;
    case Command::reconstruct_sweep:
      j["n_values"] = c.n_values;
      j["csv"] = c.csv_out;
      break;
    case Command::dual:
      break;
  }
  return j;
}

json RunReport::to_json() const {
  return json{{"version", kVersion}, {"command", config.value("command", "")}, {"config", config},
              {"payload", payload},  {"wall_time", wall_time}};
}

Frame parse_frame_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("document", "expected a JSON object");
  if (!doc.contains("p")) throw SchemaError("p", "missing");
  if (!doc.at("p").is_number()) throw SchemaError("p", "must be a number");
  const double p = doc.at("p").get<double>();
  if (!(p >= 1.0) || !std::isfinite(p)) throw SchemaError("p", "must satisfy 1 <= p < inf");
  const std::size_t n_terms = positive_integer(doc, "N");
  const std::size_t dim = positive_integer(doc, "ambient_dim");
  if (!doc.contains("scalar_field")) throw SchemaError("scalar_field", "missing");
  const json& sf = doc.at("scalar_field");
  if (!sf.is_string() || (sf != "real" && sf != "complex")) {
    throw SchemaError("scalar_field", "must be \"real\" or \"complex\"");
  }
  const ScalarField field = sf == "real" ? ScalarField::real : ScalarField::complex;
  const Eigen::MatrixXcd u = parse_matrix(doc, "U_matrix", n_terms, dim, field);
  const Eigen::MatrixXcd v = parse_matrix(doc, "V_matrix", dim, n_terms, field);
  const Frame frame = fixtures::linear_frame(u, v, p);
  if (field == ScalarField::real) return frame;
  SubsetSpec m = subsets::whole_space(dim, ScalarField::complex);
  return Frame(m, frame.p(), frame.maps(), frame.vectors());
}

Frame parse_frame_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("path", "cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("document", e.what());
  }
  return parse_frame_json(doc);
}

std::vector<Frame> resolve_frames(const std::string& fixture) {
  if (fixture.empty()) throw SchemaError("fixture", "missing");
  std::error_code ec;
  if (std::filesystem::is_regular_file(fixture, ec)) return {parse_frame_file(fixture)};
  return fixtures::build(fixtures::parse_fixture_id(fixture));
}

RunReport run(const RunConfig& config) {
  try {
    config.solver.validate();
  } catch (const Error& e) {
    throw SchemaError("solver", e.what());
  }
  if (config.n_pairs < 1) throw SchemaError("n-pairs", "must be at least 1");
  if (config.n_probes < 1) throw SchemaError("n-probes", "must be at least 1");
  if (config.samples < 1) throw SchemaError("samples", "must be at least 1");
  if (!(config.tol >= 0.0)) throw SchemaError("tol", "must be non-negative");

  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.config = config_to_json(config);
  switch (config.command) {
    case Command::certify:
      run_certify(config, report);
      break;
    case Command::dual:
      run_dual(config, report);
      break;
    case Command::similarity:
      run_similarity(config, report);
      break;
    case Command::orthogonality:
      run_orthogonality(config, report);
      break;
    case Command::interpolate:
      run_interpolate(config, report);
      break;
    case Command::direct_sum:
      run_direct_sum(config, report);
      break;
    case Command::reconstruct_sweep:
      run_reconstruct_sweep(config, report);
      break;
  }
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const SchemaError*>(&error) != nullptr) return 2;
  if (dynamic_cast<const PreconditionError*>(&error) != nullptr) return 3;
  if (dynamic_cast<const MembershipError*>(&error) != nullptr) return 3;
  if (dynamic_cast<const FrameMismatch*>(&error) != nullptr) return 3;
  return 4;
}

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
  RunReport report;
  try {
    report = run(config);
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    err << "error: " << e.what() << "\n";
    if (!config.out.empty()) {
      RunReport failed;
      failed.config = config_to_json(config);
      failed.payload = json{{"error", {{"exit_code", code}, {"message", e.what()}}}};
      std::ofstream file(config.out);
      file << failed.to_json().dump(2) << "\n";
    }
    return code;
  }

  if (!config.out.empty()) {
    std::ofstream file(config.out);
    if (!file) {
      err << "error: cannot write '" << config.out << "'\n";
      return 2;
    }
    file << report.to_json().dump(2) << "\n";
  }
  if (!report.csv.empty()) {
    std::string csv_path = config.csv_out;
    if (csv_path.empty() && !config.out.empty()) {
      csv_path = std::filesystem::path(config.out).replace_extension(".csv").string();
    }
    if (!csv_path.empty()) {
      std::ofstream file(csv_path);
      file << report.csv;
    } else {
      out << report.csv;
    }
  }
  out << report.summary << "\n";
  return report.exit_code;
}

}  // namespace lipframe
