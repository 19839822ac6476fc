#include "lipframe/fixtures.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "lipframe/errors.hpp"

namespace lipframe::fixtures {

namespace {

Scalar int_power(Scalar base, std::size_t n) {
  Scalar result = 1.0;
  while (n > 0) {
    if (n & 1U) result *= base;
    base *= base;
    n >>= 1U;
  }
  return result;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::size_t parse_count(const std::string& text, const std::string& field) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &pos);
  } catch (const std::exception&) {
    throw SchemaError(field, "expected a positive integer, got '" + text + "'");
  }
  if (pos != text.size() || v < 1) {
    throw SchemaError(field, "expected a positive integer, got '" + text + "'");
  }
  return static_cast<std::size_t>(v);
}

double parse_real(const std::string& text, const std::string& field) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw SchemaError(field, "expected a number, got '" + text + "'");
  }
  if (pos != text.size() || !std::isfinite(v)) {
    throw SchemaError(field, "expected a number, got '" + text + "'");
  }
  return v;
}

// Splits on commas at parenthesis depth zero.
std::vector<std::string> split_params(const std::string& text) {
  std::vector<std::string> parts;
  std::string current;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth < 0) throw SchemaError("fixture", "unbalanced ')' in '" + text + "'");
    if (c == ',' && depth == 0) {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  if (depth != 0) throw SchemaError("fixture", "unbalanced '(' in '" + text + "'");
  parts.push_back(current);
  return parts;
}

const std::map<std::string, std::vector<std::string>>& known_fixtures() {
  static const std::map<std::string, std::vector<std::string>> known = {
      {"disc", {"N"}},
      {"log", {"N", "right"}},
      {"linear", {"U", "V", "p"}},
      {"orthopair", {}},
  };
  return known;
}

}  // namespace

Frame disc_frame(std::size_t n_terms) {
  if (n_terms < 1) throw Error("disc_frame: N must be at least 1");
  SubsetSpec m = subsets::disc(Scalar(1.0 / 3.0, 0.0), 2.0 / 3.0);
  m.contains = [](const Point& z) {
    return z.dim() == 1 && std::abs(z[0]) <= 0.5 * std::abs(z[0] + 1.0) + kMembershipTolerance;
  };
  m.description = "{z in C : |z| <= |z+1|/2}";

  std::vector<LipMap> maps;
  std::vector<Point> vectors;
  for (std::size_t n = 1; n <= n_terms; ++n) {
    LipMap f;
    f.eval = [n](const Point& z) { return int_power(z[0] / (1.0 + z[0]), n); };
    f.claimed_lip = 2.25 * static_cast<double>(n) * std::pow(2.0, 1.0 - static_cast<double>(n));
    f.label = "(z/(1+z))^" + std::to_string(n);
    maps.push_back(std::move(f));
    vectors.push_back(Point({Scalar(1.0, 0.0)}, ScalarField::complex));
  }
  const double tail = std::pow(2.0, -static_cast<double>(n_terms));
  return Frame(std::move(m), 1.0, std::move(maps), std::move(vectors),
               [tail](const Point&) { return tail; });
}

Frame log_frame(std::size_t n_terms, double right_end) {
  if (n_terms < 1) throw Error("log_frame: N must be at least 1");
  if (!(right_end > 1.0)) throw Error("log_frame: right end of the window must exceed 1");
  SubsetSpec m = subsets::half_line(1.0, right_end);

  std::vector<LipMap> maps;
  std::vector<Point> vectors;
  for (std::size_t k = 0; k < n_terms; ++k) {
    LipMap f;
    f.eval = [k](const Point& x) {
      const double l = std::log(x[0].real());
      double term = 1.0;
      for (std::size_t j = 1; j <= k; ++j) term *= l / static_cast<double>(j);
      return Scalar(term, 0.0);
    };
    // sup over [1, ∞) of the derivative (log x)^{k-1}/((k-1)! x), attained at log x = k-1.
    if (k == 0) {
      f.claimed_lip = 0.0;
    } else {
      const double km1 = static_cast<double>(k - 1);
      f.claimed_lip = std::exp(km1 * (km1 > 0 ? std::log(km1) : 0.0) - km1 - std::lgamma(km1 + 1.0));
    }
    f.label = k == 0 ? std::string("1") : "(log x)^" + std::to_string(k) + "/" + std::to_string(k) + "!";
    maps.push_back(std::move(f));
    vectors.push_back(Point::real({1.0}));
  }
  const std::size_t big_n = n_terms;
  TailBound tail = [big_n](const Point& x) {
    const double v = x[0].real();
    const double l = std::log(v);
    if (!(l > 0.0)) return 0.0;
    double term = v;
    for (std::size_t j = 1; j <= big_n; ++j) term *= l / static_cast<double>(j);
    return term;
  };
  return Frame(std::move(m), 1.0, std::move(maps), std::move(vectors), std::move(tail));
}

Frame linear_frame(const Eigen::MatrixXcd& u_rows, const Eigen::MatrixXcd& v_cols, double p,
                   AmbientNorm norm) {
  const auto n_terms = u_rows.rows();
  const auto dim = u_rows.cols();
  if (n_terms < 1 || dim < 1) throw SchemaError("U", "matrix must be non-empty");
  if (v_cols.rows() != dim || v_cols.cols() != n_terms) {
    throw SchemaError("V", "expected a " + std::to_string(dim) + "x" + std::to_string(n_terms) +
                               " matrix, got " + std::to_string(v_cols.rows()) + "x" +
                               std::to_string(v_cols.cols()));
  }
  if (!u_rows.allFinite() || !v_cols.allFinite()) throw SchemaError("U/V", "entries must be finite");

  const Eigen::MatrixXcd vu = v_cols * u_rows;
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(vu);
  const auto& sigma = svd.singularValues();
  const double largest = sigma.size() ? sigma(0) : 0.0;
  const double smallest = sigma.size() ? sigma(sigma.size() - 1) : 0.0;
  if (!(largest > 0.0) || smallest <= 1e-12 * largest) {
    std::ostringstream os;
    os << "VU is not invertible (singular values in [" << smallest << ", " << largest << "])";
    throw PreconditionError("VU invertible", os.str());
  }

  const bool is_complex = !u_rows.imag().isZero(0.0) || !v_cols.imag().isZero(0.0);
  const ScalarField field = is_complex ? ScalarField::complex : ScalarField::real;
  SubsetSpec m = subsets::whole_space(static_cast<std::size_t>(dim), field, 10.0, norm);

  std::vector<LipMap> maps;
  std::vector<Point> vectors;
  for (Eigen::Index n = 0; n < n_terms; ++n) {
    const Eigen::RowVectorXcd row = u_rows.row(n);
    LipMap f;
    f.eval = [row](const Point& x) {
      Scalar s = 0.0;
      for (Eigen::Index j = 0; j < row.size(); ++j) s += row(j) * x[static_cast<std::size_t>(j)];
      return s;
    };
    if (norm.kind() == AmbientNorm::Kind::lp && norm.exponent() == 2.0) f.claimed_lip = row.norm();
    f.label = "zeta_" + std::to_string(n + 1) + " U";
    maps.push_back(std::move(f));
    std::vector<Scalar> column(static_cast<std::size_t>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) column[static_cast<std::size_t>(i)] = v_cols(i, n);
    vectors.emplace_back(std::move(column), field);
  }
  return Frame(std::move(m), p, std::move(maps), std::move(vectors));
}

std::pair<Frame, Frame> orthogonal_pair() {
  const SubsetSpec m = subsets::whole_space(1, ScalarField::real);
  auto identity = LipMap{[](const Point& x) { return x[0]; }, 1.0, "x"};
  auto zero = LipMap{[](const Point&) { return Scalar(0.0); }, 0.0, "0"};
  Frame f(m, 1.0, {identity, zero}, {Point::real({1.0}), Point::real({0.0})});
  Frame g(m, 1.0, {zero, identity}, {Point::real({0.0}), Point::real({1.0})});
  return {std::move(f), std::move(g)};
}

// ---------------------------------------------------------------------------
// Identifiers

std::string FixtureId::to_string() const {
  std::string s = name;
  char sep = ':';
  for (const auto& [k, v] : params) {
    s += sep + k + "=" + v;
    sep = ',';
  }
  return s;
}

FixtureId parse_fixture_id(const std::string& text) {
  const std::string t = trim(text);
  FixtureId id;
  const auto colon = t.find(':');
  id.name = trim(t.substr(0, colon));
  if (id.name == "orthogonal_pair") id.name = "orthopair";
  const auto& known = known_fixtures();
  const auto entry = known.find(id.name);
  if (entry == known.end()) throw SchemaError("fixture", "unknown fixture '" + id.name + "'");
  if (colon == std::string::npos) return id;

  for (const auto& raw : split_params(t.substr(colon + 1))) {
    const std::string part = trim(raw);
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw SchemaError("fixture", "expected key=value, got '" + part + "'");
    const std::string key = trim(part.substr(0, eq));
    const auto& allowed = entry->second;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw SchemaError(key, "not a parameter of fixture '" + id.name + "'");
    }
    id.params[key] = trim(part.substr(eq + 1));
  }
  return id;
}

Eigen::MatrixXcd parse_inline_matrix(const std::string& text, const std::string& field) {
  std::string body = trim(text);
  if (!body.empty() && body.front() == '(') {
    if (body.back() != ')') throw SchemaError(field, "unbalanced parentheses");
    body = body.substr(1, body.size() - 2);
  }
  std::vector<std::vector<double>> rows;
  std::stringstream row_stream(body);
  std::string row_text;
  while (std::getline(row_stream, row_text, ';')) {
    std::replace(row_text.begin(), row_text.end(), ',', ' ');
    std::stringstream entries(row_text);
    std::vector<double> row;
    std::string token;
    while (entries >> token) row.push_back(parse_real(token, field));
    if (row.empty()) throw SchemaError(field, "empty matrix row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw SchemaError(field, "empty matrix");
  const std::size_t cols = rows.front().size();
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw SchemaError(field, "rows have different lengths");
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

std::vector<Frame> build(const FixtureId& id) {
  auto param = [&id](const std::string& key) -> const std::string* {
    const auto it = id.params.find(key);
    return it == id.params.end() ? nullptr : &it->second;
  };
  if (id.name == "disc") {
    const auto* n = param("N");
    return {disc_frame(n ? parse_count(*n, "N") : 30)};
  }
  if (id.name == "log") {
    const auto* n = param("N");
    const auto* right = param("right");
    const double r = right ? parse_real(*right, "right") : 10.0;
    if (!(r > 1.0)) throw SchemaError("right", "window end must exceed 1");
    return {log_frame(n ? parse_count(*n, "N") : 40, r)};
  }
  if (id.name == "linear") {
    const auto* u = param("U");
    const auto* v = param("V");
    if (!u) throw SchemaError("U", "required for linear fixtures");
    if (!v) throw SchemaError("V", "required for linear fixtures");
    const auto* p_text = param("p");
    const double p = p_text ? parse_real(*p_text, "p") : 1.0;
    if (!(p >= 1.0)) throw SchemaError("p", "must satisfy 1 <= p < inf");
    return {linear_frame(parse_inline_matrix(*u, "U"), parse_inline_matrix(*v, "V"), p)};
  }
  if (id.name == "orthopair") {
    auto [f, g] = orthogonal_pair();
    return {std::move(f), std::move(g)};
  }
  throw SchemaError("fixture", "unknown fixture '" + id.name + "'");
}

FixtureId with_length(FixtureId id, std::size_t n_terms) {
  if (id.name != "disc" && id.name != "log") {
    throw SchemaError("fixture", "fixture '" + id.name + "' has no truncation length to sweep");
  }
  id.params["N"] = std::to_string(n_terms);
  return id;
}

}  // namespace lipframe::fixtures
