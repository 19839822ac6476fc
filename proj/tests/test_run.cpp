#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lipframe/errors.hpp"
#include "lipframe/run.hpp"

using namespace lipframe;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path.string();
}

RunConfig config_for(Command command, const std::string& fixture) {
  RunConfig c;
  c.command = command;
  c.fixture = fixture;
  c.n_pairs = 500;
  c.n_probes = 16;
  c.seed = 3;
  return c;
}

int quiet_execute(const RunConfig& c) {
  std::ostringstream out;
  std::ostringstream err;
  return execute(c, out, err);
}

}  // namespace

TEST_CASE("frame files") {
  const std::string ok = R"({"p": 1, "N": 1, "ambient_dim": 1, "scalar_field": "real",
                             "U_matrix": [[2]], "V_matrix": [[1]]})";
  const Frame f = parse_frame_file(write_temp("lipframe_ok.json", ok));
  CHECK(frame_map(f, Point::scalar(1.5)) == Point::scalar(3.0));

  const Frame c = parse_frame_json(nlohmann::json::parse(
      R"({"p": 2, "N": 1, "ambient_dim": 1, "scalar_field": "complex", "U_matrix": [[[0, 1]]], "V_matrix": [[1]]})"));
  CHECK(frame_map(c, Point::scalar(1.0))[0] == Scalar(0.0, 1.0));

  auto field_of = [](const std::string& text) {
    try {
      (void)parse_frame_json(nlohmann::json::parse(text));
    } catch (const SchemaError& e) {
      return e.field();
    }
    return std::string("none");
  };
  CHECK(field_of(R"({"N": 1, "ambient_dim": 1, "scalar_field": "real", "U_matrix": [[2]], "V_matrix": [[1]]})") == "p");
  CHECK(field_of(R"({"p": 0.5, "N": 1, "ambient_dim": 1, "scalar_field": "real", "U_matrix": [[2]], "V_matrix": [[1]]})") == "p");
  CHECK(field_of(R"({"p": 1, "N": 0, "ambient_dim": 1, "scalar_field": "real", "U_matrix": [[2]], "V_matrix": [[1]]})") == "N");
  CHECK(field_of(R"({"p": 1, "N": 1, "ambient_dim": 1, "scalar_field": "quaternion", "U_matrix": [[2]], "V_matrix": [[1]]})") ==
        "scalar_field");
  CHECK(field_of(R"({"p": 1, "N": 1, "ambient_dim": 1, "scalar_field": "real", "U_matrix": [[2, 3]], "V_matrix": [[1]]})") ==
        "U_matrix");
  CHECK(field_of(R"({"p": 1, "N": 1, "ambient_dim": 1, "scalar_field": "real", "U_matrix": [[2]]})") == "V_matrix");
  CHECK(field_of(R"({"p": 1, "N": 1, "ambient_dim": 1, "scalar_field": "real", "U_matrix": [[[1, 1]]], "V_matrix": [[1]]})") ==
        "U_matrix");
  CHECK_THROWS_AS(parse_frame_file(write_temp("lipframe_bad.json", "{not json")), SchemaError);
  CHECK_THROWS_AS(parse_frame_file("/nonexistent/frame.json"), SchemaError);
}

TEST_CASE("commands parse") {
  CHECK(parse_command("direct-sum") == Command::direct_sum);
  CHECK(to_string(Command::reconstruct_sweep) == "reconstruct-sweep");
  CHECK_THROWS_AS(parse_command("frobnicate"), SchemaError);
}

TEST_CASE("exit codes") {
  CHECK(quiet_execute(config_for(Command::certify, "disc:N=30")) == 0);
  CHECK(quiet_execute(config_for(Command::certify, "linear:U=(1),V=(0)")) == 3);
  CHECK(quiet_execute(config_for(Command::certify, "nonsense:N=3")) == 2);
  CHECK(quiet_execute(config_for(Command::orthogonality, "disc:N=5")) == 2);

  RunConfig interp = config_for(Command::interpolate, "orthopair");
  CHECK(quiet_execute(interp) == 0);
  interp.interp_c = 1.0;
  interp.interp_d = 1.0;
  CHECK(quiet_execute(interp) == 3);

  // λ = 1 cannot invert S = 2 I.
  CHECK(quiet_execute(config_for(Command::dual, "linear:U=(2),V=(1)")) == 4);
  RunConfig dual = config_for(Command::dual, "linear:U=(2),V=(1)");
  dual.solver.damping = 0.5;
  CHECK(quiet_execute(dual) == 0);

  // A frame with S = I is never orthogonal to itself.
  const std::string flat = write_temp("lipframe_flat.json", R"({"p": 1, "N": 2, "ambient_dim": 1, "scalar_field": "real",
                                                                 "U_matrix": [[1], [0]], "V_matrix": [[1, 0]]})");
  CHECK(quiet_execute(config_for(Command::orthogonality, flat)) == 2);
  RunConfig pair = config_for(Command::orthogonality, flat);
  pair.partner = flat;
  CHECK(quiet_execute(pair) == 1);

  RunConfig bad_solver = config_for(Command::certify, "disc");
  bad_solver.solver.max_iter = 0;
  CHECK(quiet_execute(bad_solver) == 2);
}

TEST_CASE("payloads") {
  const RunReport cert = run(config_for(Command::certify, "orthopair"));
  CHECK(cert.payload["certifications"].size() == 2);

  RunConfig sim = config_for(Command::similarity, "linear:U=(2),V=(1)");
  sim.solver.damping = 0.5;
  sim.scale_fg = 0.5;
  sim.scale_tw = 2.0;
  const RunReport s = run(sim);
  CHECK(s.exit_code == 0);
  CHECK(s.payload["is_orthogonal"] == false);
  CHECK(s.payload["projections_equal"] == true);
  CHECK(s.payload["recovered_samples"].size() == 5);

  const RunReport ds = run(config_for(Command::direct_sum, "orthopair"));
  CHECK(ds.exit_code == 0);
  CHECK(ds.payload["certification"]["verdict"] == "certified-ASF");

  RunConfig sweep = config_for(Command::reconstruct_sweep, "disc");
  const RunReport sw = run(sweep);
  CHECK(sw.exit_code == 0);
  CHECK(sw.payload["rows"].size() == 4);
  CHECK(sw.csv.rfind("N,max_error,mean_error,samples\n", 0) == 0);
  std::istringstream lines(sw.csv);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) ++count;
  CHECK(count == 5);

  CHECK_THROWS_AS(run(config_for(Command::reconstruct_sweep, "orthopair")), SchemaError);
}

TEST_CASE("reports are deterministic apart from wall time") {
  for (const auto& [command, fixture] : std::vector<std::pair<Command, std::string>>{
           {Command::certify, "disc:N=30"}, {Command::certify, "log:N=40,right=10"},
           {Command::orthogonality, "orthopair"}, {Command::direct_sum, "orthopair"},
           {Command::reconstruct_sweep, "disc"}}) {
    const RunConfig c = config_for(command, fixture);
    const RunReport a = run(c);
    const RunReport b = run(c);
    CHECK(a.payload.dump() == b.payload.dump());
    CHECK(a.config.dump() == b.config.dump());
    CHECK(a.csv == b.csv);
  }
}

TEST_CASE("report files") {
  RunConfig c = config_for(Command::reconstruct_sweep, "disc");
  c.out = (std::filesystem::temp_directory_path() / "lipframe_sweep.json").string();
  CHECK(quiet_execute(c) == 0);
  std::ifstream in(c.out);
  const nlohmann::json report = nlohmann::json::parse(in);
  for (const char* key : {"version", "command", "config", "payload", "wall_time"}) CHECK(report.contains(key));
  CHECK(report["command"] == "reconstruct-sweep");
  CHECK(std::filesystem::exists(std::filesystem::temp_directory_path() / "lipframe_sweep.csv"));

  RunConfig failing = config_for(Command::certify, "linear:U=(1),V=(0)");
  failing.out = (std::filesystem::temp_directory_path() / "lipframe_fail.json").string();
  CHECK(quiet_execute(failing) == 3);
  std::ifstream fin(failing.out);
  const nlohmann::json error_report = nlohmann::json::parse(fin);
  CHECK(error_report["payload"]["error"]["exit_code"] == 3);
}

TEST_CASE("LIPFRAME_SEED overrides the seed") {
  RunConfig c = config_for(Command::certify, "disc");
  ::setenv("LIPFRAME_SEED", "99", 1);
  apply_environment(c);
  CHECK(c.seed == 99);
  ::setenv("LIPFRAME_SEED", "x1", 1);
  CHECK_THROWS_AS(apply_environment(c), SchemaError);
  ::setenv("LIPFRAME_SEED", "-4", 1);
  CHECK_THROWS_AS(apply_environment(c), SchemaError);
  ::unsetenv("LIPFRAME_SEED");
  c.seed = 5;
  apply_environment(c);
  CHECK(c.seed == 5);
}
