#include <catch2/catch.hpp>

#include <cstdlib>
#include <sstream>

#include "jrc/config.hpp"
#include "jrc/sweep.hpp"

namespace {

jrc::Config config_from(const std::string& text) {
  std::istringstream in(text);
  return jrc::Config::from_stream(in);
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(tok);
  return out;
}

} // namespace

TEST_CASE("config parsing and validation") {
  const auto cfg = config_from(
      "# comment\n"
      "n_antennas = 16\n"
      "n_users = 2\n"
      "n_targets = 2\n"
      "rho = 0.5\n"
      "snr_db_list = -10, 0, 10\n"
      "trials = 4\n"
      "seed = 99\n"
      "methods = proposed, no_interference\n"
      "output = out.csv\n"
      "angle_range = -60, 60\n"
      "spacing = 0.5\n");
  const auto spec = jrc::sweep_spec_from_config(cfg);
  CHECK(spec.scenario.n_antennas == 16);
  CHECK(spec.scenario.seed == 99);
  CHECK(spec.trials == 4);
  REQUIRE(spec.values.size() == 3);
  CHECK(spec.values[0] == -10.0);
  REQUIRE(spec.methods.size() == 2);
  CHECK(spec.methods[0] == jrc::Method::proposed);
  CHECK(spec.output_path == "out.csv");
}

TEST_CASE("config errors are named and precede computation") {
  CHECK_THROWS_AS(jrc::sweep_spec_from_config(config_from("methods = warp_drive\n")),
                  jrc::ConfigError);
  CHECK_THROWS_AS(
      jrc::sweep_spec_from_config(config_from("snr_db_list = 0, 0\n")),
      jrc::ConfigError);
  CHECK_THROWS_AS(jrc::sweep_spec_from_config(config_from("rho = 1.5\n")),
                  jrc::ConfigError);
  CHECK_THROWS_AS(jrc::sweep_spec_from_config(config_from("trials = 0\n")),
                  jrc::ConfigError);
  CHECK_THROWS_AS(jrc::sweep_spec_from_config(config_from("n_antennas = 1\n")),
                  jrc::ConfigError);
  CHECK_THROWS_AS(jrc::sweep_spec_from_config(
                      config_from("axis = n_antennas\n")), // list missing
                  jrc::ConfigError);
  CHECK_THROWS_AS(config_from("what is this line\n"), jrc::ConfigError);
  CHECK_THROWS_AS(jrc::Config::from_file("/nonexistent/config.cfg"), jrc::IoError);
}

TEST_CASE("JRC_SEED environment override") {
  jrc::Scenario sc;
  sc.seed = 5;
  setenv("JRC_SEED", "777", 1);
  jrc::apply_seed_env(sc);
  CHECK(sc.seed == 777);
  unsetenv("JRC_SEED");
  sc.seed = 5;
  jrc::apply_seed_env(sc);
  CHECK(sc.seed == 5);
}

TEST_CASE("single-trial sweep has one row with zero std") {
  jrc::SweepSpec spec;
  spec.scenario.n_antennas = 8;
  spec.scenario.n_users = 1;
  spec.scenario.n_targets = 1;
  spec.trials = 1;
  spec.values = {5.0};
  spec.methods = {jrc::Method::no_interference};
  const auto result = jrc::run_sweep(spec);
  REQUIRE(result.rows.size() == 1);
  CHECK(result.rows[0].std_mui == 0.0);
  CHECK(result.rows[0].trials == 1);
  CHECK(result.rows[0].method == "no_interference");
}

TEST_CASE("sweep output order is method-major then axis value") {
  jrc::SweepSpec spec;
  spec.scenario.n_antennas = 8;
  spec.scenario.n_users = 1;
  spec.scenario.n_targets = 1;
  spec.trials = 2;
  spec.values = {0.0, 5.0, 10.0};
  spec.methods = {jrc::Method::no_interference, jrc::Method::with_interference};
  const auto result = jrc::run_sweep(spec);
  REQUIRE(result.rows.size() == 6);
  for (int i = 0; i < 3; ++i) {
    CHECK(result.rows[i].method == "no_interference");
    CHECK(result.rows[i].axis_value == spec.values[i]);
    CHECK(result.rows[3 + i].method == "with_interference");
  }
}

TEST_CASE("sweep results are independent of the worker count") {
  jrc::SweepSpec spec;
  spec.scenario.n_antennas = 12;
  spec.scenario.n_users = 2;
  spec.scenario.n_targets = 2;
  spec.scenario.seed = 42;
  spec.trials = 8;
  spec.values = {0.0, 10.0};
  spec.methods = {jrc::Method::proposed, jrc::Method::svd_nulling};
  const std::string one = jrc::render_sweep(jrc::run_sweep(spec, 1), jrc::EmitFormat::csv);
  const std::string two = jrc::render_sweep(jrc::run_sweep(spec, 2), jrc::EmitFormat::csv);
  const std::string four = jrc::render_sweep(jrc::run_sweep(spec, 4), jrc::EmitFormat::csv);
  CHECK(one == two);
  CHECK(one == four);
}

TEST_CASE("csv round-trips within print precision") {
  jrc::SweepSpec spec;
  spec.scenario.n_antennas = 8;
  spec.scenario.n_users = 1;
  spec.scenario.n_targets = 1;
  spec.trials = 3;
  spec.values = {-5.0, 5.0};
  spec.methods = {jrc::Method::beamspace_nulling};
  const auto result = jrc::run_sweep(spec);
  const auto lines = split_lines(jrc::render_sweep(result, jrc::EmitFormat::csv));
  REQUIRE(lines.size() == 1 + result.rows.size());
  CHECK(lines[0] ==
        "method,snr_db,mean_mui,std_mui,mean_sigma_r_sq,mean_sigma_c_sq,trials");
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto cells = split_csv(lines[1 + i]);
    REQUIRE(cells.size() == 7);
    CHECK(cells[0] == result.rows[i].method);
    CHECK(std::stod(cells[1]) == Approx(result.rows[i].axis_value).epsilon(1e-8));
    CHECK(std::stod(cells[2]) == Approx(result.rows[i].mean_mui).epsilon(1e-8));
    CHECK(std::stod(cells[3]) == Approx(result.rows[i].std_mui).margin(1e-8));
    CHECK(std::stoi(cells[6]) == result.rows[i].trials);
  }
}

TEST_CASE("json rendering carries the same rows") {
  jrc::SweepSpec spec;
  spec.scenario.n_antennas = 8;
  spec.scenario.n_users = 1;
  spec.scenario.n_targets = 1;
  spec.trials = 2;
  spec.values = {5.0};
  spec.methods = {jrc::Method::no_interference};
  const auto result = jrc::run_sweep(spec);
  const auto parsed = nlohmann::json::parse(jrc::render_sweep(result, jrc::EmitFormat::json));
  REQUIRE(parsed.is_array());
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0]["method"] == "no_interference");
  CHECK(parsed[0]["trials"] == 2);
  CHECK(std::abs(parsed[0]["mean_mui"].get<double>() - result.rows[0].mean_mui) < 1e-12);
}

TEST_CASE("mean stability when doubling trials") {
  jrc::SweepSpec spec;
  spec.scenario.n_antennas = 12;
  spec.scenario.n_users = 2;
  spec.scenario.n_targets = 2;
  spec.scenario.seed = 7;
  spec.values = {10.0};
  spec.methods = {jrc::Method::no_interference};
  spec.trials = 200;
  const auto base = jrc::run_sweep(spec).rows[0];
  spec.trials = 400;
  const auto doubled = jrc::run_sweep(spec).rows[0];
  const double bound = 3.0 * base.std_mui / std::sqrt(double(base.trials));
  CHECK(std::abs(doubled.mean_mui - base.mean_mui) < bound);
}

TEST_CASE("beampattern experiment validation and output") {
  jrc::Scenario sc;
  sc.n_antennas = 32;
  sc.n_users = 2;
  sc.rho = 0.0;
  CHECK_THROWS_AS(jrc::run_beampattern(sc, {}, jrc::Method::proposed),
                  jrc::ConfigError);
  CHECK_THROWS_AS(jrc::run_beampattern(sc, {20.0}, jrc::Method::proposed, 2.0),
                  jrc::ConfigError);

  const auto bp = jrc::run_beampattern(sc, {22.0}, jrc::Method::proposed, 0.5);
  REQUIRE(bp.angles_deg.size() == 361);
  Eigen::Index arg = 0;
  Eigen::Map<const Eigen::VectorXd>(bp.nrp.data(), bp.nrp.size()).maxCoeff(&arg);
  CHECK(std::abs(bp.angles_deg[arg] - 22.0) <= 1.5);

  const auto lines = split_lines(jrc::render_beampattern(bp, jrc::EmitFormat::csv));
  CHECK(lines[0] == "angle_deg,nrp,nrp_db");
  REQUIRE(lines.size() == 362);
}

TEST_CASE("emit_results writes files and reports io failures") {
  jrc::SweepSpec spec;
  spec.scenario.n_antennas = 8;
  spec.scenario.n_users = 1;
  spec.scenario.n_targets = 1;
  spec.trials = 1;
  spec.values = {0.0};
  spec.methods = {jrc::Method::no_interference};
  const auto result = jrc::run_sweep(spec);
  const std::string path = "/tmp/jrc_test_emit.csv";
  jrc::emit_results(result, path, jrc::EmitFormat::csv);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "method,snr_db,mean_mui,std_mui,mean_sigma_r_sq,mean_sigma_c_sq,trials");
  std::remove(path.c_str());

  CHECK_THROWS_AS(jrc::emit_results(result, "/nonexistent_dir/x.csv", jrc::EmitFormat::csv),
                  jrc::IoError);
}
