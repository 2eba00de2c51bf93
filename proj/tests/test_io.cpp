#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "superrad/collective.hpp"
#include "superrad/errors.hpp"
#include "superrad/io/config.hpp"
#include "superrad/io/csv.hpp"
#include "superrad/io/manifest.hpp"
#include "superrad/io/svg.hpp"
#include "support.hpp"

using namespace superrad;
using namespace superrad::io;
using testing_support::kPi;

namespace {

const char* kBase = R"(# test configuration
n_spins = 4
omega0  = 2pi*100MHz
omega_d = 5e2 kHz   # trailing comment
theta   = pi/4
tau_c   = 0.1us
)";

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("superrad_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("quantity parsing") {
  CHECK(parse_quantity("2pi*100MHz", Quantity::AngularFrequency) == doctest::Approx(200.0 * kPi));
  CHECK(parse_quantity("two_pi*1 kHz", Quantity::AngularFrequency) == doctest::Approx(2e-3 * kPi));
  CHECK(parse_quantity("5e2 kHz", Quantity::AngularFrequency) == doctest::Approx(0.5));
  CHECK(parse_quantity("3 rad/ns", Quantity::AngularFrequency) == doctest::Approx(3000.0));
  CHECK(parse_quantity("1e-4ms", Quantity::Time) == doctest::Approx(0.1));
  CHECK(parse_quantity("20 ns", Quantity::Time) == doctest::Approx(0.02));
  CHECK(parse_quantity("pi/4", Quantity::Angle) == doctest::Approx(kPi / 4));
  CHECK(parse_quantity("45deg", Quantity::Angle) == doctest::Approx(kPi / 4));
  CHECK(parse_quantity("6e-5 /ms", Quantity::Rate) == doctest::Approx(6e-8));
  CHECK(parse_quantity("1/ms", Quantity::Rate) == doctest::Approx(1e-3));
  CHECK(parse_quantity("0.1/ms", Quantity::Rate) == doctest::Approx(1e-4));
  CHECK(parse_quantity("2.5", Quantity::Dimensionless) == 2.5);

  CHECK_THROWS_AS(parse_quantity("abc", Quantity::Time), ConfigError);
  CHECK_THROWS_AS(parse_quantity("", Quantity::Time), ConfigError);
  CHECK_THROWS_AS(parse_quantity("3 furlongs", Quantity::Time), ConfigError);
  CHECK_THROWS_AS(parse_quantity("3 MHz", Quantity::Time), ConfigError);
}

TEST_CASE("config parsing") {
  const auto c = parse_config(kBase);
  CHECK(c.n_spins == 4);
  CHECK(c.omega0 == doctest::Approx(200.0 * kPi));
  CHECK(c.omega_d == doctest::Approx(0.5));
  CHECK(c.tau_c == doctest::Approx(0.1));
  CHECK(c.geometry == model::Geometry::AllToAll);
  const auto* direct = std::get_if<model::DirectRates>(&c.bath);
  REQUIRE(direct != nullptr);
  CHECK(direct->p_plus == 0.0);
  CHECK(direct->p_minus == 0.0);

  SUBCASE("thermal bath") {
    const auto t = parse_config(std::string(kBase) + "omega_sl = 0.01MHz\nnbar = 2\n");
    const auto* bath = std::get_if<model::ThermalBath>(&t.bath);
    REQUIRE(bath != nullptr);
    CHECK(bath->omega_sl == doctest::Approx(0.01));
    CHECK(bath->nbar == 2.0);
  }
  SUBCASE("overrides replace file values") {
    const auto o = parse_config(kBase, {"n_spins=7", "geometry = linear"});
    CHECK(o.n_spins == 7);
    CHECK(o.geometry == model::Geometry::Linear);
  }
}

TEST_CASE("config errors name the offending key") {
  auto message = [](const std::string& text, std::vector<std::string> overrides = {}) {
    try {
      parse_config(text, overrides);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  std::string no_tau = kBase;
  no_tau.erase(no_tau.find("tau_c"));
  CHECK(message(no_tau).find("tau_c") != std::string::npos);
  CHECK(message(std::string(kBase) + "colour = red\n").find("colour") != std::string::npos);
  CHECK(message(std::string(kBase) + "theta = 0.2\n").find("theta") != std::string::npos);
  CHECK(message(std::string(kBase) + "p_plus = 1/ms\nnbar = 1\n").find("bath") != std::string::npos);
  CHECK(message(std::string(kBase) + "nbar = 1\n").find("omega_sl") != std::string::npos);
  CHECK_FALSE(message(kBase, {"bogus=1"}).empty());
  CHECK_FALSE(message(kBase, {"n_spins"}).empty());
  CHECK_FALSE(message(kBase, {"alpha_c=1.5"}).empty());
  CHECK_FALSE(message("n_spins 4\n").empty());
}

TEST_CASE("canonical form and hash") {
  const std::string reordered = R"(tau_c = 100 ns
theta = 45 deg
omega_d = 0.5
n_spins = 4
omega0 = 2pi*100MHz
)";
  const auto a = parse_config(kBase);
  const auto b = parse_config(reordered);
  CHECK(canonical_form(a) == canonical_form(b));
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 64);
  CHECK(config_hash(a).find_first_not_of("0123456789abcdef") == std::string::npos);

  const auto c = parse_config(kBase, {"n_spins=5"});
  CHECK(config_hash(a) != config_hash(c));
  // canonical lines are sorted
  std::istringstream lines(canonical_form(a));
  std::string prev, line;
  while (std::getline(lines, line)) {
    CHECK(prev <= line);
    prev = line;
  }
}

TEST_CASE("config files on disk") {
  const auto dir = scratch_dir("config");
  write_text(dir / "a.conf", kBase);
  CHECK(load_config(dir / "a.conf").n_spins == 4);
  CHECK_THROWS_AS(load_config(dir / "missing.conf"), ConfigError);
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5e-300) == "-2.5e-300");
  CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
  CHECK(std::stod(format_double(kPi)) == kPi);
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(INFINITY) == "inf");
}

TEST_CASE("csv tables") {
  CsvTable t({"a", "b"});
  CHECK(t.str() == "a,b\n");
  t.add_row(std::vector<double>{1.0, 0.5});
  t.add_row(std::vector<std::string>{"x", "y"});
  CHECK(t.str() == "a,b\n1,0.5\nx,y\n");
  CHECK_THROWS_AS(t.add_row(std::vector<double>{1.0}), std::invalid_argument);

  const auto traj = collective::evolve_populations(collective::PopulationVector::all_up(3),
                                                   collective::build_rate_matrix(3, 1.0, 0.1),
                                                   {0.0, 0.5, 1.0});
  const std::string s = collective_intensity_table(traj).str();
  CHECK(std::count(s.begin(), s.end(), '\n') == 4);
  CHECK(s.find('\r') == std::string::npos);
  CHECK(s.rfind("t_us,intensity,jz,dc\n", 0) == 0);
  CHECK(populations_table(traj).rows() == 3 * 4);
  CHECK(s == collective_intensity_table(traj).str());
}

TEST_CASE("csv output is byte-identical across writes") {
  const auto dir = scratch_dir("csv");
  CsvTable t({"t_us", "v"});
  for (int k = 0; k < 10; ++k) t.add_row(std::vector<double>{0.1 * k, std::exp(-0.3 * k)});
  write_csv(t, dir / "one.csv");
  write_csv(t, dir / "two.csv");
  CHECK(slurp(dir / "one.csv") == slurp(dir / "two.csv"));
  CHECK(slurp(dir / "one.csv") == t.str());
  CHECK_THROWS_AS(write_csv(t, dir / "no_such_dir" / "x.csv"), IoError);
}

TEST_CASE("svg chart") {
  PlotOptions opts;
  opts.title = "decay <test>";
  opts.log_y = true;
  const std::string svg =
      line_chart_svg({{"I", {0.0, 1.0, 2.0}, {1.0, 0.0, 0.25}}, {"J", {0.0, 2.0}, {2.0, 3.0}}}, opts);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("decay &lt;test&gt;") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg == line_chart_svg({{"I", {0.0, 1.0, 2.0}, {1.0, 0.0, 0.25}}, {"J", {0.0, 2.0}, {2.0, 3.0}}},
                              opts));
}

TEST_CASE("run manifest") {
  const auto cfg = parse_config(kBase);
  auto m = make_manifest(cfg, "collective-run");
  m.outputs = {"intensity.csv"};
  m.summary = {{"tau_2_us", "12.5"}};
  const std::string json = manifest_json(m);
  CHECK(json.find(config_hash(cfg)) != std::string::npos);
  CHECK(json.find("collective-run") != std::string::npos);
  CHECK(json.find("started") == std::string::npos);

  const auto dir = scratch_dir("manifest");
  write_manifest(m, dir);
  const std::string first = slurp(dir / "run_manifest.json");
  m.started = "2001-01-01T00:00:00Z";
  write_manifest(m, dir);
  CHECK(slurp(dir / "run_manifest.json") == first);
  CHECK(std::filesystem::exists(dir / "run_timestamps.json"));
  CHECK(utc_timestamp().back() == 'Z');
}
