#include <cstdio>
#include <filesystem>
#include <fstream>

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include "holomera/engine.hpp"
#include "holomera/io.hpp"

using namespace holomera;

namespace {

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("config parses files with comments and whitespace") {
  const auto path = temp_file("holomera_cfg_test.txt");
  {
    std::ofstream out(path);
    out << "# run parameters\n";
    out << "  d = 8   # network depth\n";
    out << "eps=0.0037\n";
    out << "\n";
    out << "mode = radial\n";
  }
  const Config c = Config::from_file(path.string());
  REQUIRE(c.get_int("d", 0) == 8);
  REQUIRE(c.get_double("eps", 0.0) == Catch::Approx(0.0037).margin(1e-15));
  REQUIRE(c.get("mode", "") == "radial");
  REQUIRE(c.get("missing", "fallback") == "fallback");
  REQUIRE_FALSE(c.has("missing"));
  std::filesystem::remove(path);
}

TEST_CASE("config overrides and validation") {
  Config c;
  c.set_pair("d=6");
  c.set_pair(" seed = 17 ");
  REQUIRE(c.get_int("seed", 0) == 17);
  c.set_pair("d=9");  // later override wins
  REQUIRE(c.get_int("d", 0) == 9);
  REQUIRE_THROWS_AS(c.set_pair("no-equals-sign"), ConfigError);
  REQUIRE_THROWS_AS(c.set_pair("=value"), ConfigError);
  c.set_pair("word=abc");
  REQUIRE_THROWS_AS(c.get_double("word", 0.0), ConfigError);
  c.set_pair("frac=2.5");
  REQUIRE_THROWS_AS(c.get_int("frac", 0), ConfigError);
  REQUIRE_THROWS_AS(Config::from_file("/nonexistent/holomera.cfg"),
                    ConfigError);
}

TEST_CASE("config hash is canonical under insertion order") {
  Config a, b;
  a.set_pair("x=1");
  a.set_pair("y=2");
  b.set_pair("y=2");
  b.set_pair("x=1");
  REQUIRE(a.hash() == b.hash());
  b.set_pair("x=3");
  REQUIRE(a.hash() != b.hash());
  REQUIRE(hash_hex(a.hash()).size() == 16);
}

TEST_CASE("CSV round trip preserves 17 significant digits") {
  const auto path = temp_file("holomera_csv_test.csv");
  Config cfg;
  cfg.set_pair("d=4");
  {
    CsvWriter w(path.string(), {"x", "y"}, cfg.hash());
    w.row_num({pi, 1.0 / 3.0});
    w.row_num({-25.9799365795, 1e-300});
  }
  const CsvTable t = read_csv(path.string());
  REQUIRE(t.header == "# holomera v" + std::string(holomera_version) +
                          " config=" + hash_hex(cfg.hash()));
  REQUIRE(t.columns == std::vector<std::string>{"x", "y"});
  REQUIRE(t.rows.size() == 2);
  REQUIRE(t.num(0, t.column("x")) == pi);
  REQUIRE(t.num(0, t.column("y")) == 1.0 / 3.0);
  REQUIRE(t.num(1, 0) == -25.9799365795);
  REQUIRE(t.num(1, 1) == 1e-300);
  REQUIRE_THROWS_AS(t.column("z"), ConfigError);
  REQUIRE_THROWS_AS(read_csv("/nonexistent/file.csv"), ConfigError);
  std::filesystem::remove(path);
}

TEST_CASE("network JSON is valid JSON with full payload") {
  const MeraNetwork net = build_network(3, analytic_gates());
  const HologronGauge gg{0.1, -0.2, 0.3, 0.4};
  const nlohmann::json js = nlohmann::json::parse(network_json(net, gg));
  REQUIRE(js["version"] == holomera_version);
  REQUIRE(js["D"] == 3);
  REQUIRE(js["w"].size() == 16);
  REQUIRE(js["u"].size() == 16);
  REQUIRE(js["core"].size() == 16);
  REQUIRE(js["gauge"].size() == 4);
  REQUIRE(js["gauge"][1].get<double>() == -0.2);
  // Column-major w entries round trip exactly.
  REQUIRE(js["w"][0][0].get<double>() == net.gates.w(0, 0).real());
  double norm2 = 0.0;
  for (const auto& amp : js["core"])
    norm2 += amp[0].get<double>() * amp[0].get<double>() +
             amp[1].get<double>() * amp[1].get<double>();
  REQUIRE(norm2 == Catch::Approx(1.0).margin(1e-12));
}
