#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "fixtures.hpp"
#include "regbin/error.hpp"

using namespace regbin;
using nlohmann::json;

namespace {

GeneId G(std::string const& s) { return GeneId(s); }

}  // namespace

TEST_CASE("expression CSV") {
  auto const t = parse_expression_csv("sample,A,B\nx,1.5,\ny,NaN,2\nz,NA,-3e-1\n");
  CHECK(t.genes == std::vector<GeneId>{G("A"), G("B")});
  CHECK(t.labels == std::vector<std::string>{"x", "y", "z"});
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0].at(G("A")) == 1.5);
  CHECK(std::isnan(t.rows[0].at(G("B"))));
  CHECK(std::isnan(t.rows[1].at(G("A"))));
  CHECK(t.rows[2].at(G("B")) == -0.3);

  auto const plain = parse_expression_csv("A,B\n1,2\n");
  CHECK(plain.labels == std::vector<std::string>{"row1"});
  CHECK(plain.rows[0].at(G("B")) == 2.0);
}

TEST_CASE("expression CSV errors carry line numbers") {
  CHECK_THROWS_AS(parse_expression_csv(""), ParseError);
  CHECK_THROWS_AS(parse_expression_csv("A,A\n1,2\n"), ParseError);
  try {
    parse_expression_csv("A,B\n1,2\n3\n");
    FAIL("expected a parse error");
  } catch (ParseError const& e) {
    CHECK(e.line() == 3);
  }
  try {
    parse_expression_csv("A,B\n1,2\n3,x\n");
    FAIL("expected a parse error");
  } catch (ParseError const& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_expression_csv("A\ninf\n"), ParseError);
}

TEST_CASE("parameter files") {
  auto const p = parse_params(R"({"hill_n": 4, "genes": {"a": {"kappa_rate": 2, "gamma": 0.5, "theta": 1.5, "x0": 3},
                                                          "b": {"kappa_rate": 1, "gamma": 1, "theta": 0.5, "hill_n": 8}}})");
  CHECK(p.hill_n == 4.0);
  CHECK(p.at(G("a")).kappa_rate == 2.0);
  CHECK(p.at(G("a")).x0 == 3.0);
  CHECK(p.at(G("b")).hill_n == 8.0);
  CHECK(params_from_json(to_json(p)).genes == p.genes);

  auto const csv = parse_params("gene,kappa_rate,gamma,theta,x0\na,2,0.5,1.5,3\n");
  CHECK(csv.at(G("a")) == p.at(G("a")));
  CHECK(csv.hill_n == kDefaultHillExponent);

  CHECK_THROWS_AS(parse_params(R"({"genes": {"a": {"kappa_rate": 2, "gamma": 0.5}}})"), ConfigError);
  CHECK_THROWS_AS(parse_params(R"({"genes": {"a": {"kappa_rate": 2, "gamma": 0.5, "theta": 1, "tehta": 2}}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_params(R"({"genes": {"a": {"kappa_rate": -2, "gamma": 0.5, "theta": 1}}})"), ConfigError);
  CHECK_THROWS_AS(parse_params("{"), ParseError);
  CHECK_THROWS_AS(parse_params("gene,kappa_rate\na,1\n"), ParseError);
}

TEST_CASE("simulation block") {
  auto const s = simulation_from_json(json::parse(R"({"t_end": 50, "dt": 0.02, "snapshots": {"times": [1, 2]}})"));
  CHECK(s.t_end == 50.0);
  CHECK(s.dt == 0.02);
  REQUIRE(std::holds_alternative<AtTimes>(s.snapshots));
  CHECK(std::get<AtTimes>(s.snapshots).times == std::vector<double>{1.0, 2.0});

  auto const late = simulation_from_json(json::parse(R"({"snapshots": {"count": 4, "spacing": 2.5}})"));
  REQUIRE(std::holds_alternative<LateK>(late.snapshots));
  CHECK(std::get<LateK>(late.snapshots).k == 4);
  CHECK(std::get<LateK>(late.snapshots).spacing == 2.5);

  auto const back = simulation_from_json(to_json(s));
  CHECK(back.t_end == s.t_end);
  CHECK(std::get<AtTimes>(back.snapshots).times == std::get<AtTimes>(s.snapshots).times);

  CHECK_THROWS_AS(simulation_from_json(json::parse(R"({"dt": 0})")), ConfigError);
  CHECK_THROWS_AS(simulation_from_json(json::parse(R"({"dt": 5, "t_end": 1})")), ConfigError);
}

TEST_CASE("biomarkers and tri-state tokens") {
  auto const m = parse_biomarkers_csv("gene,state\nTP53,1\nMDM2,0\n");
  CHECK(m.size() == 2);
  CHECK(m.at(G("TP53")) == TriState::One);
  CHECK(m.at(G("MDM2")) == TriState::Zero);
  CHECK_THROWS_AS(parse_biomarkers_csv("TP53,NA\n"), ParseError);
  CHECK_THROWS_AS(parse_biomarkers_csv("TP53,1\nTP53,0\n"), ParseError);

  CHECK(parse_tri_state("T") == TriState::One);
  CHECK(parse_tri_state("false") == TriState::Zero);
  CHECK(parse_tri_state("None") == TriState::NA);
  CHECK_THROWS_AS(parse_tri_state("maybe"), ParseError);
}

TEST_CASE("binarizer and sweep configs") {
  auto const b = binarizer_config_from_json(
      json::parse(R"({"epsilon": 0.01, "trigger": "no_consistent_regulator", "normalization": "per_gene"})"));
  CHECK(b.epsilon == 0.01);
  CHECK(b.trigger == BackwardTrigger::NoConsistentRegulator);
  CHECK(b.normalization == NormalizationMode::PerGene);
  CHECK(to_json(binarizer_config_from_json(to_json(b))) == to_json(b));
  CHECK_THROWS_AS(binarizer_config_from_json(json::parse(R"({"epsilon": 0.2})")), ConfigError);
  CHECK_THROWS_AS(binarizer_config_from_json(json::parse(R"({"trigger": "sometimes"})")), ConfigError);
  CHECK_THROWS_AS(binarizer_config_from_json(json::parse(R"({"normalisation": "global"})")), ConfigError);

  auto const s = sweep_config_from_json(json::parse(read_file(regbin::testing::data_path("sweep/sweep.json"))));
  CHECK(s.n_runs == 1000);
  CHECK(s.rng_seed == 1);
  CHECK(s.kappa_rate.lo == 3.0);
  CHECK(s.kappa_rate.hi == 100.0);
  CHECK(to_json(sweep_config_from_json(to_json(s))) == to_json(s));
  CHECK_THROWS_AS(sweep_config_from_json(json::parse(R"({"gamma": [1]})")), ConfigError);
  CHECK_THROWS_AS(sweep_config_from_json(json::parse(R"({"gamma": [2, 1]})")), ConfigError);
}

TEST_CASE("profile writers") {
  BinaryProfile p({G("a"), G("b")});
  p.set(G("a"), TriState::One, Provenance::Extreme);
  std::vector<LabeledProfile> const ps{{"s1", p}};
  CHECK(profiles_to_csv(ps) == "sample,gene,state,provenance\ns1,a,1,extreme\ns1,b,NA,unassigned\n");
  auto const j = json::parse(profiles_to_json(ps));
  CHECK(j[0]["sample"] == "s1");
  CHECK(j[0]["genes"][1]["state"] == "NA");

  auto const r = binarize(testing::freeze_graph(), testing::freeze_expression(), BinarizerConfig{});
  auto const log = sweep_log_jsonl(std::vector<LabeledProfile>{{"x", r}});
  std::size_t lines = 0;
  for (char c : log) lines += c == '\n';
  CHECK(lines == r.sweep_log.size());
}

TEST_CASE("numbers round-trip") {
  for (double v : {0.1, 1.0 / 3.0, 6.02e23, 0.0, -2.5, 15.69}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(15.69) == "15.69");
}

TEST_CASE("files") {
  auto const dir = std::filesystem::temp_directory_path() / "regbin_io_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  write_file(dir / "out.txt", "hello\n");
  CHECK(read_file(dir / "out.txt") == "hello\n");
  CHECK_THROWS_AS(read_file(dir / "missing.txt"), ParseError);
  std::filesystem::remove_all(dir.parent_path());
}
