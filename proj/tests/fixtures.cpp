#include "fixtures.hpp"

#include <nlohmann/json.hpp>

namespace regbin::testing {

std::string data_path(std::string const& relative) { return std::string(REGBIN_DATA_DIR) + "/" + relative; }

std::vector<std::string> sim_fixture_names() { return {"artificial_stable", "breast_cancer", "oscillator"}; }

BinaryProfile load_profile_csv(std::string const& path) {
  std::vector<std::pair<GeneId, TriState>> rows;
  auto const text = read_file(path);
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    auto const comma = line.find(',');
    rows.emplace_back(GeneId(line.substr(0, comma)), parse_tri_state(line.substr(comma + 1)));
  }
  std::vector<GeneId> genes;
  for (auto const& [g, s] : rows) genes.push_back(g);
  BinaryProfile p(genes);
  for (auto const& [g, s] : rows) p.set(g, s, Provenance::Threshold);
  return p;
}

SimFixture load_sim_fixture(std::string const& dir) {
  SimFixture f;
  f.name = dir;
  f.net = parse_boolean_network(read_file(data_path(dir + "/network.bn")));
  auto const j = nlohmann::json::parse(read_file(data_path(dir + "/params.json")));
  f.params = params_from_json(j);
  f.sim = simulation_from_json(j.at("simulation"));
  f.x0 = build_ode(f.net, f.params).initial_state();
  f.expected = parse_expression_csv(read_file(data_path(dir + "/expected.csv")));
  if (dir == "breast_cancer") {
    // Steady state SST_1 is the first row of the steady-state table.
    auto const sst = parse_expression_csv(read_file(data_path(dir + "/steady_states.csv")));
    f.expected_profile = BinaryProfile(f.net.genes());
    for (auto const& [g, v] : sst.rows.at(0)) f.expected_profile.set(g, tri_state(v == 1.0), Provenance::Threshold);
  } else {
    f.expected_profile = load_profile_csv(data_path(dir + "/expected_profile.csv"));
  }
  return f;
}

RnaSeqFixture load_rnaseq_fixture() {
  RnaSeqFixture f{parse_graph(read_file(data_path("rnaseq/graph.txt"))), {}, {}};
  f.expression = parse_expression_csv(read_file(data_path("rnaseq/expression.csv"))).rows.at(0);
  f.reported = load_profile_csv(data_path("rnaseq/reported_profile.csv"));
  return f;
}

RegulatoryGraph freeze_graph() {
  return parse_graph("c + a\nb - b\nb + c\n");
}

ExpressionVector freeze_expression() {
  ExpressionVector e;
  e.values = {{GeneId("a"), 0.7}, {GeneId("b"), 1.0}, {GeneId("c"), 0.0}};
  return e;
}

}  // namespace regbin::testing
