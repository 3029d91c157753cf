#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include <fmt/format.h>

#include "fixtures.hpp"
#include "regbin/error.hpp"

using namespace regbin;
using regbin::testing::data_path;

namespace {

InteractionSign const kAct = InteractionSign::Activator;
InteractionSign const kInh = InteractionSign::Inhibitor;

GeneId G(std::string const& name) { return GeneId(name); }

std::string parse_message(char const* text) {
  try {
    parse_boolean_network(text);
  } catch (ParseError const& e) {
    return e.what();
  }
  return {};
}

using EdgeSet = std::set<std::tuple<std::string, std::string, char>>;

EdgeSet edge_set(RegulatoryGraph const& g) {
  EdgeSet out;
  for (auto const& e : g.edges()) out.emplace(e.source.str(), e.target.str(), sign_symbol(e.sign));
  return out;
}

// Random sign-consistent expression over the given genes.
BoolExpr random_expr(std::mt19937& rng, std::vector<GeneId> const& vars, std::map<GeneId, bool>& negated, int depth) {
  if (depth == 0 || rng() % 3 == 0) {
    auto const& g = vars[rng() % vars.size()];
    auto const it = negated.try_emplace(g, rng() % 2 == 0).first;
    auto v = BoolExpr::var(g);
    return it->second ? BoolExpr::negate(v) : v;
  }
  std::vector<BoolExpr> ops;
  int const arity = 2 + static_cast<int>(rng() % 2);
  for (int i = 0; i < arity; ++i) ops.push_back(random_expr(rng, vars, negated, depth - 1));
  return rng() % 2 ? BoolExpr::conj(ops) : BoolExpr::disj(ops);
}

}  // namespace

TEST_CASE("negation rule") {
  auto const net = parse_boolean_network("g3 = !g2");
  auto const* rule = net.rule_for(G("g3"));
  REQUIRE(rule);
  CHECK(*rule == BoolExpr::negate(BoolExpr::var(G("g2"))));
  CHECK(net.genes() == std::vector<GeneId>{G("g2"), G("g3")});
  CHECK(net.rule_for(G("g2")) == nullptr);
}

TEST_CASE("precedence: NOT binds tighter than AND, AND tighter than OR") {
  auto const e = parse_expression("!MDM2 & (BRCA1 | !PARP1)");
  REQUIRE(e.kind() == BoolExpr::Kind::And);
  REQUIRE(e.operands().size() == 2);
  CHECK(e.operands()[0] == BoolExpr::negate(BoolExpr::var(G("MDM2"))));
  auto const& inner = e.operands()[1];
  REQUIRE(inner.kind() == BoolExpr::Kind::Or);
  CHECK(inner.operands()[0] == BoolExpr::var(G("BRCA1")));
  CHECK(inner.operands()[1] == BoolExpr::negate(BoolExpr::var(G("PARP1"))));

  auto const f = parse_expression("a | b & !c");
  REQUIRE(f.kind() == BoolExpr::Kind::Or);
  CHECK(f.operands()[1].kind() == BoolExpr::Kind::And);
}

TEST_CASE("evaluation") {
  auto const e = parse_expression("(!GSK3 & ERK12) | (!BRCA1 & PARP1)");
  std::map<std::string, bool> v{{"GSK3", true}, {"ERK12", true}, {"BRCA1", false}, {"PARP1", true}};
  CHECK(e.evaluate([&](GeneId const& g) { return v.at(g.str()); }));
  v["PARP1"] = false;
  CHECK_FALSE(e.evaluate([&](GeneId const& g) { return v.at(g.str()); }));
}

TEST_CASE("malformed logic") {
  CHECK(parse_message("a = b & !b").find("mixed polarity") != std::string::npos);
  CHECK(parse_message("a = (b & c").find("unbalanced parentheses") != std::string::npos);
  CHECK(parse_message("a = b & c)").find("unbalanced parentheses") != std::string::npos);
  CHECK_FALSE(parse_message("a = b\na = c").empty());
  CHECK_FALSE(parse_message("a = b &").empty());
  CHECK_FALSE(parse_message("a = ").empty());
  CHECK_FALSE(parse_message("= b").empty());
  try {
    parse_boolean_network("x = y\n\ny = z & !z\n");
    FAIL("expected a parse error");
  } catch (ParseError const& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("single activation rule gives one activator edge") {
  auto const g = interaction_graph_of(parse_boolean_network("b = a"));
  REQUIRE(g.edges().size() == 1);
  CHECK(g.edges()[0] == Edge{G("a"), G("b"), kAct});
}

TEST_CASE("five-gene artificial network gives six activations and two inhibitions") {
  auto const g = interaction_graph_of(parse_boolean_network(read_file(data_path("artificial_stable/network.bn"))));
  auto const edges = edge_set(g);
  CHECK(edges == EdgeSet{{"g1", "g2", '+'}, {"g2", "g4", '+'}, {"g2", "g3", '-'}, {"g3", "g1", '+'},
                         {"g3", "g5", '+'}, {"g4", "g1", '+'}, {"g4", "g5", '-'}, {"g5", "g1", '+'}});
  CHECK(g.regulators_of(G("g1")) == std::vector<Regulator>{{G("g3"), kAct}, {G("g4"), kAct}, {G("g5"), kAct}});
}

TEST_CASE("breast cancer logic: edges enumerated literal by literal") {
  auto const net = parse_boolean_network(read_file(data_path("breast_cancer/network.bn")));
  CHECK(net.genes().size() == 13);
  // One row per literal of each rule, written out by hand.
  EdgeSet const expected{
      {"BRCA1", "EGFR", '-'},  {"EGFR", "ERK12", '+'},  {"PTEN", "PIK3CA", '-'}, {"EGFR", "PIK3CA", '+'},
      {"PIK3CA", "AKT1", '+'}, {"AKT1", "GSK3", '-'},   {"AKT1", "MDM2", '+'},   {"TP53", "MDM2", '+'},
      {"MDM2", "TP53", '-'},   {"BRCA1", "TP53", '+'},  {"PARP1", "TP53", '-'},  {"TP53", "PTEN", '+'},
      {"ERK12", "PARP1", '+'}, {"CCND1", "BRCA1", '-'}, {"AKT1", "BCL2", '+'},   {"BCL2", "BAX", '-'},
      {"TP53", "BAX", '+'},    {"GSK3", "CCND1", '-'},  {"ERK12", "CCND1", '+'}, {"BRCA1", "CCND1", '-'},
      {"PARP1", "CCND1", '+'}};
  auto const g = interaction_graph_of(net);
  CHECK(edge_set(g) == expected);
  CHECK(g.edges().size() == 21);
}

TEST_CASE("serialization round-trips and line order is irrelevant") {
  auto const text = read_file(data_path("breast_cancer/network.bn"));
  auto const net = parse_boolean_network(text);
  CHECK(parse_boolean_network(serialize_network(net)) == net);

  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    lines.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  std::mt19937 rng(9);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(lines.begin(), lines.end(), rng);
    std::string shuffled;
    for (auto const& l : lines) shuffled += l + "\n";
    auto const other = parse_boolean_network(shuffled);
    CHECK(other == net);
    CHECK(interaction_graph_of(other) == interaction_graph_of(net));
  }
}

TEST_CASE("random networks: edges and literals match both ways") {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    int const n = 1 + static_cast<int>(rng() % 32);
    std::vector<GeneId> genes;
    for (int i = 0; i < n; ++i) genes.push_back(G(fmt::format("n{}", i)));
    std::map<GeneId, BoolExpr> rules;
    for (auto const& g : genes) {
      if (rng() % 4 == 0) continue;
      std::vector<GeneId> vars;
      int const k = 1 + static_cast<int>(rng() % 4);
      for (int i = 0; i < k; ++i) vars.push_back(genes[rng() % genes.size()]);
      std::map<GeneId, bool> negated;
      rules.emplace(g, random_expr(rng, vars, negated, 3));
    }
    BooleanNetwork const net(rules, genes);

    std::set<std::tuple<std::string, std::string, bool>> literals;
    for (auto const& [target, expr] : net.rules())
      for (auto const& lit : literals_of(expr)) literals.emplace(lit.gene.str(), target.str(), lit.negated);
    std::set<std::tuple<std::string, std::string, bool>> edges;
    auto const g = interaction_graph_of(net);
    for (auto const& e : g.edges()) edges.emplace(e.source.str(), e.target.str(), e.sign == kInh);
    CHECK(edges == literals);
    CHECK(parse_boolean_network(serialize_network(net)) == net);
  }
}
