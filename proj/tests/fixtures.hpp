#pragma once

#include <string>
#include <vector>

#include "regbin/eval.hpp"
#include "regbin/io.hpp"

namespace regbin::testing {

std::string data_path(std::string const& relative);

struct SimFixture {
  std::string name;
  BooleanNetwork net;
  HillParams params;
  SimulationSettings sim;
  std::vector<double> x0;
  ExpressionTable expected;  // reference snapshot rows
  BinaryProfile expected_profile;
};

SimFixture load_sim_fixture(std::string const& dir);
std::vector<std::string> sim_fixture_names();

// gene,state rows.
BinaryProfile load_profile_csv(std::string const& path);

struct RnaSeqFixture {
  RegulatoryGraph graph;
  RawExpression expression;
  BinaryProfile reported;
};

RnaSeqFixture load_rnaseq_fixture();

// Three genes (a, b, c) whose confusion on b repeats and gets frozen.
RegulatoryGraph freeze_graph();
ExpressionVector freeze_expression();

}  // namespace regbin::testing
