#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "regbin/graph.hpp"

namespace regbin {

/// Immutable logic expression over gene variables. And/Or are n-ary.
class BoolExpr {
 public:
  enum class Kind { Var, Not, And, Or };

  static BoolExpr var(GeneId gene);
  static BoolExpr negate(BoolExpr operand);
  static BoolExpr conj(std::vector<BoolExpr> operands);
  static BoolExpr disj(std::vector<BoolExpr> operands);

  Kind kind() const noexcept { return node_->kind; }
  // Only meaningful for Kind::Var.
  GeneId const& gene() const noexcept { return node_->gene; }
  std::span<BoolExpr const> operands() const noexcept { return node_->operands; }

  bool evaluate(std::function<bool(GeneId const&)> const& value_of) const;

  friend bool operator==(BoolExpr const& a, BoolExpr const& b);

 private:
  struct Node {
    Kind kind;
    GeneId gene;
    std::vector<BoolExpr> operands;
  };
  explicit BoolExpr(std::shared_ptr<Node const> node) : node_(std::move(node)) {}

  std::shared_ptr<Node const> node_;
};

struct Literal {
  GeneId gene;
  bool negated;
};

/// Every variable occurrence with its polarity (odd number of enclosing Nots).
std::vector<Literal> literals_of(BoolExpr const& expr);

/// Throws Error if a gene occurs both negated and un-negated.
std::map<GeneId, InteractionSign> regulator_signs(BoolExpr const& expr);

std::string to_string(BoolExpr const& expr);

class BooleanNetwork {
 public:
  BooleanNetwork() = default;
  /// `genes` may list rule-less inputs; every Var and rule target is added.
  BooleanNetwork(std::map<GeneId, BoolExpr> rules, std::vector<GeneId> genes = {});

  std::vector<GeneId> const& genes() const noexcept { return genes_; }
  std::map<GeneId, BoolExpr> const& rules() const noexcept { return rules_; }
  BoolExpr const* rule_for(GeneId const& gene) const;

  friend bool operator==(BooleanNetwork const&, BooleanNetwork const&) = default;

 private:
  std::map<GeneId, BoolExpr> rules_;
  std::vector<GeneId> genes_;
};

/// Logic document: one `TARGET = EXPR` per line with `!`, `&`, `|` and
/// parentheses (precedence NOT > AND > OR); a lone `GENE` line declares an
/// input; `#` starts a comment.
BooleanNetwork parse_boolean_network(std::string_view text);
BoolExpr parse_expression(std::string_view text);

std::string serialize_network(BooleanNetwork const& net);

/// One edge per (regulator, target) literal pair; negated literals inhibit.
RegulatoryGraph interaction_graph_of(BooleanNetwork const& net);

}  // namespace regbin
