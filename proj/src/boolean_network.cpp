#include "regbin/boolean_network.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include <fmt/format.h>

#include "regbin/error.hpp"
#include "text_util.hpp"

namespace regbin {

BoolExpr BoolExpr::var(GeneId gene) {
  return BoolExpr(std::make_shared<Node const>(Node{Kind::Var, std::move(gene), {}}));
}

BoolExpr BoolExpr::negate(BoolExpr operand) {
  return BoolExpr(std::make_shared<Node const>(Node{Kind::Not, {}, {std::move(operand)}}));
}

BoolExpr BoolExpr::conj(std::vector<BoolExpr> operands) {
  if (operands.size() == 1) return std::move(operands.front());
  if (operands.empty()) throw Error("conjunction needs at least one operand");
  return BoolExpr(std::make_shared<Node const>(Node{Kind::And, {}, std::move(operands)}));
}

BoolExpr BoolExpr::disj(std::vector<BoolExpr> operands) {
  if (operands.size() == 1) return std::move(operands.front());
  if (operands.empty()) throw Error("disjunction needs at least one operand");
  return BoolExpr(std::make_shared<Node const>(Node{Kind::Or, {}, std::move(operands)}));
}

bool BoolExpr::evaluate(std::function<bool(GeneId const&)> const& value_of) const {
  switch (kind()) {
    case Kind::Var:
      return value_of(gene());
    case Kind::Not:
      return !operands()[0].evaluate(value_of);
    case Kind::And:
      return std::all_of(operands().begin(), operands().end(),
                         [&](BoolExpr const& e) { return e.evaluate(value_of); });
    case Kind::Or:
      return std::any_of(operands().begin(), operands().end(),
                         [&](BoolExpr const& e) { return e.evaluate(value_of); });
  }
  return false;
}

bool operator==(BoolExpr const& a, BoolExpr const& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  if (a.kind() == BoolExpr::Kind::Var) return a.gene() == b.gene();
  return std::equal(a.operands().begin(), a.operands().end(), b.operands().begin(), b.operands().end());
}

namespace {

void collect_literals(BoolExpr const& e, bool negated, std::vector<Literal>& out) {
  switch (e.kind()) {
    case BoolExpr::Kind::Var:
      out.push_back({e.gene(), negated});
      break;
    case BoolExpr::Kind::Not:
      collect_literals(e.operands()[0], !negated, out);
      break;
    default:
      for (auto const& op : e.operands()) collect_literals(op, negated, out);
  }
}

int precedence(BoolExpr::Kind kind) {
  switch (kind) {
    case BoolExpr::Kind::Or: return 1;
    case BoolExpr::Kind::And: return 2;
    default: return 3;
  }
}

void render(BoolExpr const& e, std::string& out) {
  switch (e.kind()) {
    case BoolExpr::Kind::Var:
      out += e.gene().str();
      return;
    case BoolExpr::Kind::Not: {
      auto const& inner = e.operands()[0];
      out += '!';
      bool const wrap = precedence(inner.kind()) < 3;
      if (wrap) out += '(';
      render(inner, out);
      if (wrap) out += ')';
      return;
    }
    default: {
      char const* sep = e.kind() == BoolExpr::Kind::And ? " & " : " | ";
      bool first = true;
      for (auto const& op : e.operands()) {
        if (!first) out += sep;
        first = false;
        // Same-kind children are parenthesised so the n-ary shape survives a round trip.
        bool const wrap = precedence(op.kind()) <= precedence(e.kind());
        if (wrap) out += '(';
        render(op, out);
        if (wrap) out += ')';
      }
    }
  }
}

// Recursive-descent parser over one expression.
class ExprParser {
 public:
  ExprParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  BoolExpr parse() {
    auto e = parse_or();
    skip_ws();
    if (pos_ < text_.size()) {
      if (text_[pos_] == ')') fail("unbalanced parentheses: unexpected ')'");
      fail(fmt::format("unexpected '{}'", text_.substr(pos_)));
    }
    return e;
  }

 private:
  [[noreturn]] void fail(std::string const& message) const { throw ParseError(message, line_); }

  void skip_ws() {
    while (pos_ < text_.size() && detail::is_space(text_[pos_])) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  BoolExpr parse_or() {
    std::vector<BoolExpr> ops{parse_and()};
    while (accept('|')) ops.push_back(parse_and());
    return BoolExpr::disj(std::move(ops));
  }

  BoolExpr parse_and() {
    std::vector<BoolExpr> ops{parse_unary()};
    while (accept('&')) ops.push_back(parse_unary());
    return BoolExpr::conj(std::move(ops));
  }

  BoolExpr parse_unary() {
    if (accept('!')) return BoolExpr::negate(parse_unary());
    if (accept('(')) {
      auto e = parse_or();
      if (!accept(')')) fail("unbalanced parentheses: missing ')'");
      return e;
    }
    skip_ws();
    auto const start = pos_;
    while (pos_ < text_.size() && is_valid_gene_name(text_.substr(pos_, 1))) ++pos_;
    if (pos_ == start) {
      if (pos_ >= text_.size()) fail("unexpected end of expression");
      fail(fmt::format("unexpected '{}'", text_[pos_]));
    }
    return BoolExpr::var(GeneId(std::string(text_.substr(start, pos_ - start))));
  }

  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

std::map<GeneId, InteractionSign> signs_or_throw(BoolExpr const& expr, std::size_t line) {
  std::map<GeneId, InteractionSign> signs;
  for (auto const& lit : literals_of(expr)) {
    auto const sign = lit.negated ? InteractionSign::Inhibitor : InteractionSign::Activator;
    auto [it, inserted] = signs.emplace(lit.gene, sign);
    if (!inserted && it->second != sign)
      throw ParseError(fmt::format("mixed polarity: '{}' occurs both negated and un-negated", lit.gene.str()),
                       line);
  }
  return signs;
}

}  // namespace

std::vector<Literal> literals_of(BoolExpr const& expr) {
  std::vector<Literal> out;
  collect_literals(expr, false, out);
  return out;
}

std::map<GeneId, InteractionSign> regulator_signs(BoolExpr const& expr) { return signs_or_throw(expr, 0); }

std::string to_string(BoolExpr const& expr) {
  std::string out;
  render(expr, out);
  return out;
}

BooleanNetwork::BooleanNetwork(std::map<GeneId, BoolExpr> rules, std::vector<GeneId> genes)
    : rules_(std::move(rules)) {
  std::set<GeneId> all(genes.begin(), genes.end());
  for (auto const& [target, expr] : rules_) {
    all.insert(target);
    for (auto const& [gene, sign] : regulator_signs(expr)) all.insert(gene);
  }
  genes_.assign(all.begin(), all.end());
}

BoolExpr const* BooleanNetwork::rule_for(GeneId const& gene) const {
  auto const it = rules_.find(gene);
  return it == rules_.end() ? nullptr : &it->second;
}

BoolExpr parse_expression(std::string_view text) {
  auto e = ExprParser(text, 0).parse();
  signs_or_throw(e, 0);
  return e;
}

BooleanNetwork parse_boolean_network(std::string_view text) {
  std::map<GeneId, BoolExpr> rules;
  std::map<GeneId, std::size_t> defined_at;
  std::vector<GeneId> inputs;

  for (auto const& [number, content] : detail::content_lines(text)) {
    auto const eq = content.find('=');
    if (eq == std::string_view::npos) {
      if (!is_valid_gene_name(content)) throw ParseError(fmt::format("expected TARGET = EXPR, got '{}'", content), number);
      inputs.emplace_back(std::string(content));
      continue;
    }
    auto const lhs = detail::trim(content.substr(0, eq));
    if (!is_valid_gene_name(lhs)) throw ParseError(fmt::format("invalid target '{}'", lhs), number);
    GeneId target{std::string(lhs)};
    if (auto const it = defined_at.find(target); it != defined_at.end())
      throw ParseError(fmt::format("target '{}' re-defined (first defined on line {})", lhs, it->second), number);
    auto expr = ExprParser(content.substr(eq + 1), number).parse();
    signs_or_throw(expr, number);
    defined_at.emplace(target, number);
    rules.emplace(std::move(target), std::move(expr));
  }
  return BooleanNetwork(std::move(rules), std::move(inputs));
}

std::string serialize_network(BooleanNetwork const& net) {
  std::string out;
  for (auto const& gene : net.genes()) {
    if (auto const* rule = net.rule_for(gene)) {
      out += fmt::format("{} = {}\n", gene.str(), to_string(*rule));
    } else {
      out += gene.str() + "\n";
    }
  }
  return out;
}

RegulatoryGraph interaction_graph_of(BooleanNetwork const& net) {
  std::vector<Edge> edges;
  for (auto const& [target, expr] : net.rules()) {
    for (auto const& [regulator, sign] : regulator_signs(expr)) edges.push_back({regulator, target, sign});
  }
  return RegulatoryGraph(net.genes(), std::move(edges));
}

}  // namespace regbin
